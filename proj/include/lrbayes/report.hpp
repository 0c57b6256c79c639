#pragma once

#include <string>
#include <vector>

#include "csv.hpp"

//! Run reports: one line per executed check plus free-form summary lines.
//! The canonical rendering is deterministic and excludes wall-clock time,
//! so a report file is byte-comparable across runs; the duration is kept on
//! the side for console display.

namespace lrbayes {

struct CheckResult {
    std::string name;
    bool pass;
    double measured;     //!< worst observed value of the checked quantity
    double bound;        //!< value it is compared against
    double tolerance;    //!< slack granted beyond the bound
    std::string witness; //!< replay hint for the worst case, "-" if none
};

struct RunReport {
    std::string kind;
    std::vector<CheckResult> checks;
    std::vector<std::string> summary;
    double duration_seconds = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline std::string render_canonical(const RunReport& report) {
    std::string out;
    out += "report " + report.kind + "\n";
    for (const auto& line : report.summary) out += line + "\n";
    for (const auto& c : report.checks) {
        out += std::string("check ") + (c.pass ? "PASS" : "FAIL") + " " + c.name +
               " measured=" + format_double(c.measured) + " bound=" + format_double(c.bound) +
               " tol=" + format_double(c.tolerance) + " witness=" +
               (c.witness.empty() ? "-" : c.witness) + "\n";
    }
    out += std::string("result ") + (report.all_pass() ? "PASS" : "FAIL") + "\n";
    return out;
}

} // namespace lrbayes
