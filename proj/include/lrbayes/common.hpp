#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

//! Shared numeric policy and error/warning channels.
//!
//! All probability-vector style inputs are validated against kSumTolerance
//! and then renormalized, so downstream code may assume exact unit mass up
//! to accumulated rounding. Degenerate-but-recoverable situations (clamped
//! variances, infinite likelihood ratios at a decision boundary) are passed
//! to a caller-supplied warning sink instead of throwing.

namespace lrbayes {

inline constexpr double kSumTolerance = 1e-9;       //!< accepted deviation of a probability mass sum from 1
inline constexpr double kVarianceFloor = 1e-12;     //!< smallest admissible variance; smaller values are clamped
inline constexpr double kInf = std::numeric_limits<double>::infinity();

//! Violated input contract (bad dimensions, negative mass, sums off by more
//! than kSumTolerance, malformed files).
class contract_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

//! Structurally valid input that is impossible under the model in use
//! (e.g. a score outside the support of its exact distribution).
class impossible_evidence_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

//! Receiver for non-fatal diagnostics. The default sink drops messages;
//! callers that care (CLI, tests) install their own.
using WarningSink = std::function<void(const std::string&)>;

inline void no_warnings(const std::string&) {}

//! True when |a - b| <= tol, with infinities of equal sign treated as equal.
inline bool is_close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= tol;
}

} // namespace lrbayes
