// Command-line front end: randomized verification sweeps and the two
// simulation experiments, with reproducible seeded output.
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
// configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <lrbayes/lrbayes.hpp>

namespace {

using namespace lrbayes;
using harness::ExperimentConfig;
using harness::ExperimentKind;

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cases;
    std::optional<unsigned> workers;
    std::string out;
    std::string freq_table;
    std::string canned;
    std::string corrupt_check;
};

void add_common_flags(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "key=value config file, applied first");
    cmd->add_option("--seed", ov.seed, "master seed (default 1)");
    cmd->add_option("--cases", ov.cases, "cases per hypothesis / instances (default 1000)");
    cmd->add_option("--workers", ov.workers, "worker threads; output is identical for any count");
    cmd->add_option("--out", ov.out, "output path (CSV for toy/kinship, report otherwise)");
}

ExperimentConfig build_config(ExperimentKind kind, const CliOverrides& ov) {
    ExperimentConfig cfg;
    if (!ov.config_path.empty()) harness::load_config_file(cfg, ov.config_path);
    cfg.kind = kind;
    if (!ov.canned.empty()) {
        cfg.canned = ov.canned;
        harness::apply_canned(cfg, ov.canned);
    }
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.cases) cfg.cases = *ov.cases;
    if (ov.workers) cfg.workers = *ov.workers;
    if (!ov.out.empty()) cfg.out = ov.out;
    if (!ov.freq_table.empty()) cfg.freq_table = ov.freq_table;
    if (!ov.corrupt_check.empty()) cfg.corrupt_check = ov.corrupt_check;
    harness::validate(cfg);
    return cfg;
}

int finish(const RunReport& report, const std::string& out_path) {
    const std::string text = render_canonical(report);
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw contract_error("cannot open output file " + out_path);
        file << text;
    }
    std::cerr << "elapsed " << report.duration_seconds << "s\n";
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-ratio calculus: verification sweeps and simulations"};
    app.require_subcommand(1);

    CliOverrides ov;

    CLI::App* verify = app.add_subcommand("verify", "randomized identity/inequality sweep");
    add_common_flags(verify, ov);
    verify->add_option("--corrupt-check", ov.corrupt_check,
                       "self-test hook: negate the named check's verdict")
        ->group("");

    CLI::App* toy = app.add_subcommand("toy", "two-level Gaussian source experiment");
    add_common_flags(toy, ov);
    toy->add_option("--canned", ov.canned, "named preset: corrected, neumann-case-1/2/3");

    CLI::App* kinship = app.add_subcommand("kinship", "sibling/unrelated simulation");
    add_common_flags(kinship, ov);
    kinship->add_option("--freq-table", ov.freq_table, "allele frequency CSV (bundled by default)");

    CLI::App* scoring = app.add_subcommand("scoring", "scoring-rule propriety and CLLR study");
    add_common_flags(scoring, ov);
    scoring
        ->add_option("--corrupt-check", ov.corrupt_check,
                     "self-test hook: negate the named check's verdict")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            const ExperimentConfig cfg = build_config(ExperimentKind::verify, ov);
            return finish(harness::run_verify(cfg), cfg.out);
        }
        if (toy->parsed()) {
            const ExperimentConfig cfg = build_config(ExperimentKind::toy, ov);
            const harness::ExperimentOutput r = harness::run_toy(cfg);
            std::cerr << "csv " << r.csv_path << "\n";
            return finish(r.report, "");
        }
        if (kinship->parsed()) {
            const ExperimentConfig cfg = build_config(ExperimentKind::kinship, ov);
            const kin::FrequencyTable table = kin::FrequencyTable::load_csv(
                cfg.freq_table.empty() ? std::string(LRBAYES_DATA_DIR) + "/synthetic_freqs.csv"
                                       : cfg.freq_table);
            const harness::ExperimentOutput r = harness::run_kinship(cfg, table);
            std::cerr << "csv " << r.csv_path << "\n";
            return finish(r.report, "");
        }
        const ExperimentConfig cfg = build_config(ExperimentKind::scoring, ov);
        return finish(harness::run_scoring(cfg), cfg.out);
    } catch (const harness::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
