#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <lrbayes/lrbayes.hpp>

using namespace lrbayes;
using harness::ExperimentConfig;
using harness::ExperimentKind;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

bool contains_line(const std::vector<std::string>& lines, const std::string& wanted) {
    return std::find(lines.begin(), lines.end(), wanted) != lines.end();
}

double parse_csv_double(const std::string& field) {
    if (field == "inf") return kInf;
    if (field == "-inf") return -kInf;
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(field);
}

} // namespace

TEST_CASE("config files set every key, tolerate comments and CRLF") {
    const std::string path = write_temp("cfg_all.conf",
                                        "# experiment setup\n"
                                        "seed = 42\r\n"
                                        "cases=7\n"
                                        "\n"
                                        "   \t\n"
                                        "out = /tmp/somewhere.csv\n"
                                        "workers = 3\n"
                                        "mu = 9.5\n"
                                        "var_d = 8\n"
                                        "var_u = 1.5\n"
                                        "var_s = 0.75\n"
                                        "mu_d = 4.25\n"
                                        "freq_table = other_freqs.csv\n"
                                        "loci_full = 12\n"
                                        "loci_reduced = 6\n"
                                        "corrupt_check = lr_tail_identity\n");
    ExperimentConfig cfg;
    harness::load_config_file(cfg, path);
    CHECK(cfg.seed == 42);
    CHECK(cfg.cases == 7);
    CHECK(cfg.out == "/tmp/somewhere.csv");
    CHECK(cfg.workers == 3);
    CHECK(cfg.mu == 9.5);
    CHECK(cfg.var_d == 8.0);
    CHECK(cfg.var_u == 1.5);
    CHECK(cfg.var_s == 0.75);
    REQUIRE(cfg.fixed_mu_d.has_value());
    CHECK(*cfg.fixed_mu_d == 4.25);
    CHECK(cfg.freq_table == "other_freqs.csv");
    CHECK(cfg.loci_full == 12);
    CHECK(cfg.loci_reduced == 6);
    CHECK(cfg.corrupt_check == "lr_tail_identity");
    harness::validate(cfg);
    std::remove(path.c_str());
}

TEST_CASE("config file failures carry the offending location or value") {
    const auto expect_failure = [](const std::string& name, const std::string& content,
                                   const std::string& needle) {
        const std::string path = write_temp(name, content);
        try {
            ExperimentConfig cfg;
            harness::load_config_file(cfg, path);
            FAIL("expected a config failure for " << name);
        } catch (const harness::config_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
        std::remove(path.c_str());
    };
    expect_failure("cfg_noeq.conf", "seed = 1\njust words\n", ":2: expected key=value");
    expect_failure("cfg_unknown.conf", "sede = 1\n", "unknown key 'sede'");
    expect_failure("cfg_badu64.conf", "cases = 12x\n", "bad unsigned value for cases");
    expect_failure("cfg_baddouble.conf", "mu = abc\n", "bad numeric value for mu");
    expect_failure("cfg_badcanned.conf", "canned = nonsense\n", "unknown canned setup");

    ExperimentConfig cfg;
    CHECK_THROWS_AS(harness::load_config_file(cfg, "/nonexistent/nothing.conf"),
                    harness::config_error);
}

TEST_CASE("canned setups pin the source parameter as documented") {
    ExperimentConfig cfg;
    cfg.fixed_mu_d = 123.0;

    harness::apply_canned(cfg, "corrected");
    CHECK(cfg.canned == "corrected");
    CHECK_FALSE(cfg.fixed_mu_d.has_value());
    CHECK(cfg.var_s == 1.0);

    harness::apply_canned(cfg, "neumann-case-1");
    REQUIRE(cfg.fixed_mu_d.has_value());
    CHECK(*cfg.fixed_mu_d == 9.0);
    CHECK(cfg.var_s == 1.0);

    harness::apply_canned(cfg, "neumann-case-2");
    CHECK(*cfg.fixed_mu_d == 0.0);

    harness::apply_canned(cfg, "neumann-case-3");
    CHECK(*cfg.fixed_mu_d == 9.0);
    CHECK(cfg.var_s == 1e-5);

    CHECK_THROWS_AS(harness::apply_canned(cfg, "neumann-case-4"), harness::config_error);
}

TEST_CASE("config validation rejects degenerate settings") {
    ExperimentConfig cfg;
    harness::validate(cfg);

    ExperimentConfig zero_cases = cfg;
    zero_cases.cases = 0;
    CHECK_THROWS_AS(harness::validate(zero_cases), harness::config_error);

    ExperimentConfig zero_workers = cfg;
    zero_workers.workers = 0;
    CHECK_THROWS_AS(harness::validate(zero_workers), harness::config_error);

    ExperimentConfig bad_loci = cfg;
    bad_loci.loci_reduced = 16;
    CHECK_THROWS_AS(harness::validate(bad_loci), harness::config_error);
}

TEST_CASE("verify run passes every check and renders deterministically") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::verify;
    cfg.seed = 5;
    cfg.cases = 150;

    const RunReport report = harness::run_verify(cfg);
    REQUIRE(report.checks.size() == 21);
    CHECK(report.kind == "verify");
    CHECK(report.all_pass());
    for (const auto& check : report.checks) {
        INFO(check.name << " measured=" << check.measured << " witness=" << check.witness);
        CHECK(check.pass);
    }
    CHECK(contains_line(report.summary, "instances 150 seed 5"));

    // Same configuration, fresh run: the canonical rendering is bytewise
    // stable, and it never mentions wall-clock duration.
    const std::string first = render_canonical(report);
    const std::string second = render_canonical(harness::run_verify(cfg));
    CHECK(first == second);
    CHECK(first.find("duration") == std::string::npos);
    CHECK(first.rfind("result PASS\n") == first.size() - 12);
}

TEST_CASE("the corrupt-check hook flips exactly the named verdict") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::verify;
    cfg.seed = 5;
    cfg.cases = 60;
    cfg.corrupt_check = "lr_tail_identity";

    const RunReport report = harness::run_verify(cfg);
    CHECK_FALSE(report.all_pass());
    int failed = 0;
    for (const auto& check : report.checks) {
        if (check.name == "lr_tail_identity") {
            ++failed;
            CHECK_FALSE(check.pass);
            CHECK(check.witness.find("negated by corrupt_check hook") != std::string::npos);
        } else {
            CHECK(check.pass);
        }
    }
    CHECK(failed == 1);
    CHECK(render_canonical(report).find("result FAIL") != std::string::npos);
}

TEST_CASE("toy run: deterministic CSV, worker independence, replayable summary") {
    const std::string out1 = write_temp("toy_out_1.csv", "");
    const std::string out3 = write_temp("toy_out_3.csv", "");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::toy;
    cfg.seed = 11;
    cfg.cases = 300;
    cfg.out = out1;

    const harness::ExperimentOutput run1 = harness::run_toy(cfg);
    CHECK(run1.csv_path == out1);
    CHECK(run1.report.all_pass());

    cfg.workers = 3;
    cfg.out = out3;
    const harness::ExperimentOutput run3 = harness::run_toy(cfg);

    const std::string csv1 = slurp(out1);
    CHECK(csv1 == slurp(out3));
    CHECK(render_canonical(run1.report) == render_canonical(run3.report));

    // The summary must be recomputable from the CSV alone. Rebuild the
    // same-source statistics line for one column and the sample variance of
    // the source means, then demand the exact rendered strings.
    std::istringstream rows(csv1);
    std::string line;
    REQUIRE(std::getline(rows, line));
    CHECK(line ==
          "case_id,hypothesis,mu_d,e_u,e_s,log10_lr_ss_feature,log10_lr_cs_feature,"
          "log10_lr_ss_score,log10_lr_cs_score");
    std::uint64_t finite = 0, posinf = 0, neginf = 0, n_rows = 0;
    double sum_finite = 0.0, mu_d_sum = 0.0, mu_d_sq = 0.0;
    std::uint64_t expect_case = 0;
    while (std::getline(rows, line)) {
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 9);
        if (fields[1] != "same_source") continue;
        CHECK(std::stoull(fields[0]) == expect_case++);
        const double mu_d = parse_csv_double(fields[2]);
        mu_d_sum += mu_d;
        mu_d_sq += mu_d * mu_d;
        const double v = parse_csv_double(fields[5]);
        if (std::isinf(v)) {
            (v > 0 ? posinf : neginf) += 1;
        } else {
            finite += 1;
            sum_finite += v;
        }
        ++n_rows;
    }
    REQUIRE(n_rows == 300);
    const std::string stats_line =
        "column_stats hypothesis=same_source column=log10_lr_ss_feature finite=" +
        format_u64(finite) + " posinf=" + format_u64(posinf) + " neginf=" + format_u64(neginf) +
        " mean_finite=" + format_double(finite ? sum_finite / static_cast<double>(finite) : 0.0);
    CHECK(contains_line(run1.report.summary, stats_line));

    const double n = static_cast<double>(n_rows);
    const std::string var_line =
        "mu_d_sample_variance hypothesis=same_source value=" +
        format_double((mu_d_sq - mu_d_sum * mu_d_sum / n) / (n - 1.0));
    CHECK(contains_line(run1.report.summary, var_line));

    // The worked spot check leads the summary.
    REQUIRE_FALSE(run1.report.summary.empty());
    CHECK(run1.report.summary.front().rfind("spot_pair mu_d=0 e_u=5 lr_ss_feature=0.0134", 0) ==
          0);

    std::remove(out1.c_str());
    std::remove(out3.c_str());
}

TEST_CASE("toy run honours canned fixed-source setups") {
    const std::string out = write_temp("toy_canned.csv", "");
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::toy;
    cfg.seed = 3;
    cfg.cases = 20;
    cfg.out = out;
    harness::apply_canned(cfg, "neumann-case-2");

    harness::run_toy(cfg);
    std::istringstream rows(slurp(out));
    std::string line;
    std::getline(rows, line); // header
    while (std::getline(rows, line)) {
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 9);
        CHECK(fields[2] == "0"); // mu_d pinned at 0 in every row
    }
    std::remove(out.c_str());
}

TEST_CASE("kinship run: worker-independent bytes and mass check") {
    const kin::FrequencyTable table =
        kin::FrequencyTable::load_csv(std::string(LRBAYES_DATA_DIR) + "/synthetic_freqs.csv");
    const std::string out1 = write_temp("kin_out_1.csv", "");
    const std::string out4 = write_temp("kin_out_4.csv", "");

    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kinship;
    cfg.seed = 23;
    cfg.cases = 120;
    cfg.out = out1;
    const harness::ExperimentOutput run1 = harness::run_kinship(cfg, table);
    CHECK(run1.report.all_pass());

    cfg.workers = 4;
    cfg.out = out4;
    const harness::ExperimentOutput run4 = harness::run_kinship(cfg, table);

    const std::string csv = slurp(out1);
    CHECK(csv == slurp(out4));
    CHECK(render_canonical(run1.report) == render_canonical(run4.report));

    std::istringstream rows(csv);
    std::string line;
    REQUIRE(std::getline(rows, line));
    CHECK(line ==
          "case_id,hypothesis,ibs_10,log10_lr_score_10,log10_lr_feature_10,"
          "log10_lr_feature_15,log10_lr_parentage_10");
    std::size_t sib = 0, unrel = 0;
    while (std::getline(rows, line)) {
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 7);
        (fields[1] == "siblings" ? sib : unrel) += 1;
    }
    CHECK(sib == 120);
    CHECK(unrel == 120);

    bool found_mass_check = false;
    for (const auto& check : run1.report.checks) {
        if (check.name != "score_distribution_mass") continue;
        found_mass_check = true;
        CHECK(check.pass);
        CHECK(check.tolerance == 1e-9);
    }
    CHECK(found_mass_check);

    bool found_hist = false;
    for (const auto& s : run1.report.summary)
        if (s.rfind("hist name=feature_15_minus_feature_10 hypothesis=siblings bin=", 0) == 0)
            found_hist = true;
    CHECK(found_hist);

    std::remove(out1.c_str());
    std::remove(out4.c_str());
}

TEST_CASE("scoring run passes and reports the reference discrimination costs") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::scoring;
    cfg.seed = 9;
    cfg.cases = 200;

    const RunReport report = harness::run_scoring(cfg);
    REQUIRE(report.checks.size() == 4);
    CHECK(report.all_pass());
    CHECK(report.kind == "scoring");

    // An uninformative model costs one full bit; a revealing one costs zero.
    CHECK(contains_line(report.summary,
                        "cllr model=uninformative nats=0.6931471805599453 bits=1"));
    CHECK(contains_line(report.summary, "cllr model=revealing nats=0 bits=0"));
    const scoring::Cllr partial = scoring::cllr(DiscreteEvidenceModel(2, 2, {0.8, 0.2, 0.4, 0.6}));
    CHECK(contains_line(report.summary, "cllr model=partial nats=" + format_double(partial.nats) +
                                            " bits=" + format_double(partial.bits)));

    const std::string rendered = render_canonical(report);
    CHECK(rendered == render_canonical(harness::run_scoring(cfg)));
    CHECK(rendered.rfind("result PASS\n") == rendered.size() - 12);
}
