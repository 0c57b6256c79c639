#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "decision.hpp"
#include "gaussian_source.hpp"
#include "kinship.hpp"
#include "lr.hpp"
#include "random_models.hpp"
#include "report.hpp"
#include "scoring.hpp"

//! Experiment drivers behind the CLI: the randomized verification sweep
//! over the decision/LR/scoring identities, the two simulation studies,
//! and their CSV/summary serialization.
//!
//! Reproducibility: given (config, seed), CSV files and canonical report
//! text are byte-identical across runs and across worker counts. Worker
//! parallelism only distributes case evaluation; all aggregation runs in
//! canonical case order.

namespace lrbayes::harness {

// --- check bookkeeping ---------------------------------------------------

namespace detail {

//! Tracks the worst observed excess of a checked quantity over its bound.
//! pass means worst <= bound + tolerance, or worst < bound for strict
//! checks. Checks that never observe anything pass vacuously.
struct CheckAccumulator {
    std::string name;
    double bound = 0.0;
    double tolerance = 1e-12;
    bool strict = false;
    double worst = -kInf;
    std::string witness;

    void observe(double value, std::uint64_t instance) {
        if (value > worst) {
            worst = value;
            witness = "instance=" + format_u64(instance);
        }
    }

    CheckResult result(const std::string& corrupt_check) const {
        bool pass = strict ? worst < bound : worst <= bound + tolerance;
        std::string w = witness.empty() ? "-" : witness;
        if (name == corrupt_check) {
            pass = !pass;
            w += " [negated by corrupt_check hook]";
        }
        return {name, pass, worst, bound, tolerance, w};
    }
};

inline double relative_gap(double a, double b) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) / scale;
}

//! Restriction of an instance to hypotheses (i, j), renormalized prior.
struct TwoHypothesisView {
    ProbabilityVector prior;
    DiscreteEvidenceModel model;
};

inline std::optional<TwoHypothesisView> two_hypothesis_view(const DiscreteEvidenceModel& model,
                                                            const ProbabilityVector& prior,
                                                            std::size_t i, std::size_t j) {
    const double mass = prior[i] + prior[j];
    if (mass <= 0.0) return std::nullopt;
    std::vector<double> rows(2 * model.outcomes());
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        rows[k] = model.likelihood(i, k);
        rows[model.outcomes() + k] = model.likelihood(j, k);
    }
    return TwoHypothesisView{ProbabilityVector({prior[i] / mass, prior[j] / mass}),
                             DiscreteEvidenceModel(2, model.outcomes(), std::move(rows))};
}

} // namespace detail

// --- the verification sweep ----------------------------------------------

//! Randomized verification of the exact identities and inequalities on
//! enumerated models: Bayes-decision cost bounds, the posterior martingale,
//! LR tail identities and 1/t bounds, threshold/Bayes agreement, chained
//! LRs, scoring-rule propriety, entropy decrease, and CLLR invariances.
inline RunReport run_verify(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t n_inst = cfg.cases;

    detail::CheckAccumulator bd_cost{"bd_cost_after_evidence"};
    detail::CheckAccumulator martingale{"posterior_martingale"};
    detail::CheckAccumulator slice_cost{"coarsened_slice_cost"};
    detail::CheckAccumulator rescale_value{"bd_value_rescaling"};
    detail::CheckAccumulator action_invariance{"bd_action_invariance"};
    action_invariance.tolerance = 1e-9;
    detail::CheckAccumulator mixture{"mixture_concavity"};
    detail::CheckAccumulator tail_id{"lr_tail_identity"};
    detail::CheckAccumulator tail_bnd{"lr_tail_bounds"};
    detail::CheckAccumulator mean_inv_h1{"lr_mean_inverse_under_h1"};
    detail::CheckAccumulator mean_h2{"lr_mean_under_h2"};
    detail::CheckAccumulator thr_bayes{"threshold_matches_bayes"};
    detail::CheckAccumulator thr_cost{"threshold_cost_bound"};
    detail::CheckAccumulator chain_prod{"chained_lr_product"};
    detail::CheckAccumulator bd_identity{"scoring_bd_identity"};
    detail::CheckAccumulator bd_proper{"scoring_bd_propriety"};
    detail::CheckAccumulator log_strict{"scoring_log_strict_propriety"};
    log_strict.strict = true;
    detail::CheckAccumulator ent_decrease{"entropy_decrease"};
    detail::CheckAccumulator ent_equal{"entropy_equality_uninformative"};
    detail::CheckAccumulator two_term{"posterior_entropy_two_term_form"};
    detail::CheckAccumulator cllr_relabel{"cllr_relabel_invariance"};
    detail::CheckAccumulator cllr_split{"cllr_split_invariance"};

    for (std::uint64_t i = 0; i < n_inst; ++i) {
        const RandomInstance inst = random_instance(cfg.seed, i);
        RngStream aux(cfg.seed ^ 0x9D2C5680A5A5A5A5ull, i);
        const std::size_t k = inst.model.outcomes();
        const std::size_t n = inst.model.hypotheses();

        // Bayes cost of deciding after evidence never exceeds the prior cost.
        const BayesDecision prior_bd = bayes_decision(inst.cost, inst.prior);
        const double ebd = expected_bd_cost(inst.cost, inst.prior, inst.model);
        bd_cost.observe(ebd - prior_bd.cost, i);

        // Averaging posteriors over evidence returns the prior.
        const std::vector<double> avg = expected_posterior(inst.prior, inst.model);
        double max_norm = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            max_norm = std::max(max_norm, std::fabs(avg[j] - inst.prior[j]));
        martingale.observe(max_norm, i);

        // Conditional slices of a coarsening obey the same cost bound.
        const std::vector<std::size_t> labels = random_coarsening(aux, k);
        {
            const std::size_t n_labels = 1 + *std::max_element(labels.begin(), labels.end());
            std::vector<double> coarse_rows(n * n_labels, 0.0);
            for (std::size_t h = 0; h < n; ++h)
                for (std::size_t e = 0; e < k; ++e)
                    coarse_rows[h * n_labels + labels[e]] += inst.model.likelihood(h, e);
            const DiscreteEvidenceModel coarse(n, n_labels, std::move(coarse_rows));
            for (std::size_t g = 0; g < n_labels; ++g) {
                const double label_mass = coarse.marginal(inst.prior, g);
                if (label_mass <= 0.0) continue;
                double slice_expectation = 0.0;
                for (std::size_t e = 0; e < k; ++e) {
                    if (labels[e] != g) continue;
                    const double em = inst.model.marginal(inst.prior, e);
                    if (em <= 0.0) continue;
                    slice_expectation +=
                        em / label_mass *
                        bayes_decision(inst.cost, posterior(inst.prior, inst.model, e)).cost;
                }
                const double slice_bd =
                    bayes_decision(inst.cost, posterior(inst.prior, coarse, g)).cost;
                slice_cost.observe(slice_expectation - slice_bd, i);
            }
        }

        // Positive rescaling scales the value and keeps the action; adding
        // a constant to a hypothesis column keeps the action too.
        {
            const double lambda = 0.1 + 9.9 * aux.uniform();
            std::vector<double> scaled(inst.cost.actions() * n);
            for (std::size_t a = 0; a < inst.cost.actions(); ++a)
                for (std::size_t j = 0; j < n; ++j) scaled[a * n + j] = lambda * inst.cost(a, j);
            const CostMatrix cs(inst.cost.actions(), n, std::move(scaled));
            const BayesDecision bd_s = bayes_decision(cs, inst.prior);
            rescale_value.observe(detail::relative_gap(bd_s.cost, lambda * prior_bd.cost), i);
            const auto action_gap = [&](const CostMatrix& c, std::size_t a, std::size_t b) {
                return a == b ? 0.0
                              : std::fabs(expected_cost(c, inst.prior, a) -
                                          expected_cost(c, inst.prior, b));
            };
            action_invariance.observe(action_gap(cs, bd_s.action, prior_bd.action), i);
            std::vector<double> shifted(inst.cost.actions() * n);
            for (std::size_t j = 0; j < n; ++j) {
                const double delta = -5.0 + 10.0 * aux.uniform();
                for (std::size_t a = 0; a < inst.cost.actions(); ++a)
                    shifted[a * n + j] = inst.cost(a, j) + delta;
            }
            const CostMatrix ch(inst.cost.actions(), n, std::move(shifted));
            const BayesDecision bd_h = bayes_decision(ch, inst.prior);
            action_invariance.observe(action_gap(ch, bd_h.action, prior_bd.action), i);
        }

        // Bayes cost is concave: mixtures cost at least the mixed costs.
        {
            const std::size_t parts = 2 + aux.next() % 3;
            std::vector<ProbabilityVector> components;
            std::vector<double> weights(parts);
            for (std::size_t p = 0; p < parts; ++p) {
                components.push_back(random_prob_vector(aux, n, true));
                weights[p] = -std::log(aux.uniform_pos());
            }
            const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
            for (auto& w : weights) w /= wsum;
            const MixtureComparison mc = mixture_concavity_check(inst.cost, components, weights);
            mixture.observe(mc.component_average - mc.mixture_cost, i);
        }

        // Two-hypothesis machinery on the (0, 1) restriction.
        if (const auto view = detail::two_hypothesis_view(inst.model, inst.prior, 0, 1)) {
            const LrDistribution dist = lr_distribution_from_model(view->model, 0, 1);
            const double p1 = view->prior[0], p2 = view->prior[1];
            const double r = p2 > 0.0 ? p1 / p2 : kInf;

            // Threshold rule agrees with the Bayes decision under the
            // induced 2x2 cost matrix on every possible outcome.
            {
                const double gamma = std::pow(10.0, -1.0 + 2.0 * aux.uniform());
                const CostMatrix tc(2, 2, {0.0, gamma, 1.0, 0.0});
                const ThresholdDecision td{gamma, r};
                for (std::size_t e = 0; e < k; ++e) {
                    const double l1 = view->model.likelihood(0, e);
                    const double l2 = view->model.likelihood(1, e);
                    if (view->model.marginal(view->prior, e) <= 0.0) continue;
                    const double lr = l2 == 0.0 ? kInf : l1 / l2;
                    const Action a = threshold_decide(td, lr);
                    const ProbabilityVector post = posterior(view->prior, view->model, e);
                    const BayesDecision bd = bayes_decision(tc, post);
                    const bool same = (a == Action::A1) == (bd.action == 0);
                    const double gap = std::fabs(expected_cost(tc, post, 0) -
                                                 expected_cost(tc, post, 1));
                    thr_bayes.observe(!same && gap > 1e-9 ? 1.0 : 0.0, i);
                }
            }

            // Expected cost of the threshold rule when the prior alone
            // would decide against H1: never above the prior cost P(H1).
            if (r < kInf) {
                const double gamma = (r + 0.05) * (1.0 + 9.0 * aux.uniform());
                const double t = r > 0.0 ? gamma / r : kInf;
                double s_h1 = 0.0, q_h2 = 0.0;
                for (std::size_t d = 0; d < dist.size(); ++d) {
                    if (dist.support(d) >= t) {
                        s_h1 += dist.mass_h1(d);
                        q_h2 += dist.mass_h2(d);
                    }
                }
                const double rule_cost = p1 * (1.0 - s_h1) + p2 * gamma * q_h2;
                thr_cost.observe(rule_cost - p1, i);
            }

            // Means across the dist: E(1/LR | H1) caps at 1 (equality with
            // no 0 atom); E(LR | H2) mirrors with the +inf atom.
            {
                double inv_mean = 0.0, mean = 0.0;
                bool has_inf = false, has_zero = false;
                for (std::size_t d = 0; d < dist.size(); ++d) {
                    const double x = dist.support(d);
                    if (std::isinf(x)) has_inf = true;
                    else if (x == 0.0) has_zero = true;
                    if (!std::isinf(x) && x > 0.0) inv_mean += dist.mass_h1(d) / x;
                    if (std::isfinite(x)) mean += dist.mass_h2(d) * x;
                }
                mean_inv_h1.observe(inv_mean - 1.0, i);
                if (!has_zero) mean_inv_h1.observe(std::fabs(inv_mean - 1.0), i);
                mean_h2.observe(mean - 1.0, i);
                if (!has_inf) mean_h2.observe(std::fabs(mean - 1.0), i);
            }
        }

        // Chained LR through the coarsening is multiplicative.
        for (std::size_t e = 0; e < k && n >= 2; ++e) {
            const ChainedLr c = chained_lr(inst.model, labels, 0, 1, e);
            if (std::isfinite(c.full) && c.full > 0.0 && std::isfinite(c.score) &&
                c.score > 0.0 && std::isfinite(c.residual)) {
                chain_prod.observe(detail::relative_gap(c.full, c.score * c.residual), i);
            }
        }

        // Scoring: the cost-matrix rule charges the truthful statement
        // exactly the Bayes cost.
        {
            const scoring::ScoringRule rule = scoring::bd_rule(inst.cost);
            bd_identity.observe(
                std::fabs(scoring::expected_score(rule, inst.prior, inst.prior) - prior_bd.cost),
                i);

            std::vector<ProbabilityVector> candidates;
            for (std::size_t e = 0; e < k; ++e)
                if (inst.model.marginal(inst.prior, e) > 0.0)
                    candidates.push_back(posterior(inst.prior, inst.model, e));
            for (int extra = 0; extra < 5; ++extra)
                candidates.push_back(random_prob_vector(aux, n, true));
            const scoring::ProprietyReport pr =
                scoring::propriety_check(rule, inst.prior, candidates);
            for (const double m : pr.margins) bd_proper.observe(-m, i);

            // Log rule: strictly positive margin away from the truth.
            const scoring::ScoringRule lg = scoring::log_rule();
            std::vector<ProbabilityVector> log_candidates = candidates;
            for (const double scale : {1e-6, 1e-4, 1e-2}) {
                std::vector<double> q(n);
                double qs = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    qs += q[j] = std::max(0.0, inst.prior[j] + scale * (aux.uniform() - 0.5));
                if (qs <= 0.0) continue;
                for (auto& v : q) v /= qs;
                log_candidates.emplace_back(std::move(q));
            }
            const scoring::ProprietyReport lr_rep =
                scoring::propriety_check(lg, inst.prior, log_candidates);
            for (std::size_t c = 0; c < log_candidates.size(); ++c) {
                double dist_inf = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    dist_inf = std::max(dist_inf,
                                        std::fabs(log_candidates[c][j] - inst.prior[j]));
                if (dist_inf > 1e-9 && lr_rep.margins[c] < kInf)
                    log_strict.observe(-lr_rep.margins[c], i);
            }
        }

        // Evidence cannot raise expected posterior entropy; uninformative
        // evidence keeps it exactly.
        {
            const double ent = scoring::entropy(inst.prior);
            const double epe = scoring::expected_posterior_entropy(inst.prior, inst.model);
            ent_decrease.observe(epe - ent, i);
            if (inst.uninformative) ent_equal.observe(std::fabs(epe - ent), i);

            if (n == 2) {
                // The closed two-term form: per-hypothesis expected log
                // posterior of the true hypothesis.
                double alt = 0.0;
                for (std::size_t h = 0; h < 2; ++h) {
                    if (inst.prior[h] == 0.0) continue;
                    double acc = 0.0;
                    for (std::size_t e = 0; e < k; ++e) {
                        const double le = inst.model.likelihood(h, e);
                        if (le == 0.0) continue;
                        acc += le * std::log(posterior(inst.prior, inst.model, e)[h]);
                    }
                    alt -= inst.prior[h] * acc;
                }
                two_term.observe(std::fabs(epe - alt), i);
            }
        }

        // CLLR is a function of the LR distribution only: permuting
        // outcome labels or splitting an outcome in half changes nothing.
        if (n == 2) {
            const double base = scoring::cllr(inst.model).nats;
            std::vector<std::size_t> perm(k);
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t j = k; j > 1; --j) std::swap(perm[j - 1], perm[aux.next() % j]);
            std::vector<double> permuted(2 * k);
            for (std::size_t h = 0; h < 2; ++h)
                for (std::size_t e = 0; e < k; ++e)
                    permuted[h * k + perm[e]] = inst.model.likelihood(h, e);
            cllr_relabel.observe(
                std::fabs(base - scoring::cllr(DiscreteEvidenceModel(2, k, std::move(permuted)))
                                     .nats),
                i);

            const std::size_t split_at = aux.next() % k;
            std::vector<double> split(2 * (k + 1));
            for (std::size_t h = 0; h < 2; ++h) {
                for (std::size_t e = 0; e < k; ++e) {
                    const double v = inst.model.likelihood(h, e);
                    if (e == split_at) {
                        split[h * (k + 1) + e] = 0.5 * v;
                        split[h * (k + 1) + k] = 0.5 * v;
                    } else {
                        split[h * (k + 1) + e] = v;
                    }
                }
            }
            cllr_split.observe(
                std::fabs(base -
                          scoring::cllr(DiscreteEvidenceModel(2, k + 1, std::move(split))).nats),
                i);
        }
    }

    // Dedicated LR-distribution sweep: tail identity and misleading-
    // evidence bounds across thresholds, including sentinel atoms.
    for (std::uint64_t i = 0; i < n_inst; ++i) {
        const LrDistribution dist = random_lr_distribution(cfg.seed ^ 0x3C6EF372FE94F82Bull, i);
        RngStream taux(cfg.seed ^ 0x517CC1B727220A95ull, i);
        for (int j = 0; j < 20; ++j) {
            const double t = random_threshold(taux, dist);
            const TailIdentity ti = tail_identity(dist, t);
            tail_id.observe(std::fabs(ti.lhs - ti.rhs), i);
            const double tb = std::max(1.0, t);
            const TailBounds bounds = tail_bounds(dist, tb);
            tail_bnd.observe(bounds.p_low_given_h1 - 1.0 / tb, i);
            tail_bnd.observe(bounds.p_high_given_h2 - 1.0 / tb, i);
        }
    }

    RunReport report;
    report.kind = "verify";
    report.summary.push_back("instances " + format_u64(n_inst) + " seed " + format_u64(cfg.seed));
    for (const auto* acc :
         {&bd_cost, &martingale, &slice_cost, &rescale_value, &action_invariance, &mixture,
          &tail_id, &tail_bnd, &mean_inv_h1, &mean_h2, &thr_bayes, &thr_cost, &chain_prod,
          &bd_identity, &bd_proper, &log_strict, &ent_decrease, &ent_equal, &two_term,
          &cllr_relabel, &cllr_split})
        report.checks.push_back(acc->result(cfg.corrupt_check));
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// --- scoring-focused run ---------------------------------------------------

//! Scoring-rule study: propriety sweeps plus reference CLLR values for
//! three canned evidence models, reported in nats and bits.
inline RunReport run_scoring(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    detail::CheckAccumulator bd_identity{"scoring_bd_identity"};
    detail::CheckAccumulator bd_proper{"scoring_bd_propriety"};
    detail::CheckAccumulator log_strict{"scoring_log_strict_propriety"};
    log_strict.strict = true;
    detail::CheckAccumulator ent_decrease{"entropy_decrease"};

    for (std::uint64_t i = 0; i < cfg.cases; ++i) {
        const RandomInstance inst = random_instance(cfg.seed, i);
        RngStream aux(cfg.seed ^ 0x6A09E667F3BCC908ull, i);
        const BayesDecision bd = bayes_decision(inst.cost, inst.prior);

        const scoring::ScoringRule rule = scoring::bd_rule(inst.cost);
        bd_identity.observe(
            std::fabs(scoring::expected_score(rule, inst.prior, inst.prior) - bd.cost), i);

        std::vector<ProbabilityVector> candidates;
        for (int c = 0; c < 8; ++c)
            candidates.push_back(random_prob_vector(aux, inst.prior.size(), true));
        for (const double m : scoring::propriety_check(rule, inst.prior, candidates).margins)
            bd_proper.observe(-m, i);

        const scoring::ProprietyReport lg =
            scoring::propriety_check(scoring::log_rule(), inst.prior, candidates);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            double dist_inf = 0.0;
            for (std::size_t j = 0; j < inst.prior.size(); ++j)
                dist_inf = std::max(dist_inf, std::fabs(candidates[c][j] - inst.prior[j]));
            if (dist_inf > 1e-9 && lg.margins[c] < kInf) log_strict.observe(-lg.margins[c], i);
        }

        ent_decrease.observe(scoring::expected_posterior_entropy(inst.prior, inst.model) -
                                 scoring::entropy(inst.prior),
                             i);
    }

    RunReport report;
    report.kind = "scoring";
    report.summary.push_back("instances " + format_u64(cfg.cases) + " seed " +
                             format_u64(cfg.seed));
    const auto add_cllr = [&report](const char* name, const DiscreteEvidenceModel& m) {
        const scoring::Cllr c = scoring::cllr(m);
        report.summary.push_back(std::string("cllr model=") + name +
                                 " nats=" + format_double(c.nats) +
                                 " bits=" + format_double(c.bits));
    };
    add_cllr("uninformative", DiscreteEvidenceModel(2, 2, {0.5, 0.5, 0.5, 0.5}));
    add_cllr("revealing", DiscreteEvidenceModel(2, 2, {1.0, 0.0, 0.0, 1.0}));
    add_cllr("partial", DiscreteEvidenceModel(2, 2, {0.8, 0.2, 0.4, 0.6}));
    for (const auto* acc : {&bd_identity, &bd_proper, &log_strict, &ent_decrease})
        report.checks.push_back(acc->result(cfg.corrupt_check));
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// --- CSV-emitting experiments ----------------------------------------------

namespace detail {

struct ColumnStats {
    std::uint64_t finite = 0, posinf = 0, neginf = 0;
    double sum_finite = 0.0;

    void add(double log10_lr) {
        if (std::isinf(log10_lr)) {
            (log10_lr > 0 ? posinf : neginf) += 1;
        } else {
            finite += 1;
            sum_finite += log10_lr;
        }
    }

    std::string line(const std::string& hypothesis, const std::string& column) const {
        return "column_stats hypothesis=" + hypothesis + " column=" + column +
               " finite=" + format_u64(finite) + " posinf=" + format_u64(posinf) +
               " neginf=" + format_u64(neginf) +
               " mean_finite=" + format_double(finite ? sum_finite / finite : 0.0);
    }
};

//! Fixed-bin histogram of log10-LR differences for the summary: 20 bins of
//! width 0.5 on [-5, 5) plus underflow/overflow/nonfinite buckets.
struct DiffHistogram {
    static constexpr int kBins = 20;
    std::uint64_t bins[kBins] = {};
    std::uint64_t under = 0, over = 0, nonfinite = 0;

    void add(double diff) {
        if (!std::isfinite(diff)) {
            ++nonfinite;
            return;
        }
        const double pos = (diff + 5.0) / 0.5;
        if (pos < 0) ++under;
        else if (pos >= kBins) ++over;
        else ++bins[static_cast<int>(pos)];
    }

    void emit(std::vector<std::string>& out, const std::string& name,
              const std::string& hypothesis) const {
        const std::string head = "hist name=" + name + " hypothesis=" + hypothesis + " bin=";
        if (under) out.push_back(head + "underflow count=" + format_u64(under));
        for (int b = 0; b < kBins; ++b) {
            if (!bins[b]) continue;
            out.push_back(head + format_double(-5.0 + 0.5 * b) + ":" +
                          format_double(-5.0 + 0.5 * (b + 1)) + " count=" + format_u64(bins[b]));
        }
        if (over) out.push_back(head + "overflow count=" + format_u64(over));
        if (nonfinite) out.push_back(head + "nonfinite count=" + format_u64(nonfinite));
    }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw contract_error("cannot open output file " + path);
    out << content;
    if (!out) throw contract_error("write failed for " + path);
}

} // namespace detail

struct ExperimentOutput {
    RunReport report;
    std::string csv_path;
};

//! The corrected two-level Gaussian experiment (or a canned fixed-source
//! variant): n cases per hypothesis, all four LRs per case, CSV rows plus
//! a summary with per-column statistics and the known spot-check pair.
inline ExperimentOutput run_toy(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const gauss::GaussianSourceModel model(cfg.mu, cfg.var_d, cfg.var_u, cfg.var_s);

    gauss::FigureOptions opt;
    opt.fixed_mu_d = cfg.fixed_mu_d;
    opt.workers = cfg.workers;
    opt.first_case_id = 0;
    const auto same =
        gauss::figure_experiment(model, cfg.cases, gauss::SourceHypothesis::same_source,
                                 cfg.seed, opt);
    opt.first_case_id = cfg.cases;
    const auto diff =
        gauss::figure_experiment(model, cfg.cases, gauss::SourceHypothesis::different_source,
                                 cfg.seed, opt);

    std::string csv = "case_id,hypothesis,mu_d,e_u,e_s,log10_lr_ss_feature,log10_lr_cs_feature,"
                      "log10_lr_ss_score,log10_lr_cs_score\n";
    RunReport report;
    report.kind = "toy";
    const char* names[4] = {"log10_lr_ss_feature", "log10_lr_cs_feature", "log10_lr_ss_score",
                            "log10_lr_cs_score"};
    for (const auto* block : {&same, &diff}) {
        const std::string hyp = block == &same ? "same_source" : "different_source";
        detail::ColumnStats stats[4];
        double mu_d_sum = 0.0, mu_d_sq = 0.0;
        for (const auto& row : *block) {
            const double logs[4] = {std::log10(row.lr_ss_feature), std::log10(row.lr_cs_feature),
                                    std::log10(row.lr_ss_score), std::log10(row.lr_cs_score)};
            csv += format_u64(row.case_id) + "," + hyp + "," + format_double(row.mu_d) + "," +
                   format_double(row.e_u) + "," + format_double(row.e_s);
            for (const double v : logs) csv += "," + format_double(v);
            csv += "\n";
            for (int c = 0; c < 4; ++c) stats[c].add(logs[c]);
            mu_d_sum += row.mu_d;
            mu_d_sq += row.mu_d * row.mu_d;
        }
        for (int c = 0; c < 4; ++c) report.summary.push_back(stats[c].line(hyp, names[c]));
        const double n = static_cast<double>(block->size());
        const double var = n > 1 ? (mu_d_sq - mu_d_sum * mu_d_sum / n) / (n - 1) : 0.0;
        report.summary.push_back("mu_d_sample_variance hypothesis=" + hyp +
                                 " value=" + format_double(var));
        report.checks.push_back({"rows_" + hyp, block->size() == cfg.cases,
                                 static_cast<double>(block->size()),
                                 static_cast<double>(cfg.cases), 0.0, "-"});
    }

    // Known spot pair of the worked example: a trace at 5 from a claimed
    // source at 0, population N(10, 10), noise variances (2, 1).
    report.summary.insert(report.summary.begin(),
                          "spot_pair mu_d=0 e_u=5 lr_ss_feature=" +
                              format_double(gauss::lr_ss_feature(model, 0.0, 5.0)) +
                              " lr_cs_feature=" +
                              format_double(gauss::lr_cs_feature(model, 5.0, 5.0, model.var_u,
                                                                 model.var_s)));

    const std::string path = cfg.out.empty() ? "toy.csv" : cfg.out;
    detail::write_file(path, csv);
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(report), path};
}

//! The kinship simulation: n sibling and n unrelated pairs on the full
//! locus set, LRs on full and reduced prefixes, CSV rows plus difference
//! histograms mirroring the informativeness comparisons.
inline ExperimentOutput run_kinship(const ExperimentConfig& cfg,
                                    const kin::FrequencyTable& table) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    kin::KinshipOptions opt;
    opt.workers = cfg.workers;
    const auto rows = kin::kinship_experiment(table, cfg.cases, cfg.loci_full, cfg.loci_reduced,
                                              cfg.seed, opt);

    std::string csv = "case_id,hypothesis,ibs_10,log10_lr_score_10,log10_lr_feature_10,"
                      "log10_lr_feature_15,log10_lr_parentage_10\n";
    RunReport report;
    report.kind = "kinship";

    const char* col_names[4] = {"log10_lr_score_10", "log10_lr_feature_10", "log10_lr_feature_15",
                                "log10_lr_parentage_10"};
    const char* diff_names[3] = {"feature_15_minus_feature_10", "parentage_10_minus_feature_10",
                                 "score_10_minus_feature_10"};
    for (const kin::KinshipHypothesis hyp :
         {kin::KinshipHypothesis::siblings, kin::KinshipHypothesis::unrelated}) {
        const std::string name = hyp == kin::KinshipHypothesis::siblings ? "siblings" : "unrelated";
        detail::ColumnStats stats[4];
        detail::DiffHistogram hists[3];
        std::uint64_t count = 0;
        for (const auto& row : rows) {
            if (row.hypothesis != hyp) continue;
            ++count;
            const double logs[4] = {std::log10(row.lr_score_reduced),
                                    std::log10(row.lr_feature_reduced),
                                    std::log10(row.lr_feature_full),
                                    std::log10(row.lr_parentage_reduced)};
            csv += format_u64(row.case_id) + "," + name + "," +
                   format_u64(static_cast<std::uint64_t>(row.ibs_reduced));
            for (const double v : logs) csv += "," + format_double(v);
            csv += "\n";
            for (int c = 0; c < 4; ++c) stats[c].add(logs[c]);
            hists[0].add(logs[2] - logs[1]);
            hists[1].add(logs[3] - logs[1]);
            hists[2].add(logs[0] - logs[1]);
        }
        for (int c = 0; c < 4; ++c) report.summary.push_back(stats[c].line(name, col_names[c]));
        for (int h = 0; h < 3; ++h) hists[h].emit(report.summary, diff_names[h], name);
        report.checks.push_back({"rows_" + name, count == cfg.cases, static_cast<double>(count),
                                 static_cast<double>(cfg.cases), 0.0, "-"});
    }

    // Exactness of the score distributions backing the score LR column.
    {
        const kin::ScoreLrTable score_table(table, cfg.loci_reduced);
        double mass_gap = 0.0;
        for (const auto* m : {&score_table.mass_siblings(), &score_table.mass_unrelated()}) {
            const double mass = std::accumulate(m->begin(), m->end(), 0.0);
            mass_gap = std::max(mass_gap, std::fabs(mass - 1.0));
        }
        report.checks.push_back(
            {"score_distribution_mass", mass_gap <= 1e-9, mass_gap, 0.0, 1e-9, "-"});
    }

    const std::string path = cfg.out.empty() ? "kinship.csv" : cfg.out;
    detail::write_file(path, csv);
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(report), path};
}

} // namespace lrbayes::harness
