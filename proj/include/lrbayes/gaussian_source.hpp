#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "gauss_density.hpp"
#include "parallel.hpp"
#include "rng.hpp"

//! Two-level Gaussian source model: sources are points theta ~ N(mu, var_d)
//! in a population, a trace measurement adds N(0, var_u) noise and a
//! reference measurement N(0, var_s) noise. On top of it, the four
//! likelihood-ratio variants that arise from crossing two questions:
//!
//!   specific source  the candidate source's parameter mu_d is known
//!   common source    both measurements come from unknown sources
//! times
//!   feature-based    the LR uses the measurements themselves
//!   score-based      the LR uses only a squared-difference score
//!
//! All densities are evaluated in the log domain; only ratios are
//! exponentiated. The score densities are scaled (non)central chi-squares
//! with one degree of freedom, written so the 1/sqrt(s) singularity cancels
//! between numerator and denominator and score 0 stays finite.

namespace lrbayes::gauss {

struct GaussianSourceModel {
    double mu;    //!< population mean of source parameters
    double var_d; //!< between-source variance
    double var_u; //!< trace measurement variance
    double var_s; //!< reference measurement variance

    GaussianSourceModel(double mu_, double var_d_, double var_u_, double var_s_,
                        const WarningSink& warn = no_warnings)
        : mu(mu_), var_d(clamp(var_d_, "var_d", warn)), var_u(clamp(var_u_, "var_u", warn)),
          var_s(clamp(var_s_, "var_s", warn)) {
        if (!std::isfinite(mu_)) throw contract_error("GaussianSourceModel: mu must be finite");
    }

private:
    static double clamp(double v, const char* name, const WarningSink& warn) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw contract_error(std::string("GaussianSourceModel: ") + name +
                                 " must be a finite nonnegative variance");
        if (v < kVarianceFloor) {
            warn(std::string("GaussianSourceModel: ") + name + " clamped to 1e-12");
            return kVarianceFloor;
        }
        return v;
    }
};

enum class SourceHypothesis { same_source, different_source };
enum class SourceScenario { common, specific };

namespace detail {

inline void require_variance(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw contract_error(std::string(what) + ": variance must be positive and finite");
}

} // namespace detail

//! One simulated case. mu_d is carried only for specific-source data, where
//! the candidate source is known.
struct MeasurementPair {
    double e_u;
    double e_s;
    std::optional<double> mu_d;
};

//! Draw a measurement pair. The source parameter is sampled from the
//! population unless fixed_mu_d pins it (the critiqued fixed-source setups).
//! Under different_source the trace comes from a fresh population draw.
inline MeasurementPair sample_pair(const GaussianSourceModel& m, SourceHypothesis hyp,
                                   SourceScenario scenario, RngStream& rng,
                                   std::optional<double> fixed_mu_d = {}) {
    const double mu_d = fixed_mu_d ? *fixed_mu_d : rng.normal(m.mu, m.var_d);
    const double e_s = rng.normal(mu_d, m.var_s);
    double e_u;
    if (hyp == SourceHypothesis::same_source) {
        e_u = rng.normal(mu_d, m.var_u);
    } else {
        const double theta = rng.normal(m.mu, m.var_d);
        e_u = rng.normal(theta, m.var_u);
    }
    MeasurementPair pair{e_u, e_s, std::nullopt};
    if (scenario == SourceScenario::specific) pair.mu_d = mu_d;
    return pair;
}

//! Specific-source, feature-based: density of the trace at the known source
//! against its density under a random other source.
inline double lr_ss_feature(const GaussianSourceModel& m, double mu_d, double e_u) {
    return std::exp(log_normal_pdf(e_u, mu_d, m.var_u) -
                    log_normal_pdf(e_u, m.mu, m.var_d + m.var_u));
}

//! Common-source, feature-based: joint density of two measurements sharing
//! one latent source against the product of their marginals. Integrating
//! the latent source out leaves a bivariate normal with covariance var_d.
inline double lr_cs_feature(const GaussianSourceModel& m, double e_u1, double e_u2, double var_1,
                            double var_2) {
    detail::require_variance(var_1, "lr_cs_feature");
    detail::require_variance(var_2, "lr_cs_feature");
    const double d1 = e_u1 - m.mu;
    const double d2 = e_u2 - m.mu;
    const double det = m.var_d * (var_1 + var_2) + var_1 * var_2;
    const double quad =
        ((m.var_d + var_2) * d1 * d1 - 2.0 * m.var_d * d1 * d2 + (m.var_d + var_1) * d2 * d2) /
        det;
    const double log_joint = -kLog2Pi - 0.5 * std::log(det) - 0.5 * quad;
    const double log_product = log_normal_pdf(e_u1, m.mu, m.var_d + var_1) +
                               log_normal_pdf(e_u2, m.mu, m.var_d + var_2);
    return std::exp(log_joint - log_product);
}

//! Common-source, score-based: the squared difference of the measurements
//! is a scaled chi-square under either hypothesis (central both times; the
//! different-source variance gains 2 var_d). The log-LR is affine in the
//! score, so the singular density factors cancel and score 0 is fine.
inline double lr_cs_score(const GaussianSourceModel& m, double score, double var_1,
                          double var_2) {
    if (!(score >= 0.0)) throw contract_error("lr_cs_score: score must be >= 0");
    detail::require_variance(var_1, "lr_cs_score");
    detail::require_variance(var_2, "lr_cs_score");
    const double v_same = var_1 + var_2;
    const double v_diff = v_same + 2.0 * m.var_d;
    return std::exp(0.5 * std::log(v_diff / v_same) +
                    0.5 * score * (1.0 / v_diff - 1.0 / v_same));
}

//! Specific-source, score-based: squared distance of the trace to the known
//! source value. Central chi-square under same source; noncentral under a
//! random other source, with offset mu - mu_d and variance var_d + var_u.
inline double lr_ss_score(const GaussianSourceModel& m, double mu_d, double score) {
    if (!(score >= 0.0)) throw contract_error("lr_ss_score: score must be >= 0");
    const double w = m.var_d + m.var_u;
    const double delta = m.mu - mu_d;
    return std::exp(0.5 * std::log(w / m.var_u) - score / (2.0 * m.var_u) +
                    (score + delta * delta) / (2.0 * w) -
                    log_cosh(delta * std::sqrt(score) / w));
}

//! The four quantities of the anchoring demonstration: score LRs anchored
//! at either source disagree, yet chaining each with its residual LR (the
//! information the score discarded) lands on the same full-data LR.
struct CoherenceReport {
    double lr_anchored_a;  //!< from (theta_a, (e_x - theta_a)^2)
    double lr_anchored_b;  //!< from (theta_b, (e_x - theta_b)^2)
    double lr_full_via_a;  //!< anchored_a times its residual
    double lr_full_via_b;  //!< anchored_b times its residual
};

namespace detail {

inline double log_sum_exp2(double a, double b) {
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

//! log of the conditional LR of e_x given its squared distance to anchor:
//! the score leaves two mirror points; the residual compares their
//! conditional weights under either source.
inline double log_residual(double e_x, double anchor, double theta_a, double var_a,
                           double theta_b, double var_b) {
    const double root = std::sqrt((e_x - anchor) * (e_x - anchor));
    const double hi = anchor + root;
    const double lo = anchor - root;
    const double log_c1 = log_normal_pdf(e_x, theta_a, var_a) -
                          log_sum_exp2(log_normal_pdf(hi, theta_a, var_a),
                                       log_normal_pdf(lo, theta_a, var_a));
    const double log_c2 = log_normal_pdf(e_x, theta_b, var_b) -
                          log_sum_exp2(log_normal_pdf(hi, theta_b, var_b),
                                       log_normal_pdf(lo, theta_b, var_b));
    return log_c1 - log_c2;
}

} // namespace detail

//! Compare source A (parameter theta_a, measurement variance var_a) against
//! source B for a single observation e_x, anchoring the score at either
//! source. The model argument fixes the ambient setup; the four reported
//! quantities depend only on the two sources and the observation.
inline CoherenceReport anchored_coherence_demo(const GaussianSourceModel& model, double theta_a,
                                               double theta_b, double var_a, double var_b,
                                               double e_x) {
    (void)model;
    detail::require_variance(var_a, "anchored_coherence_demo");
    detail::require_variance(var_b, "anchored_coherence_demo");
    const double delta = theta_b - theta_a;
    const double s_a = (e_x - theta_a) * (e_x - theta_a);
    const double s_b = (e_x - theta_b) * (e_x - theta_b);

    // Anchored at A: score central under A, noncentral under B.
    const double log_lr_a = 0.5 * std::log(var_b / var_a) - s_a / (2.0 * var_a) +
                            (s_a + delta * delta) / (2.0 * var_b) -
                            log_cosh(delta * std::sqrt(s_a) / var_b);
    // Anchored at B: mirrored roles.
    const double log_lr_b = 0.5 * std::log(var_b / var_a) + (s_b + delta * delta) / (-2.0 * var_a) +
                            log_cosh(delta * std::sqrt(s_b) / var_a) + s_b / (2.0 * var_b);

    const double res_a = detail::log_residual(e_x, theta_a, theta_a, var_a, theta_b, var_b);
    const double res_b = detail::log_residual(e_x, theta_b, theta_a, var_a, theta_b, var_b);

    return {std::exp(log_lr_a), std::exp(log_lr_b), std::exp(log_lr_a + res_a),
            std::exp(log_lr_b + res_b)};
}

//! One row of the simulation behind the informativeness comparisons: a
//! specific-source draw evaluated by all four LR variants, the common-source
//! ones treating (e_u, e_s) as a measurement pair of unknown sources.
struct ToyCase {
    std::uint64_t case_id;
    double mu_d;
    double e_u;
    double e_s;
    double lr_ss_feature;
    double lr_cs_feature;
    double lr_ss_score;
    double lr_cs_score;
};

struct FigureOptions {
    std::optional<double> fixed_mu_d; //!< pin the source (critiqued setups) instead of sampling
    std::uint64_t first_case_id = 0;  //!< case ids and stream indices start here
    unsigned workers = 1;
};

//! Simulate n_cases under one hypothesis and evaluate the four LRs per
//! case. Every case draws from its own stream(seed, case_id), so output is
//! identical for any worker count.
inline std::vector<ToyCase> figure_experiment(const GaussianSourceModel& m, std::size_t n_cases,
                                              SourceHypothesis hyp, std::uint64_t seed,
                                              const FigureOptions& opt = {}) {
    if (n_cases == 0) throw contract_error("figure_experiment: n_cases must be >= 1");
    std::vector<ToyCase> rows(n_cases);
    lrbayes::detail::parallel_cases(n_cases, opt.workers, [&](std::size_t i) {
        const std::uint64_t case_id = opt.first_case_id + i;
        RngStream rng(seed, case_id);
        const MeasurementPair p = sample_pair(m, hyp, SourceScenario::specific, rng, opt.fixed_mu_d);
        const double mu_d = *p.mu_d;
        const double score_ss = (p.e_u - mu_d) * (p.e_u - mu_d);
        const double score_cs = (p.e_u - p.e_s) * (p.e_u - p.e_s);
        rows[i] = {case_id,
                   mu_d,
                   p.e_u,
                   p.e_s,
                   lr_ss_feature(m, mu_d, p.e_u),
                   lr_cs_feature(m, p.e_u, p.e_s, m.var_u, m.var_s),
                   lr_ss_score(m, mu_d, score_ss),
                   lr_cs_score(m, score_cs, m.var_u, m.var_s)};
    });
    return rows;
}

} // namespace lrbayes::gauss
