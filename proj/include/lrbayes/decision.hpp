#pragma once

#include <cstddef>
#include <vector>

#include "prob.hpp"

//! Bayes decisions against cost matrices, and the exact evidence-averaged
//! quantities they are compared with: expected posteriors (a martingale in
//! the evidence) and the expected cost of deciding after seeing evidence,
//! which never exceeds the cost of deciding on the prior alone.
//!
//! Everything here enumerates finite models; no expectation is sampled.
//! That keeps the inequalities sharp to machine precision in tests.

namespace lrbayes {

inline void require_same_hypotheses(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw contract_error(std::string(what) + ": hypothesis count mismatch");
}

//! Expected cost of one action under a distribution over hypotheses.
inline double expected_cost(const CostMatrix& cost, const ProbabilityVector& pi,
                            std::size_t action) {
    require_same_hypotheses(cost.hypotheses(), pi.size(), "expected_cost");
    if (action >= cost.actions()) throw contract_error("expected_cost: action out of range");
    double s = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j) s += cost(action, j) * pi[j];
    return s;
}

struct BayesDecision {
    std::size_t action;
    double cost;
};

//! Action minimizing expected cost; ties go to the lowest action index so
//! repeated runs make identical choices.
inline BayesDecision bayes_decision(const CostMatrix& cost, const ProbabilityVector& pi) {
    require_same_hypotheses(cost.hypotheses(), pi.size(), "bayes_decision");
    BayesDecision best{0, expected_cost(cost, pi, 0)};
    for (std::size_t a = 1; a < cost.actions(); ++a) {
        const double c = expected_cost(cost, pi, a);
        if (c < best.cost) best = {a, c};
    }
    return best;
}

//! Bayes update on one evidence outcome. The outcome must have positive
//! probability under the prior-weighted model.
inline ProbabilityVector posterior(const ProbabilityVector& pi, const DiscreteEvidenceModel& model,
                                   std::size_t outcome) {
    require_same_hypotheses(model.hypotheses(), pi.size(), "posterior");
    if (outcome >= model.outcomes()) throw contract_error("posterior: outcome out of range");
    const double marginal = model.marginal(pi, outcome);
    if (marginal <= 0.0)
        throw impossible_evidence_error("posterior: outcome has zero probability under the prior");
    std::vector<double> post(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        post[i] = pi[i] * model.likelihood(i, outcome) / marginal;
    return ProbabilityVector(std::move(post));
}

//! Evidence-average of the posterior. Equals the prior exactly; returned as
//! a raw vector (no renormalization) so tests observe the identity honestly.
inline std::vector<double> expected_posterior(const ProbabilityVector& pi,
                                              const DiscreteEvidenceModel& model) {
    require_same_hypotheses(model.hypotheses(), pi.size(), "expected_posterior");
    std::vector<double> acc(pi.size(), 0.0);
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        const double marginal = model.marginal(pi, k);
        if (marginal <= 0.0) continue;
        const ProbabilityVector post = posterior(pi, model, k);
        for (std::size_t i = 0; i < pi.size(); ++i) acc[i] += marginal * post[i];
    }
    return acc;
}

//! E over evidence of the cost of the posterior Bayes decision. Zero-mass
//! outcomes are skipped; they carry no cost.
inline double expected_bd_cost(const CostMatrix& cost, const ProbabilityVector& pi,
                               const DiscreteEvidenceModel& model) {
    require_same_hypotheses(cost.hypotheses(), pi.size(), "expected_bd_cost");
    require_same_hypotheses(model.hypotheses(), pi.size(), "expected_bd_cost");
    double acc = 0.0;
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        const double marginal = model.marginal(pi, k);
        if (marginal <= 0.0) continue;
        acc += marginal * bayes_decision(cost, posterior(pi, model, k)).cost;
    }
    return acc;
}

struct MixtureComparison {
    double mixture_cost;      //!< c(sum_k t_k p_k)
    double component_average; //!< sum_k t_k c(p_k)
};

//! Concavity probe of the Bayes cost: the cost of a mixture is never below
//! the mixed costs of the components.
inline MixtureComparison mixture_concavity_check(const CostMatrix& cost,
                                                 const std::vector<ProbabilityVector>& components,
                                                 const std::vector<double>& weights) {
    if (components.empty() || components.size() != weights.size())
        throw contract_error("mixture_concavity_check: components/weights mismatch");
    const std::size_t n = components.front().size();
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw contract_error("mixture_concavity_check: negative weight");
        weight_sum += w;
    }
    if (std::fabs(weight_sum - 1.0) > kSumTolerance)
        throw contract_error("mixture_concavity_check: weights must sum to 1");

    std::vector<double> mix(n, 0.0);
    double avg = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        require_same_hypotheses(components[k].size(), n, "mixture_concavity_check");
        for (std::size_t i = 0; i < n; ++i) mix[i] += weights[k] * components[k][i];
        avg += weights[k] * bayes_decision(cost, components[k]).cost;
    }
    const double lhs = bayes_decision(cost, ProbabilityVector(std::move(mix))).cost;
    return {lhs, avg};
}

} // namespace lrbayes
