#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "decision.hpp"
#include "prob.hpp"

//! Proper scoring rules: the log rule, the rule induced by a cost matrix
//! through Bayes decisions, propriety checks, entropy, expected posterior
//! entropy, and the two-hypothesis uniform-prior summary known as CLLR.
//!
//! Entropies and expected scores use natural logs; CLLR is reported in
//! nats and bits since conventions differ across fields. A certain-but-
//! wrong forecast costs an explicit +inf under the log rule rather than
//! raising, so propriety sweeps over arbitrary candidates stay total.

namespace lrbayes::scoring {

//! Cost of stating distribution q when hypothesis i materializes.
class ScoringRule {
public:
    using Fn = std::function<double(std::size_t, const ProbabilityVector&)>;

    explicit ScoringRule(Fn fn) : fn_(std::move(fn)) {}

    double operator()(std::size_t hypothesis, const ProbabilityVector& stated) const {
        if (hypothesis >= stated.size())
            throw contract_error("ScoringRule: hypothesis index out of range");
        return fn_(hypothesis, stated);
    }

private:
    Fn fn_;
};

//! C(H_i, q) = -log q_i.
inline ScoringRule log_rule() {
    return ScoringRule([](std::size_t i, const ProbabilityVector& q) {
        return q[i] == 0.0 ? kInf : -std::log(q[i]);
    });
}

//! The rule that charges the stated distribution's Bayes action against
//! the hypothesis that materialized.
inline ScoringRule bd_rule(CostMatrix cost) {
    return ScoringRule([cost = std::move(cost)](std::size_t j, const ProbabilityVector& q) {
        return cost(bayes_decision(cost, q).action, j);
    });
}

//! Expected cost of stating `stated` when `truth` generates the hypothesis.
//! Hypotheses with zero truth mass contribute nothing, even at infinite
//! stated cost.
inline double expected_score(const ScoringRule& rule, const ProbabilityVector& stated,
                             const ProbabilityVector& truth) {
    require_same_hypotheses(stated.size(), truth.size(), "expected_score");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 0.0) continue;
        acc += truth[i] * rule(i, stated);
    }
    return acc;
}

struct ProprietyViolation {
    std::size_t candidate;
    double margin;
};

//! Margins of every candidate against the truthful statement. A proper rule
//! never yields a margin below zero (up to tolerance); a strictly proper
//! rule keeps margins positive away from the truth.
struct ProprietyReport {
    double truthful_score;
    std::vector<double> margins; //!< expected_score(candidate) - truthful_score
    std::vector<ProprietyViolation> violations;

    bool ok() const { return violations.empty(); }
};

inline ProprietyReport propriety_check(const ScoringRule& rule, const ProbabilityVector& truth,
                                       const std::vector<ProbabilityVector>& candidates) {
    ProprietyReport report{expected_score(rule, truth, truth), {}, {}};
    report.margins.reserve(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double margin = expected_score(rule, candidates[k], truth) - report.truthful_score;
        report.margins.push_back(margin);
        if (margin < -1e-12) report.violations.push_back({k, margin});
    }
    return report;
}

//! -Sum pi_j log pi_j, with 0 log 0 = 0.
inline double entropy(const ProbabilityVector& pi) {
    double acc = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j)
        if (pi[j] > 0.0) acc -= pi[j] * std::log(pi[j]);
    return acc;
}

//! Evidence-average of the posterior entropy; never exceeds the prior
//! entropy, with equality exactly for uninformative evidence.
inline double expected_posterior_entropy(const ProbabilityVector& pi,
                                         const DiscreteEvidenceModel& model) {
    require_same_hypotheses(model.hypotheses(), pi.size(), "expected_posterior_entropy");
    double acc = 0.0;
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        const double marginal = model.marginal(pi, k);
        if (marginal <= 0.0) continue;
        acc += marginal * entropy(posterior(pi, model, k));
    }
    return acc;
}

struct Cllr {
    double nats;
    double bits;
};

//! Expected posterior entropy from even prior odds over two hypotheses: the
//! standard scalar summary of how informative a two-hypothesis LR system is.
inline Cllr cllr(const DiscreteEvidenceModel& model) {
    if (model.hypotheses() != 2)
        throw contract_error("cllr: defined for exactly two hypotheses");
    const double nats =
        expected_posterior_entropy(ProbabilityVector({0.5, 0.5}), model);
    return {nats, nats / 0.6931471805599453094172321214582};
}

} // namespace lrbayes::scoring
