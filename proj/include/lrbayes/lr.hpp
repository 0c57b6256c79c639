#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "decision.hpp"
#include "prob.hpp"

//! Two-hypothesis likelihood-ratio calculus on finite evidence models:
//! distributions of the LR under either hypothesis, the tail identity
//! P(LR >= t | H2) = P(LR >= t | H1) * E(1/LR | LR >= t, H1), the 1/t tail
//! bounds, threshold decisions, and LR chaining under data coarsening.
//!
//! Sentinels: an outcome with P(e|H2) = 0 sits at LR = +inf, one with
//! P(e|H1) = 0 at LR = 0. The identities extend by the convention 1/inf = 0.
//! Outcomes impossible under both hypotheses carry no LR and are dropped.

namespace lrbayes {

//! Distribution of the likelihood ratio under both hypotheses.
//! Support is ascending and distinct; mass_h1[i] and mass_h2[i] are the
//! probabilities of support[i] under H1 and H2.
class LrDistribution {
public:
    LrDistribution(std::vector<double> support, std::vector<double> mass_h1,
                   std::vector<double> mass_h2)
        : x_(std::move(support)), l1_(std::move(mass_h1)), l2_(std::move(mass_h2)) {
        if (x_.empty() || x_.size() != l1_.size() || x_.size() != l2_.size())
            throw contract_error("LrDistribution: size mismatch");
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (std::isnan(x_[i]) || x_[i] < 0.0)
                throw contract_error("LrDistribution: support must lie in [0, +inf]");
            if (i > 0 && !(x_[i] > x_[i - 1]))
                throw contract_error("LrDistribution: support must be ascending and distinct");
            if (l1_[i] < 0.0 || l2_[i] < 0.0)
                throw contract_error("LrDistribution: negative mass");
            s1 += l1_[i];
            s2 += l2_[i];
            // Defining property of an LR distribution: mass under H1 is the
            // LR times the mass under H2, with the sentinel conventions.
            if (x_[i] == 0.0) {
                if (l1_[i] != 0.0) throw contract_error("LrDistribution: LR=0 requires zero H1 mass");
            } else if (std::isinf(x_[i])) {
                if (l2_[i] != 0.0) throw contract_error("LrDistribution: LR=inf requires zero H2 mass");
            } else if (std::fabs(l1_[i] - x_[i] * l2_[i]) >
                       kSumTolerance * (1.0 + std::fabs(l1_[i]))) {
                throw contract_error("LrDistribution: H1 mass must equal LR times H2 mass");
            }
        }
        if (std::fabs(s1 - 1.0) > kSumTolerance || std::fabs(s2 - 1.0) > kSumTolerance)
            throw contract_error("LrDistribution: masses must each sum to 1");
    }

    std::size_t size() const { return x_.size(); }
    double support(std::size_t i) const { return x_[i]; }
    double mass_h1(std::size_t i) const { return l1_[i]; }
    double mass_h2(std::size_t i) const { return l2_[i]; }

private:
    std::vector<double> x_, l1_, l2_;
};

namespace detail {

inline LrDistribution group_by_ratio(const std::vector<double>& p1, const std::vector<double>& p2) {
    // Group key is the computed double ratio itself; identical rational
    // inputs produce identical doubles, so no epsilon-bucketing is needed.
    std::map<double, std::pair<double, double>> groups;
    for (std::size_t k = 0; k < p1.size(); ++k) {
        if (p1[k] == 0.0 && p2[k] == 0.0) continue;
        const double lr = p2[k] == 0.0 ? kInf : p1[k] / p2[k];
        auto& g = groups[lr];
        g.first += p1[k];
        g.second += p2[k];
    }
    if (groups.empty())
        throw contract_error("lr_distribution: no outcome has positive mass under either hypothesis");
    std::vector<double> x, l1, l2;
    x.reserve(groups.size());
    for (const auto& [lr, mass] : groups) {
        x.push_back(lr);
        l1.push_back(mass.first);
        l2.push_back(mass.second);
    }
    return LrDistribution(std::move(x), std::move(l1), std::move(l2));
}

} // namespace detail

//! LR distribution for H_h1 against H_h2, outcomes grouped by LR value.
inline LrDistribution lr_distribution_from_model(const DiscreteEvidenceModel& model,
                                                 std::size_t h1, std::size_t h2) {
    if (h1 >= model.hypotheses() || h2 >= model.hypotheses() || h1 == h2)
        throw contract_error("lr_distribution_from_model: bad hypothesis indices");
    std::vector<double> p1(model.outcomes()), p2(model.outcomes());
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        p1[k] = model.likelihood(h1, k);
        p2[k] = model.likelihood(h2, k);
    }
    return detail::group_by_ratio(p1, p2);
}

//! LR distribution for H_h1 against the union of all other hypotheses,
//! whose conditional law mixes the remaining rows with renormalized prior
//! weights.
inline LrDistribution lr_distribution_union_rest(const DiscreteEvidenceModel& model,
                                                 std::size_t h1, const ProbabilityVector& prior) {
    require_same_hypotheses(model.hypotheses(), prior.size(), "lr_distribution_union_rest");
    if (h1 >= model.hypotheses() || model.hypotheses() < 2)
        throw contract_error("lr_distribution_union_rest: bad hypothesis index");
    double rest = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i)
        if (i != h1) rest += prior[i];
    if (rest <= 0.0)
        throw contract_error("lr_distribution_union_rest: union hypothesis has zero prior mass");
    std::vector<double> p1(model.outcomes()), p2(model.outcomes(), 0.0);
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        p1[k] = model.likelihood(h1, k);
        for (std::size_t i = 0; i < prior.size(); ++i)
            if (i != h1) p2[k] += prior[i] / rest * model.likelihood(i, k);
    }
    return detail::group_by_ratio(p1, p2);
}

struct TailIdentity {
    double lhs; //!< P(LR >= t | H2)
    double rhs; //!< P(LR >= t | H1) * E(1/LR | LR >= t, H1)
};

//! Both sides of the tail identity at threshold t. An H1-null tail makes
//! the conditional expectation an empty average; the product is then 0.
inline TailIdentity tail_identity(const LrDistribution& dist, double t) {
    if (!(t > 0.0)) throw contract_error("tail_identity: threshold must be positive");
    double tail2 = 0.0, tail1 = 0.0, tail1_inv = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double x = dist.support(i);
        if (x < t) continue;
        tail2 += dist.mass_h2(i);
        tail1 += dist.mass_h1(i);
        if (!std::isinf(x)) tail1_inv += dist.mass_h1(i) / x;
    }
    const double rhs = tail1 > 0.0 ? tail1 * (tail1_inv / tail1) : 0.0;
    return {tail2, rhs};
}

struct TailBounds {
    double p_low_given_h1;  //!< P(LR <= 1/t | H1), at most 1/t
    double p_high_given_h2; //!< P(LR >= t | H2), at most 1/t
};

//! Misleading-evidence tail masses; each is bounded by 1/t.
inline TailBounds tail_bounds(const LrDistribution& dist, double t) {
    if (!(t >= 1.0)) throw contract_error("tail_bounds: threshold must be >= 1");
    const double inv = 1.0 / t;
    TailBounds b{0.0, 0.0};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.support(i) <= inv) b.p_low_given_h1 += dist.mass_h1(i);
        if (dist.support(i) >= t) b.p_high_given_h2 += dist.mass_h2(i);
    }
    return b;
}

//! Two-action threshold rule: choose A1 when the posterior odds of H1
//! reach gamma, the cost of a false A1 relative to a false A2.
struct ThresholdDecision {
    double gamma;        //!< cost ratio, > 0
    double prior_odds_r; //!< prior odds of H1, in [0, +inf]

    ThresholdDecision(double g, double r) : gamma(g), prior_odds_r(r) {
        if (!(g > 0.0) || std::isnan(r) || r < 0.0)
            throw contract_error("ThresholdDecision: gamma > 0 and prior odds >= 0 required");
    }
};

enum class Action { A1, A2 };

//! Decision on prior odds alone (no lr) or on posterior odds lr * r.
//! The boundary is inclusive: odds equal to gamma already pick A1.
//! When the prior excludes one hypothesis and the evidence excludes the
//! other (0 times inf), the prior's verdict stands and a warning is issued.
inline Action threshold_decide(const ThresholdDecision& td, std::optional<double> lr,
                               const WarningSink& warn = no_warnings) {
    if (!lr.has_value()) return td.prior_odds_r >= td.gamma ? Action::A1 : Action::A2;
    if (std::isnan(*lr) || *lr < 0.0)
        throw contract_error("threshold_decide: lr must lie in [0, +inf]");
    const bool zero_times_inf = (td.prior_odds_r == 0.0 && std::isinf(*lr)) ||
                                (std::isinf(td.prior_odds_r) && *lr == 0.0);
    if (zero_times_inf) {
        warn("threshold_decide: prior excludes one hypothesis, evidence the other; "
             "keeping the prior's decision");
        return td.prior_odds_r >= td.gamma ? Action::A1 : Action::A2;
    }
    return *lr * td.prior_odds_r >= td.gamma ? Action::A1 : Action::A2;
}

struct ChainedLr {
    double full;     //!< LR of the full outcome
    double score;    //!< LR of its coarsened label
    double residual; //!< LR of the outcome given the label; full = score * residual
};

//! Decomposition of an outcome's LR through a coarsening of the evidence.
//! coarsening[k] is the label of outcome k; labels partition the outcomes.
inline ChainedLr chained_lr(const DiscreteEvidenceModel& model,
                            const std::vector<std::size_t>& coarsening, std::size_t h1,
                            std::size_t h2, std::size_t outcome) {
    if (coarsening.size() != model.outcomes())
        throw contract_error("chained_lr: coarsening must cover every outcome");
    if (h1 >= model.hypotheses() || h2 >= model.hypotheses() || outcome >= model.outcomes())
        throw contract_error("chained_lr: index out of range");

    const double p1 = model.likelihood(h1, outcome);
    const double p2 = model.likelihood(h2, outcome);
    double g1 = 0.0, g2 = 0.0; // mass of the outcome's label under each hypothesis
    for (std::size_t k = 0; k < model.outcomes(); ++k) {
        if (coarsening[k] != coarsening[outcome]) continue;
        g1 += model.likelihood(h1, k);
        g2 += model.likelihood(h2, k);
    }

    const auto ratio = [](double a, double b) { return b == 0.0 ? kInf : a / b; };
    const double full = ratio(p1, p2);
    const double score = ratio(g1, g2);
    // Conditional masses given the label; each denominator bounds its
    // numerator, so a zero label mass forces a zero outcome mass.
    const double c1 = g1 == 0.0 ? 0.0 : p1 / g1;
    const double c2 = g2 == 0.0 ? 0.0 : p2 / g2;
    const double residual = ratio(c1, c2);
    return {full, score, residual};
}

} // namespace lrbayes
