#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"

//! Finite probability vectors, cost matrices and discrete evidence models.
//!
//! Conventions used throughout:
//!   n  number of hypotheses H_1..H_n
//!   m  number of actions   A_1..A_m
//!   K  number of evidence outcomes e_1..e_K
//! Probability data is validated on construction: entries must be finite
//! and non-negative, masses must sum to 1 within kSumTolerance, and are
//! then renormalized so later accumulations start from exact unit mass.

namespace lrbayes {

namespace detail {

inline void validate_and_normalize(std::vector<double>& p, const char* what) {
    if (p.empty()) throw contract_error(std::string(what) + ": empty");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || v > 1.0 + kSumTolerance)
            throw contract_error(std::string(what) + ": entries must lie in [0, 1]");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kSumTolerance)
        throw contract_error(std::string(what) + ": mass sums to " + std::to_string(sum) +
                             ", outside tolerance");
    for (double& v : p) v /= sum;
}

} // namespace detail

//! Distribution over finitely many hypotheses (or outcomes). Immutable.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
        detail::validate_and_normalize(p_, "ProbabilityVector");
    }

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& values() const { return p_; }

    auto begin() const { return p_.begin(); }
    auto end() const { return p_.end(); }

private:
    std::vector<double> p_;
};

//! Losses c(A_i, H_j), actions in rows. Entries are arbitrary finite reals;
//! nothing in the decision calculus needs a sign convention.
class CostMatrix {
public:
    CostMatrix(std::size_t actions, std::size_t hypotheses, std::vector<double> costs)
        : m_(actions), n_(hypotheses), c_(std::move(costs)) {
        if (m_ == 0 || n_ == 0) throw contract_error("CostMatrix: zero dimension");
        if (c_.size() != m_ * n_) throw contract_error("CostMatrix: size mismatch");
        for (double v : c_)
            if (!std::isfinite(v)) throw contract_error("CostMatrix: non-finite entry");
    }

    std::size_t actions() const { return m_; }
    std::size_t hypotheses() const { return n_; }
    double operator()(std::size_t action, std::size_t hypothesis) const {
        return c_[action * n_ + hypothesis];
    }

private:
    std::size_t m_, n_;
    std::vector<double> c_;
};

//! Conditional laws P(e_k | H_i), one row per hypothesis. Rows follow the
//! same validation and renormalization policy as ProbabilityVector.
class DiscreteEvidenceModel {
public:
    DiscreteEvidenceModel(std::size_t hypotheses, std::size_t outcomes,
                          std::vector<double> likelihoods)
        : n_(hypotheses), k_(outcomes), l_(std::move(likelihoods)) {
        if (n_ == 0 || k_ == 0) throw contract_error("DiscreteEvidenceModel: zero dimension");
        if (l_.size() != n_ * k_) throw contract_error("DiscreteEvidenceModel: size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            std::vector<double> row(l_.begin() + i * k_, l_.begin() + (i + 1) * k_);
            detail::validate_and_normalize(row, "DiscreteEvidenceModel row");
            std::copy(row.begin(), row.end(), l_.begin() + i * k_);
        }
    }

    std::size_t hypotheses() const { return n_; }
    std::size_t outcomes() const { return k_; }
    double likelihood(std::size_t hypothesis, std::size_t outcome) const {
        return l_[hypothesis * k_ + outcome];
    }

    //! Marginal P(e_k) under the prior.
    double marginal(const ProbabilityVector& prior, std::size_t outcome) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += prior[i] * likelihood(i, outcome);
        return s;
    }

private:
    std::size_t n_, k_;
    std::vector<double> l_;
};

} // namespace lrbayes
