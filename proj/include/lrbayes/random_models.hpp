#pragma once

#include <cstdint>
#include <vector>

#include "lr.hpp"
#include "prob.hpp"
#include "rng.hpp"

//! Seeded generators of random decision problems. Instance i of a given
//! master seed is a pure function of (seed, i), so verification sweeps are
//! reproducible and failures can be replayed by index.
//!
//! The mix deliberately includes the edge cases the identities lean on:
//! priors with zero entries, likelihood rows with zero outcomes, duplicated
//! rows (uninformative evidence), revealing rows, and proportional columns
//! that force LR-value grouping.

namespace lrbayes {

//! Dirichlet(1) vector via normalized exponentials; optional hard zeros.
inline ProbabilityVector random_prob_vector(RngStream& rng, std::size_t n, bool allow_zeros) {
    std::vector<double> v(n);
    for (auto& x : v) x = -std::log(rng.uniform_pos());
    if (allow_zeros && n >= 2 && rng.uniform() < 0.15) {
        std::size_t positive = n;
        for (std::size_t j = 0; j < n && positive > 1; ++j) {
            if (rng.uniform() < 0.4) {
                v[j] = 0.0;
                --positive;
            }
        }
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    for (auto& x : v) x /= sum;
    return ProbabilityVector(std::move(v));
}

struct RandomInstance {
    CostMatrix cost;
    ProbabilityVector prior;
    DiscreteEvidenceModel model;
    bool uninformative; //!< all likelihood rows identical by construction
};

//! One decision problem: 2..5 hypotheses, 1..5 actions, 1..10 outcomes,
//! costs in [-10, 10].
inline RandomInstance random_instance(std::uint64_t seed, std::uint64_t index) {
    RngStream rng(seed, index);
    const std::size_t n = 2 + rng.next() % 4;
    const std::size_t m = 1 + rng.next() % 5;
    const std::size_t k = 1 + rng.next() % 10;

    std::vector<double> costs(m * n);
    for (auto& c : costs) c = -10.0 + 20.0 * rng.uniform();

    const ProbabilityVector prior = random_prob_vector(rng, n, true);

    const double model_kind = rng.uniform();
    std::vector<double> rows(n * k, 0.0);
    bool uninformative = false;
    if (model_kind < 0.05) {
        // Uninformative: every hypothesis induces the same outcome law.
        uninformative = true;
        std::vector<double> row(k);
        double sum = 0.0;
        for (auto& x : row) sum += x = -std::log(rng.uniform_pos());
        for (auto& x : row) x /= sum;
        for (std::size_t i = 0; i < n; ++i)
            std::copy(row.begin(), row.end(), rows.begin() + i * k);
    } else if (model_kind < 0.10) {
        // Revealing: each hypothesis concentrates on one outcome.
        for (std::size_t i = 0; i < n; ++i) rows[i * k + i % k] = 1.0;
        uninformative = k == 1;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            std::size_t arg_max = 0;
            for (std::size_t c = 0; c < k; ++c) {
                rows[i * k + c] = -std::log(rng.uniform_pos());
                if (rows[i * k + c] > rows[i * k + arg_max]) arg_max = c;
            }
            if (k >= 2 && rng.uniform() < 0.25) {
                for (std::size_t c = 0; c < k; ++c)
                    if (rng.uniform() < 0.3) rows[i * k + c] = 0.0;
            }
            rows[i * k + arg_max] = std::max(rows[i * k + arg_max], 0.1); // keep the row alive
            sum = 0.0;
            for (std::size_t c = 0; c < k; ++c) sum += rows[i * k + c];
            for (std::size_t c = 0; c < k; ++c) rows[i * k + c] /= sum;
        }
    }

    return {CostMatrix(m, n, std::move(costs)), prior,
            DiscreteEvidenceModel(n, k, std::move(rows)), uninformative};
}

//! Random surjective-ish label map for coarsening k outcomes.
inline std::vector<std::size_t> random_coarsening(RngStream& rng, std::size_t k) {
    const std::size_t labels = 1 + rng.next() % std::max<std::size_t>(1, (k + 1) / 2);
    std::vector<std::size_t> map(k);
    for (auto& g : map) g = rng.next() % labels;
    return map;
}

//! Two-hypothesis model tuned to stress LR distributions: zero entries
//! create 0 and +inf atoms, and power-of-two proportional column pairs
//! force exact LR-value grouping.
inline LrDistribution random_lr_distribution(std::uint64_t seed, std::uint64_t index) {
    RngStream rng(seed, index);
    const std::size_t k = 2 + rng.next() % 11;
    std::vector<double> p1(k), p2(k);
    for (std::size_t c = 0; c < k; ++c) {
        p1[c] = -std::log(rng.uniform_pos());
        p2[c] = -std::log(rng.uniform_pos());
        const double u = rng.uniform();
        if (u < 0.12) p1[c] = 0.0;       // LR = 0 atom
        else if (u < 0.24) p2[c] = 0.0;  // LR = +inf atom
    }
    // Duplicate some ratios exactly: scale a column pair by a power of two.
    for (std::size_t c = 1; c < k; ++c) {
        if (rng.uniform() < 0.3) {
            const std::size_t src = rng.next() % c;
            p1[c] = 0.5 * p1[src];
            p2[c] = 0.5 * p2[src];
        }
    }
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        s1 += p1[c];
        s2 += p2[c];
    }
    if (s1 == 0.0) p1[0] = s1 = 1.0;
    if (s2 == 0.0) p2[k - 1] = s2 = 1.0;
    std::vector<double> both(2 * k);
    for (std::size_t c = 0; c < k; ++c) {
        both[c] = p1[c] / s1;
        both[k + c] = p2[c] / s2;
    }
    return lr_distribution_from_model(DiscreteEvidenceModel(2, k, std::move(both)), 0, 1);
}

//! Threshold mix for tail sweeps: boundary-adjacent values around support
//! points plus log-uniform free values.
inline double random_threshold(RngStream& rng, const LrDistribution& dist) {
    if (rng.uniform() < 0.5) {
        for (std::size_t tries = 0; tries < 8; ++tries) {
            const std::size_t i = rng.next() % dist.size();
            const double x = dist.support(i);
            if (x > 0.0 && std::isfinite(x)) return x * (0.5 + rng.uniform());
        }
    }
    return std::pow(10.0, -3.0 + 6.0 * rng.uniform());
}

} // namespace lrbayes
