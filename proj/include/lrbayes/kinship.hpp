#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"

//! DNA kinship calculus on unlinked autosomal loci: Hardy-Weinberg founder
//! genotypes, Mendelian children, the sibling likelihood ratio computed
//! either from the (1/4, 1/2, 1/4) identity-by-descent mixture or by exact
//! summation over all parental genotype pairs, the parent-anchored ratio,
//! and the exact distribution of the shared-allele count that powers the
//! score-based ratio.
//!
//! Population assumptions are deliberately minimal: allele frequencies are
//! exact, loci are independent, there is no mutation (a Mendelian exclusion
//! is a hard zero) and no substructure correction.

namespace lrbayes::kin {

// --- population model -------------------------------------------------

struct LocusFrequencies {
    std::string name;
    std::vector<std::string> alleles;
    std::vector<double> freq; //!< strictly positive, renormalized to unit sum
    std::vector<double> cum;  //!< cumulative masses for sampling, last entry 1
};

class FrequencyTable {
public:
    explicit FrequencyTable(std::vector<LocusFrequencies> loci) : loci_(std::move(loci)) {
        if (loci_.empty()) throw contract_error("FrequencyTable: no loci");
        for (auto& locus : loci_) {
            if (locus.alleles.size() < 2 || locus.alleles.size() != locus.freq.size())
                throw contract_error("FrequencyTable: locus " + locus.name +
                                     " needs at least 2 alleles with frequencies");
            double sum = 0.0;
            for (double f : locus.freq) {
                if (!(f > 0.0) || !std::isfinite(f))
                    throw contract_error("FrequencyTable: locus " + locus.name +
                                         " has a non-positive frequency");
                sum += f;
            }
            if (std::fabs(sum - 1.0) > kSumTolerance)
                throw contract_error("FrequencyTable: locus " + locus.name +
                                     " frequencies sum to " + std::to_string(sum));
            locus.cum.resize(locus.freq.size());
            double acc = 0.0;
            for (std::size_t a = 0; a < locus.freq.size(); ++a) {
                locus.freq[a] /= sum;
                acc += locus.freq[a];
                locus.cum[a] = acc;
            }
            locus.cum.back() = 1.0;
        }
    }

    //! Comma-separated file: header "locus,allele,frequency", one record
    //! per allele; loci ordered by first appearance. Parse failures carry
    //! the path and 1-based line number.
    static FrequencyTable load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw contract_error("FrequencyTable: cannot open " + path);
        const auto fail = [&path](std::size_t line, const std::string& why) {
            throw contract_error("FrequencyTable: " + path + ":" + std::to_string(line) + ": " +
                                 why);
        };
        std::string line;
        std::size_t line_no = 0;
        std::vector<LocusFrequencies> loci;
        std::map<std::string, std::size_t> index;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            if (fields.size() != 3) fail(line_no, "expected 3 comma-separated fields");
            if (line_no == 1) {
                if (fields[0] != "locus" || fields[1] != "allele" || fields[2] != "frequency")
                    fail(line_no, "header must be locus,allele,frequency");
                continue;
            }
            double f;
            try {
                std::size_t used = 0;
                f = std::stod(fields[2], &used);
                if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                fail(line_no, "bad frequency value '" + fields[2] + "'");
            }
            if (!(f > 0.0)) fail(line_no, "frequency must be strictly positive");
            auto [it, fresh] = index.try_emplace(fields[0], loci.size());
            if (fresh) loci.push_back(LocusFrequencies{fields[0], {}, {}, {}});
            auto& locus = loci[it->second];
            for (const auto& a : locus.alleles)
                if (a == fields[1]) fail(line_no, "duplicate allele " + fields[1]);
            locus.alleles.push_back(fields[1]);
            locus.freq.push_back(f);
        }
        if (line_no == 0) throw contract_error("FrequencyTable: " + path + " is empty");
        return FrequencyTable(std::move(loci));
    }

    std::size_t locus_count() const { return loci_.size(); }
    const LocusFrequencies& locus(std::size_t i) const { return loci_[i]; }

private:
    std::vector<LocusFrequencies> loci_;
};

// --- genotypes ---------------------------------------------------------

//! Unordered allele pair at one locus, stored as sorted allele indices.
using LocusGenotype = std::pair<std::uint16_t, std::uint16_t>;

struct GenotypeProfile {
    std::vector<LocusGenotype> loci;
};

struct ParentPair {
    GenotypeProfile mother;
    GenotypeProfile father;
};

enum class KinshipHypothesis { siblings, unrelated };
enum class SiblingMethod { ibd_fast, parental_enumeration };

namespace detail {

inline LocusGenotype ordered(std::uint16_t a, std::uint16_t b) {
    return a <= b ? LocusGenotype{a, b} : LocusGenotype{b, a};
}

inline double hwe(const LocusFrequencies& locus, LocusGenotype g) {
    const double pa = locus.freq[g.first];
    const double pb = locus.freq[g.second];
    return g.first == g.second ? pa * pb : 2.0 * pa * pb;
}

//! Probability that a parent with genotype g transmits the given allele.
inline double transmit(LocusGenotype g, std::uint16_t allele) {
    return 0.5 * ((g.first == allele) + (g.second == allele));
}

//! Mendelian probability of child genotype c from parents m and f.
inline double mendel(LocusGenotype c, LocusGenotype m, LocusGenotype f) {
    if (c.first == c.second) return transmit(m, c.first) * transmit(f, c.first);
    return transmit(m, c.first) * transmit(f, c.second) +
           transmit(m, c.second) * transmit(f, c.first);
}

//! P(y | x full siblings) as the identity-by-descent mixture: with weights
//! (1/4, 1/2, 1/4) siblings share 0, 1 or 2 parental alleles; sharing 0
//! leaves y a population draw, sharing 2 copies x exactly, sharing 1 pairs
//! one allele transmitted by x's parents with one population draw.
inline double sibling_likelihood_fast(const LocusFrequencies& locus, LocusGenotype x,
                                      LocusGenotype y) {
    double one_shared;
    if (y.first == y.second) {
        one_shared = transmit(x, y.first) * locus.freq[y.first];
    } else {
        one_shared = transmit(x, y.first) * locus.freq[y.second] +
                     transmit(x, y.second) * locus.freq[y.first];
    }
    return 0.25 * hwe(locus, y) + 0.5 * one_shared + 0.25 * (x == y ? 1.0 : 0.0);
}

//! Multiset intersection size of two allele pairs, in {0, 1, 2}. Both
//! genotypes are sorted, so greedy matching against y's two slots is exact.
inline int ibs_locus(LocusGenotype gx, LocusGenotype gy) {
    int count = 0;
    bool used_first = false, used_second = false;
    for (const std::uint16_t allele : {gx.first, gx.second}) {
        if (!used_first && allele == gy.first) {
            used_first = true;
            ++count;
        } else if (!used_second && allele == gy.second) {
            used_second = true;
            ++count;
        }
    }
    return count;
}

//! Same likelihood by brute force: condition on every ordered parental
//! genotype pair, weight by Hardy-Weinberg priors and the probability that
//! those parents produced x. This is the reference the fast path must match.
inline double sibling_likelihood_enumerated(const LocusFrequencies& locus, LocusGenotype x,
                                            LocusGenotype y) {
    const std::size_t n = locus.freq.size();
    std::vector<LocusGenotype> genotypes;
    genotypes.reserve(n * (n + 1) / 2);
    for (std::uint16_t a = 0; a < n; ++a)
        for (std::uint16_t b = a; b < n; ++b) genotypes.push_back({a, b});

    double joint = 0.0, norm = 0.0;
    for (const auto& m : genotypes) {
        for (const auto& f : genotypes) {
            const double w = hwe(locus, m) * hwe(locus, f) * mendel(x, m, f);
            joint += w * mendel(y, m, f);
            norm += w;
        }
    }
    if (norm <= 0.0)
        throw contract_error("sibling_likelihood_enumerated: x impossible under the table");
    return joint / norm;
}

} // namespace detail

// --- sampling ----------------------------------------------------------

inline GenotypeProfile sample_founder(const FrequencyTable& table, RngStream& rng) {
    GenotypeProfile p;
    p.loci.reserve(table.locus_count());
    for (std::size_t i = 0; i < table.locus_count(); ++i) {
        const auto& cum = table.locus(i).cum;
        const auto a = static_cast<std::uint16_t>(rng.discrete_from_cumulative(cum));
        const auto b = static_cast<std::uint16_t>(rng.discrete_from_cumulative(cum));
        p.loci.push_back(detail::ordered(a, b));
    }
    return p;
}

inline GenotypeProfile sample_child(const ParentPair& parents, RngStream& rng) {
    if (parents.mother.loci.size() != parents.father.loci.size())
        throw contract_error("sample_child: parents disagree on loci");
    GenotypeProfile p;
    p.loci.reserve(parents.mother.loci.size());
    for (std::size_t i = 0; i < parents.mother.loci.size(); ++i) {
        const auto& m = parents.mother.loci[i];
        const auto& f = parents.father.loci[i];
        const std::uint16_t from_m = (rng.next() >> 63) ? m.second : m.first;
        const std::uint16_t from_f = (rng.next() >> 63) ? f.second : f.first;
        p.loci.push_back(detail::ordered(from_m, from_f));
    }
    return p;
}

// --- scores and likelihood ratios ---------------------------------------

//! Shared-allele count over the first n_loci loci: per locus the multiset
//! intersection size of the two allele pairs, a value in {0, 1, 2}.
inline int ibs_score(const GenotypeProfile& x, const GenotypeProfile& y, std::size_t n_loci) {
    if (x.loci.size() != y.loci.size() || n_loci > x.loci.size())
        throw contract_error("ibs_score: profiles must share the requested loci");
    int total = 0;
    for (std::size_t i = 0; i < n_loci; ++i) total += detail::ibs_locus(x.loci[i], y.loci[i]);
    return total;
}

inline int ibs_score(const GenotypeProfile& x, const GenotypeProfile& y) {
    return ibs_score(x, y, x.loci.size());
}

//! Likelihood ratio for "x and y are full siblings" against "unrelated",
//! from the genotypes themselves, over the first n_loci loci.
inline double lr_sibling_feature(const FrequencyTable& table, const GenotypeProfile& x,
                                 const GenotypeProfile& y, std::size_t n_loci,
                                 SiblingMethod method = SiblingMethod::ibd_fast) {
    if (x.loci.size() < n_loci || y.loci.size() < n_loci || table.locus_count() < n_loci)
        throw contract_error("lr_sibling_feature: not enough loci");
    double lr = 1.0;
    for (std::size_t i = 0; i < n_loci; ++i) {
        const auto& locus = table.locus(i);
        const double num = method == SiblingMethod::ibd_fast
                               ? detail::sibling_likelihood_fast(locus, x.loci[i], y.loci[i])
                               : detail::sibling_likelihood_enumerated(locus, x.loci[i], y.loci[i]);
        lr *= num / detail::hwe(locus, y.loci[i]);
    }
    return lr;
}

inline double lr_sibling_feature(const FrequencyTable& table, const GenotypeProfile& x,
                                 const GenotypeProfile& y,
                                 SiblingMethod method = SiblingMethod::ibd_fast) {
    return lr_sibling_feature(table, x, y, table.locus_count(), method);
}

//! Likelihood ratio for "y is a child of these parents" against "y is an
//! unrelated population member". A Mendelian exclusion at any locus makes
//! the ratio exactly 0.
inline double lr_parentage(const FrequencyTable& table, const ParentPair& parents,
                           const GenotypeProfile& y, std::size_t n_loci) {
    if (parents.mother.loci.size() < n_loci || parents.father.loci.size() < n_loci ||
        y.loci.size() < n_loci || table.locus_count() < n_loci)
        throw contract_error("lr_parentage: not enough loci");
    double lr = 1.0;
    for (std::size_t i = 0; i < n_loci; ++i) {
        const auto& locus = table.locus(i);
        lr *= detail::mendel(y.loci[i], parents.mother.loci[i], parents.father.loci[i]) /
              detail::hwe(locus, y.loci[i]);
    }
    return lr;
}

inline double lr_parentage(const FrequencyTable& table, const ParentPair& parents,
                           const GenotypeProfile& y) {
    return lr_parentage(table, parents, y, table.locus_count());
}

//! Exact distribution of the shared-allele count over the first n_loci
//! loci: per-locus enumeration of all genotype pairs under the hypothesis,
//! convolved across loci. Index s holds P(score = s), s in [0, 2 n_loci].
inline std::vector<double> score_count_distribution(const FrequencyTable& table,
                                                    KinshipHypothesis hyp, std::size_t n_loci) {
    if (n_loci == 0 || n_loci > table.locus_count())
        throw contract_error("score_count_distribution: bad locus count");
    std::vector<double> dist{1.0};
    for (std::size_t i = 0; i < n_loci; ++i) {
        const auto& locus = table.locus(i);
        const std::size_t n = locus.freq.size();
        double per_locus[3] = {0.0, 0.0, 0.0};
        for (std::uint16_t a = 0; a < n; ++a)
            for (std::uint16_t b = a; b < n; ++b)
                for (std::uint16_t c = 0; c < n; ++c)
                    for (std::uint16_t d = c; d < n; ++d) {
                        const LocusGenotype gx{a, b}, gy{c, d};
                        const double w =
                            detail::hwe(locus, gx) *
                            (hyp == KinshipHypothesis::siblings
                                 ? detail::sibling_likelihood_fast(locus, gx, gy)
                                 : detail::hwe(locus, gy));
                        per_locus[detail::ibs_locus(gx, gy)] += w;
                    }
        std::vector<double> next(dist.size() + 2, 0.0);
        for (std::size_t s = 0; s < dist.size(); ++s)
            for (int k = 0; k < 3; ++k) next[s + k] += dist[s] * per_locus[k];
        dist.swap(next);
    }
    return dist;
}

//! Both exact score distributions, cached for repeated ratio lookups.
class ScoreLrTable {
public:
    ScoreLrTable(const FrequencyTable& table, std::size_t n_loci)
        : p_sib_(score_count_distribution(table, KinshipHypothesis::siblings, n_loci)),
          p_unrel_(score_count_distribution(table, KinshipHypothesis::unrelated, n_loci)) {}

    std::size_t max_score() const { return p_sib_.size() - 1; }
    const std::vector<double>& mass_siblings() const { return p_sib_; }
    const std::vector<double>& mass_unrelated() const { return p_unrel_; }

    double lr(int score) const {
        if (score < 0 || static_cast<std::size_t>(score) > max_score())
            throw contract_error("lr_sibling_score: score out of range");
        const double num = p_sib_[static_cast<std::size_t>(score)];
        const double den = p_unrel_[static_cast<std::size_t>(score)];
        if (num == 0.0 && den == 0.0)
            throw impossible_evidence_error("lr_sibling_score: score impossible under both "
                                            "hypotheses");
        return den == 0.0 ? kInf : num / den;
    }

private:
    std::vector<double> p_sib_, p_unrel_;
};

inline double lr_sibling_score(const FrequencyTable& table, int score, std::size_t n_loci) {
    return ScoreLrTable(table, n_loci).lr(score);
}

// --- the simulation experiment ------------------------------------------

//! One simulated pair. Profiles live on the full locus set; the score,
//! score LR and parentage LR are evaluated on the reduced prefix, the
//! feature LR on both.
struct KinshipCase {
    std::uint64_t case_id;
    KinshipHypothesis hypothesis;
    int ibs_reduced;
    double lr_score_reduced;
    double lr_feature_reduced;
    double lr_feature_full;
    double lr_parentage_reduced;
};

struct KinshipOptions {
    std::uint64_t first_case_id = 0;
    unsigned workers = 1;
};

//! Simulate n_cases pairs under each hypothesis. Both start from a founder
//! couple whose child is x; under siblings y is a second child, under
//! unrelated y is an independent founder. Case ids run siblings first, then
//! unrelated, each with its own stream(seed, case_id).
inline std::vector<KinshipCase> kinship_experiment(const FrequencyTable& table,
                                                   std::size_t n_cases, std::size_t loci_full,
                                                   std::size_t loci_reduced, std::uint64_t seed,
                                                   const KinshipOptions& opt = {}) {
    if (n_cases == 0) throw contract_error("kinship_experiment: n_cases must be >= 1");
    if (loci_full > table.locus_count() || loci_reduced > loci_full || loci_reduced == 0)
        throw contract_error("kinship_experiment: need loci_reduced <= loci_full <= table size");

    // Trim the population to the simulated loci so profile and table sizes
    // agree everywhere downstream.
    std::vector<LocusFrequencies> trimmed;
    trimmed.reserve(loci_full);
    for (std::size_t i = 0; i < loci_full; ++i) trimmed.push_back(table.locus(i));
    const FrequencyTable sim_table(std::move(trimmed));
    const ScoreLrTable score_table(sim_table, loci_reduced);

    std::vector<KinshipCase> rows(2 * n_cases);
    lrbayes::detail::parallel_cases(2 * n_cases, opt.workers, [&](std::size_t i) {
        const std::uint64_t case_id = opt.first_case_id + i;
        const KinshipHypothesis hyp =
            i < n_cases ? KinshipHypothesis::siblings : KinshipHypothesis::unrelated;
        RngStream rng(seed, case_id);
        ParentPair parents{sample_founder(sim_table, rng), sample_founder(sim_table, rng)};
        const GenotypeProfile x = sample_child(parents, rng);
        const GenotypeProfile y = hyp == KinshipHypothesis::siblings
                                      ? sample_child(parents, rng)
                                      : sample_founder(sim_table, rng);
        const int ibs = ibs_score(x, y, loci_reduced);
        rows[i] = {case_id,
                   hyp,
                   ibs,
                   score_table.lr(ibs),
                   lr_sibling_feature(sim_table, x, y, loci_reduced),
                   lr_sibling_feature(sim_table, x, y, loci_full),
                   lr_parentage(sim_table, parents, y, loci_reduced)};
    });
    return rows;
}

} // namespace lrbayes::kin
