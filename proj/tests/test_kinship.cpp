#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <lrbayes/kinship.hpp>

#include "support/oracles.hpp"

using namespace lrbayes;
using kin::FrequencyTable;
using kin::GenotypeProfile;
using kin::LocusFrequencies;
using kin::LocusGenotype;
using kin::ParentPair;

namespace {

FrequencyTable two_allele_table() {
    return FrequencyTable({LocusFrequencies{"LA", {"a", "b"}, {0.5, 0.5}, {}}});
}

FrequencyTable three_locus_table() {
    return FrequencyTable({
        LocusFrequencies{"L1", {"a", "b", "c"}, {0.5, 0.3, 0.2}, {}},
        LocusFrequencies{"L2", {"a", "b"}, {0.7, 0.3}, {}},
        LocusFrequencies{"L3", {"a", "b", "c", "d"}, {0.4, 0.3, 0.2, 0.1}, {}},
    });
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

// Reference kinship math, written out directly: enumerate genotypes of one
// locus, their population frequencies, and the transmission probabilities.
struct LocusRef {
    std::vector<double> p;
    std::vector<LocusGenotype> genotypes;

    explicit LocusRef(std::vector<double> freqs) : p(std::move(freqs)) {
        for (std::uint16_t a = 0; a < p.size(); ++a)
            for (std::uint16_t b = a; b < p.size(); ++b) genotypes.push_back({a, b});
    }

    double hwe(LocusGenotype g) const {
        return g.first == g.second ? p[g.first] * p[g.first] : 2.0 * p[g.first] * p[g.second];
    }

    static double transmit(LocusGenotype g, std::uint16_t al) {
        return 0.5 * ((g.first == al ? 1.0 : 0.0) + (g.second == al ? 1.0 : 0.0));
    }

    static double mendel(LocusGenotype c, LocusGenotype m, LocusGenotype f) {
        if (c.first == c.second) return transmit(m, c.first) * transmit(f, c.first);
        return transmit(m, c.first) * transmit(f, c.second) +
               transmit(m, c.second) * transmit(f, c.first);
    }

    //! P(x, y | full siblings) by summing over parental genotype pairs.
    double sibling_joint(LocusGenotype x, LocusGenotype y) const {
        double acc = 0.0;
        for (const auto& m : genotypes)
            for (const auto& f : genotypes)
                acc += hwe(m) * hwe(f) * mendel(x, m, f) * mendel(y, m, f);
        return acc;
    }
};

int shared_alleles(LocusGenotype x, LocusGenotype y) {
    std::map<std::uint16_t, int> cx, cy;
    cx[x.first]++, cx[x.second]++;
    cy[y.first]++, cy[y.second]++;
    int s = 0;
    for (const auto& [al, n] : cx) {
        const auto it = cy.find(al);
        if (it != cy.end()) s += std::min(n, it->second);
    }
    return s;
}

} // namespace

TEST_CASE("frequency files parse, with line-numbered failures") {
    const std::string good = write_temp("freq_ok.csv",
                                        "locus,allele,frequency\n"
                                        "L1,a,0.5\nL1,b,0.5\nL2,x,0.25\nL2,y,0.75\n");
    const FrequencyTable t = FrequencyTable::load_csv(good);
    REQUIRE(t.locus_count() == 2);
    CHECK(t.locus(0).name == "L1");
    CHECK(t.locus(1).alleles[1] == "y");
    CHECK(t.locus(1).freq[1] == Catch::Approx(0.75).margin(1e-15));
    CHECK(t.locus(1).cum.back() == 1.0);

    const auto expect_failure = [](const std::string& name, const std::string& content,
                                   const std::string& needle) {
        const std::string path = write_temp(name, content);
        try {
            FrequencyTable::load_csv(path);
            FAIL("expected a parse failure for " << name);
        } catch (const contract_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
        std::remove(path.c_str());
    };
    expect_failure("freq_header.csv", "locus;allele;frequency\nL1,a,1.0\n", ":1:");
    expect_failure("freq_fields.csv", "locus,allele,frequency\nL1,a\n", ":2:");
    expect_failure("freq_value.csv", "locus,allele,frequency\nL1,a,0.5x\n", "bad frequency");
    expect_failure("freq_zero.csv", "locus,allele,frequency\nL1,a,0\nL1,b,1\n",
                   "strictly positive");
    expect_failure("freq_dup.csv", "locus,allele,frequency\nL1,a,0.5\nL1,a,0.5\n",
                   "duplicate allele");
    expect_failure("freq_sum.csv", "locus,allele,frequency\nL1,a,0.5\nL1,b,0.6\n", "sum");
    expect_failure("freq_single.csv", "locus,allele,frequency\nL1,a,1.0\n", "at least 2");
    CHECK_THROWS_AS(FrequencyTable::load_csv("/nonexistent/nothing.csv"), contract_error);
    std::remove(good.c_str());
}

TEST_CASE("the bundled frequency table is valid") {
    const FrequencyTable t =
        FrequencyTable::load_csv(std::string(LRBAYES_DATA_DIR) + "/synthetic_freqs.csv");
    REQUIRE(t.locus_count() == 15);
    for (std::size_t i = 0; i < t.locus_count(); ++i) {
        CHECK(t.locus(i).alleles.size() >= 8);
        double sum = 0.0;
        for (const double f : t.locus(i).freq) sum += f;
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("shared-allele score counts multiset overlap per locus") {
    const GenotypeProfile x{{{8, 9}, {8, 8}, {10, 11}}};
    const GenotypeProfile y{{{9, 8}, {8, 9}, {12, 13}}};
    // Per locus: {8,9} vs {8,9} = 2, {8,8} vs {8,9} = 1, disjoint = 0.
    CHECK(kin::ibs_score(x, y) == 3);
    CHECK(kin::ibs_score(x, y, 2) == 3);
    CHECK(kin::ibs_score(x, y, 1) == 2);

    const GenotypeProfile hom{{{8, 8}}};
    const GenotypeProfile het{{{8, 9}}};
    CHECK(kin::ibs_score(hom, hom, 1) == 2);
    CHECK(kin::ibs_score(hom, het, 1) == 1);
    CHECK_THROWS_AS(kin::ibs_score(x, y, 4), contract_error);
}

TEST_CASE("score distribution on one two-allele locus is hand-checkable") {
    const FrequencyTable t = two_allele_table();
    const auto unrel =
        kin::score_count_distribution(t, kin::KinshipHypothesis::unrelated, 1);
    REQUIRE(unrel.size() == 3);
    CHECK(unrel[0] == Catch::Approx(0.125).margin(1e-15));
    CHECK(unrel[1] == Catch::Approx(0.5).margin(1e-15));
    CHECK(unrel[2] == Catch::Approx(0.375).margin(1e-15));

    // Reference by parental enumeration.
    const LocusRef ref({0.5, 0.5});
    std::vector<double> sib_ref(3, 0.0);
    for (const auto& gx : ref.genotypes)
        for (const auto& gy : ref.genotypes)
            sib_ref[static_cast<std::size_t>(shared_alleles(gx, gy))] +=
                ref.sibling_joint(gx, gy);
    const auto sib = kin::score_count_distribution(t, kin::KinshipHypothesis::siblings, 1);
    REQUIRE(sib.size() == 3);
    for (int s = 0; s < 3; ++s) CHECK(sib[s] == Catch::Approx(sib_ref[s]).margin(1e-12));
}

TEST_CASE("multi-locus score distribution convolves the per-locus ones") {
    const FrequencyTable t = three_locus_table();
    for (const auto hyp : {kin::KinshipHypothesis::siblings, kin::KinshipHypothesis::unrelated}) {
        std::vector<double> conv = {1.0};
        for (std::size_t li = 0; li < 3; ++li) {
            const LocusRef ref(t.locus(li).freq);
            std::vector<double> locus_dist(3, 0.0);
            for (const auto& gx : ref.genotypes) {
                for (const auto& gy : ref.genotypes) {
                    const double w = hyp == kin::KinshipHypothesis::siblings
                                         ? ref.sibling_joint(gx, gy)
                                         : ref.hwe(gx) * ref.hwe(gy);
                    locus_dist[static_cast<std::size_t>(shared_alleles(gx, gy))] += w;
                }
            }
            std::vector<double> next(conv.size() + 2, 0.0);
            for (std::size_t i = 0; i < conv.size(); ++i)
                for (int s = 0; s < 3; ++s) next[i + s] += conv[i] * locus_dist[s];
            conv = std::move(next);
        }
        const auto got = kin::score_count_distribution(t, hyp, 3);
        REQUIRE(got.size() == conv.size());
        double mass = 0.0;
        for (std::size_t s = 0; s < got.size(); ++s) {
            CHECK(got[s] == Catch::Approx(conv[s]).margin(1e-12));
            mass += got[s];
        }
        CHECK(mass == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("sibling feature LR: fast path equals parental enumeration") {
    const FrequencyTable t = three_locus_table();
    RngStream rng(97, 0);
    for (int rep = 0; rep < 500; ++rep) {
        const GenotypeProfile x = kin::sample_founder(t, rng);
        const GenotypeProfile y = rep % 2 == 0 ? kin::sample_founder(t, rng)
                                               : kin::sample_child(
                                                     ParentPair{kin::sample_founder(t, rng),
                                                                kin::sample_founder(t, rng)},
                                                     rng);
        const double fast =
            kin::lr_sibling_feature(t, x, y, 3, kin::SiblingMethod::ibd_fast);
        const double slow =
            kin::lr_sibling_feature(t, x, y, 3, kin::SiblingMethod::parental_enumeration);
        CHECK(fast == Catch::Approx(slow).epsilon(1e-9));
    }
}

TEST_CASE("sibling feature LR against the reference joint, single locus") {
    const FrequencyTable t = three_locus_table();
    const LocusRef ref(t.locus(0).freq);
    for (const auto& gx : ref.genotypes) {
        for (const auto& gy : ref.genotypes) {
            const double expected = ref.sibling_joint(gx, gy) / (ref.hwe(gx) * ref.hwe(gy));
            const double got =
                kin::lr_sibling_feature(t, GenotypeProfile{{gx}}, GenotypeProfile{{gy}}, 1);
            CHECK(got == Catch::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("parentage LR on hand-checked cases") {
    const FrequencyTable t = two_allele_table();
    const ParentPair parents{GenotypeProfile{{{0, 0}}}, GenotypeProfile{{{0, 1}}}};
    // Child (a,a): transmit a from both, 1 * 0.5, against HWE 0.25.
    CHECK(kin::lr_parentage(t, parents, GenotypeProfile{{{0, 0}}}, 1) ==
          Catch::Approx(2.0).margin(1e-15));
    // Child (a,b): 1 * 0.5 against 2 * 0.25.
    CHECK(kin::lr_parentage(t, parents, GenotypeProfile{{{0, 1}}}, 1) ==
          Catch::Approx(1.0).margin(1e-15));
    // Child (b,b) is excluded: the mother carries no b.
    CHECK(kin::lr_parentage(t, parents, GenotypeProfile{{{1, 1}}}, 1) == 0.0);
}

TEST_CASE("score-based LR table satisfies the unit-mean identity") {
    for (const FrequencyTable& t : {two_allele_table(), three_locus_table()}) {
        const std::size_t n = t.locus_count();
        const kin::ScoreLrTable lr_table(t, n);
        const auto& unrel = lr_table.mass_unrelated();
        double mean_lr = 0.0;
        for (int s = 0; s <= static_cast<int>(lr_table.max_score()); ++s) {
            if (unrel[static_cast<std::size_t>(s)] == 0.0) continue;
            mean_lr += unrel[static_cast<std::size_t>(s)] * lr_table.lr(s);
        }
        CHECK(mean_lr == Catch::Approx(1.0).margin(1e-9));
        CHECK_THROWS_AS(lr_table.lr(-1), contract_error);
        CHECK_THROWS_AS(lr_table.lr(static_cast<int>(2 * n + 1)), contract_error);
    }
    CHECK(kin::lr_sibling_score(two_allele_table(), 2, 1) > 1.0);
    CHECK(kin::lr_sibling_score(two_allele_table(), 0, 1) < 1.0);
}

TEST_CASE("founder sampling matches Hardy-Weinberg genotype frequencies") {
    const FrequencyTable t =
        FrequencyTable({LocusFrequencies{"L", {"a", "b", "c"}, {0.5, 0.3, 0.2}, {}}});
    const LocusRef ref({0.5, 0.3, 0.2});
    std::map<LocusGenotype, std::size_t> counts;
    const std::size_t n = 100000;
    RngStream rng(1234, 0);
    for (std::size_t i = 0; i < n; ++i) counts[kin::sample_founder(t, rng).loci[0]]++;
    double chi2 = 0.0;
    for (const auto& g : ref.genotypes) {
        const double expected = ref.hwe(g) * static_cast<double>(n);
        const double observed = static_cast<double>(counts[g]);
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    // 6 genotypes, alpha = 0.001.
    CHECK(chi2 < oracle::chi_square_upper(5.0, 3.0902));
}

TEST_CASE("child sampling follows Mendelian transmission") {
    const ParentPair parents{GenotypeProfile{{{0, 1}}}, GenotypeProfile{{{1, 2}}}};
    std::map<LocusGenotype, std::size_t> counts;
    const std::size_t n = 100000;
    RngStream rng(4321, 0);
    for (std::size_t i = 0; i < n; ++i) counts[kin::sample_child(parents, rng).loci[0]]++;
    // Four equally likely outcomes: (0,1), (0,2), (1,1), (1,2).
    REQUIRE(counts.size() == 4);
    double chi2 = 0.0;
    for (const auto& [g, c] : counts) {
        const double expected = 0.25 * static_cast<double>(n);
        chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) /
                expected;
    }
    CHECK(chi2 < oracle::chi_square_upper(3.0, 3.0902));
}

TEST_CASE("simulated unrelated pairs keep the feature LR mean near one") {
    const FrequencyTable t = three_locus_table();
    RngStream rng(88, 0);
    const std::size_t n = 50000;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const GenotypeProfile x = kin::sample_founder(t, rng);
        const GenotypeProfile y = kin::sample_founder(t, rng);
        mean += kin::lr_sibling_feature(t, x, y, 3);
    }
    mean /= static_cast<double>(n);
    // E(LR | unrelated) = 1; the LR here is bounded enough for 5 sigma.
    CHECK(std::fabs(mean - 1.0) < 0.1);
}

TEST_CASE("kinship experiment rows are reproducible and labeled by block") {
    const FrequencyTable t =
        FrequencyTable::load_csv(std::string(LRBAYES_DATA_DIR) + "/synthetic_freqs.csv");
    kin::KinshipOptions opt;
    const auto rows = kin::kinship_experiment(t, 50, 15, 10, 7, opt);
    REQUIRE(rows.size() == 100);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].case_id == i);
        CHECK(rows[i].hypothesis ==
              (i < 50 ? kin::KinshipHypothesis::siblings : kin::KinshipHypothesis::unrelated));
        CHECK(rows[i].ibs_reduced >= 0);
        CHECK(rows[i].ibs_reduced <= 20);
        CHECK(rows[i].lr_feature_reduced > 0.0);
    }

    opt.workers = 3;
    const auto rows3 = kin::kinship_experiment(t, 50, 15, 10, 7, opt);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].ibs_reduced == rows3[i].ibs_reduced);
        CHECK(rows[i].lr_feature_full == rows3[i].lr_feature_full);
        CHECK(rows[i].lr_parentage_reduced == rows3[i].lr_parentage_reduced);
    }

    CHECK_THROWS_AS(kin::kinship_experiment(t, 50, 16, 10, 7, opt), contract_error);
    CHECK_THROWS_AS(kin::kinship_experiment(t, 0, 15, 10, 7, opt), contract_error);
}
