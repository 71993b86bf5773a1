#include <gtest/gtest.h>

#include "iaco/fitness.hpp"
#include "oracles.hpp"

using namespace iaco;

namespace {

// 2 attributes (a0, a1), 2 methods (m0 = element 2, m1 = element 3), 4 uses.
DesignProblem two_class_instance() {
    return DesignProblem{"two", {"a0", "a1"}, {"m0", "m1"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2};
}

}  // namespace

TEST(Cbo, FullyInternalIsZero) {
    DesignProblem p{"p", {"a0", "a1"}, {"m0", "m1"}, {{0, 0}, {1, 1}}, 2};
    EXPECT_DOUBLE_EQ(cbo(p, DesignSolution{{{0, 2}, {1, 3}}}), 0.0);
}

TEST(Cbo, OneOfFourCrossing) {
    // Hand enumeration: classes {a0, m0, m1}, {a1}. Uses (m0,a0) in, (m0,a1) out,
    // (m1,a0) in, (m1,a1) out -> 2/4. Drop (m1,a1) to get exactly one crossing in 4:
    DesignProblem p{"p", {"a0", "a1", "a2"}, {"m0", "m1"}, {{0, 0}, {0, 1}, {1, 2}, {1, 0}}, 2};
    // classes: {a0, m0, a2, m1}, {a1}: (m0,a0) in, (m0,a1) out, (m1,a2) in, (m1,a0) in.
    const DesignSolution s{{{0, 3, 2, 4}, {1}}};
    EXPECT_DOUBLE_EQ(cbo(p, s), 0.25);
    EXPECT_DOUBLE_EQ(oracle::metrics(p, s).cbo, 0.25);
}

TEST(Cbo, AllCrossingIsOne) {
    const auto p = two_class_instance();
    EXPECT_DOUBLE_EQ(cbo(p, DesignSolution{{{0, 1}, {2, 3}}}), 1.0);
}

TEST(Nac, EqualCountsGiveZero) {
    const auto p = two_class_instance();
    EXPECT_DOUBLE_EQ(nac(p, DesignSolution{{{0, 2}, {1, 3}}}), 0.0);
}

TEST(Nac, TwoZeroAndOneOne) {
    // attribute counts [2, 0] -> sd 1; method counts [1, 1] -> sd 0; mean 0.5.
    const auto p = two_class_instance();
    const DesignSolution s{{{0, 1, 2}, {3}}};
    EXPECT_DOUBLE_EQ(nac(p, s), 0.5);
    EXPECT_DOUBLE_EQ((oracle::pairwise_stddev({2, 0}) + oracle::pairwise_stddev({1, 1})) / 2.0, 0.5);
}

TEST(Nac, SingleClassIsZero) {
    DesignProblem p{"p", {"a0", "a1"}, {"m0"}, {{0, 0}}, 1};
    EXPECT_DOUBLE_EQ(nac(p, DesignSolution{{{0, 1, 2}}}), 0.0);
    EXPECT_DOUBLE_EQ(atmr(p, DesignSolution{{{0, 1, 2}}}), 0.0);
}

TEST(Atmr, SharedRatioIsZero) {
    DesignProblem p{"p", {"a0", "a1", "a2", "a3"}, {"m0", "m1"}, {{0, 0}}, 2};
    EXPECT_DOUBLE_EQ(atmr(p, DesignSolution{{{0, 1, 4}, {2, 3, 5}}}), 0.0);
}

TEST(Atmr, RatiosTwoAndOne) {
    // class 0: 2 attributes / 1 method = 2; class 1: 1 attribute / 1 method = 1; sd = 0.5.
    DesignProblem p{"p", {"a0", "a1", "a2"}, {"m0", "m1"}, {{0, 0}}, 2};
    const DesignSolution s{{{0, 1, 3}, {2, 4}}};
    EXPECT_DOUBLE_EQ(atmr(p, s), 0.5);
    EXPECT_DOUBLE_EQ(oracle::pairwise_stddev({2.0, 1.0}), 0.5);
}

TEST(Atmr, MethodlessClassUsesDivisorOne) {
    // class 0: 3 attributes, 0 methods -> ratio 3; class 1: 1 attribute, 1 method -> 1.
    // Population sd of {3, 1} = 1.
    DesignProblem p{"p", {"a0", "a1", "a2", "a3"}, {"m0"}, {{0, 3}}, 2};
    const DesignSolution s{{{0, 1, 2}, {3, 4}}};
    EXPECT_DOUBLE_EQ(atmr(p, s), 1.0);
}

TEST(MetricVector, IdealDesignIsZero) {
    DesignProblem ideal{"p", {"a0", "a1"}, {"m0", "m1"}, {{0, 0}, {1, 1}}, 2};
    EXPECT_EQ(metric_vector(ideal, DesignSolution{{{0, 2}, {1, 3}}}), (MetricVector{0, 0, 0}));
}

TEST(MetricVector, EnumeratedTargetTriple) {
    // Search all small two-class layouts for one whose metrics are (0.25, 0.5, 0.5)
    // according to the oracle, then check the library agrees on it.
    bool found = false;
    for (std::uint32_t na = 1; na <= 4 && !found; ++na) {
        for (std::uint32_t nm = 1; nm <= 4 && !found; ++nm) {
            for (std::uint32_t mask = 0; mask < (1u << (na + nm)) && !found; ++mask) {
                DesignProblem p;
                p.name = "enum";
                p.class_count = 2;
                for (std::uint32_t i = 0; i < na; ++i) p.attributes.push_back("a" + std::to_string(i));
                for (std::uint32_t j = 0; j < nm; ++j) p.methods.push_back("m" + std::to_string(j));
                DesignSolution s;
                s.classes.resize(2);
                for (ElementId e = 0; e < na + nm; ++e) s.classes[(mask >> e) & 1u].push_back(e);
                // Four uses: three internal, one crossing, if the layout allows it.
                std::vector<Use> internal, crossing;
                for (std::uint32_t j = 0; j < nm; ++j) {
                    for (std::uint32_t i = 0; i < na; ++i) {
                        const bool same = oracle::owner_of(s, i) == oracle::owner_of(s, na + j);
                        (same ? internal : crossing).push_back({j, i});
                    }
                }
                if (internal.size() < 3 || crossing.empty()) continue;
                p.uses = {internal[0], internal[1], internal[2], crossing[0]};
                const auto o = oracle::metrics(p, s);
                if (std::abs(o.cbo - 0.25) < 1e-12 && std::abs(o.nac - 0.5) < 1e-12 && std::abs(o.atmr - 0.5) < 1e-12) {
                    found = true;
                    const auto m = metric_vector(p, s);
                    EXPECT_DOUBLE_EQ(m.cbo, 0.25);
                    EXPECT_DOUBLE_EQ(m.nac, 0.5);
                    EXPECT_DOUBLE_EQ(m.atmr, 0.5);
                }
            }
        }
    }
    EXPECT_TRUE(found);
}

TEST(MetricVector, InvariantUnderClassAndMemberPermutation) {
    Rng rng(21);
    for (int k = 0; k < 200; ++k) {
        const auto p = gen::problem(rng);
        auto s = gen::solution(p, rng);
        const auto base = metric_vector(p, s);
        for (auto& cls : s.classes) {
            for (std::size_t i = cls.size(); i > 1; --i) std::swap(cls[i - 1], cls[rng.below(i)]);
        }
        for (std::size_t i = s.classes.size(); i > 1; --i) std::swap(s.classes[i - 1], s.classes[rng.below(i)]);
        const auto perm = metric_vector(p, s);
        ASSERT_EQ(base.cbo, perm.cbo);
        ASSERT_NEAR(base.nac, perm.nac, 1e-12);
        ASSERT_NEAR(base.atmr, perm.atmr, 1e-12);
    }
}

TEST(MetricVector, RangesHold) {
    Rng rng(22);
    for (int k = 0; k < 500; ++k) {
        const auto p = gen::problem(rng);
        const auto m = metric_vector(p, gen::solution(p, rng));
        ASSERT_GE(m.cbo, 0.0);
        ASSERT_LE(m.cbo, 1.0);
        ASSERT_GE(m.nac, 0.0);
        ASSERT_GE(m.atmr, 0.0);
    }
}

TEST(CombinedScore, Examples) {
    EXPECT_DOUBLE_EQ(combined_score({0, 0, 0}, {0.2, 0.5, 0.3}), 1.0);
    EXPECT_DOUBLE_EQ(combined_score({1, 1e12, 1e12}, {1, 0, 0}), 0.0);
    EXPECT_NEAR(combined_score({0.25, 0.5, 0.5}, {0.34, 0.33, 0.33}), 0.34 * 0.75 + 0.66 * (2.0 / 3.0), 1e-15);
    EXPECT_NEAR(combined_score({0.25, 0.5, 0.5}, {0.34, 0.33, 0.33}), 0.695, 1e-12);
}

TEST(CombinedScore, BoundedAndMonotone) {
    Rng rng(23);
    for (int k = 0; k < 2000; ++k) {
        const double a = rng.uniform(), b = rng.uniform();
        const WeightVector w{a * b, a * (1 - b), 1 - a};
        const auto m = gen::metric(rng);
        const double q = combined_score(m, w);
        ASSERT_GE(q, 0.0);
        ASSERT_LE(q, 1.0 + 1e-15);
        auto worse = m;
        worse.cbo = std::min(1.0, worse.cbo + rng.uniform());
        worse.nac += rng.uniform();
        worse.atmr += rng.uniform();
        ASSERT_LE(combined_score(worse, w), q);
    }
}

TEST(WeightVector, Validity) {
    EXPECT_TRUE(WeightVector{}.valid());
    EXPECT_TRUE(WeightVector::equal().valid());
    EXPECT_FALSE((WeightVector{0.5, 0.5, 0.5}.valid()));
    EXPECT_FALSE((WeightVector{-0.1, 0.6, 0.5}.valid()));
    EXPECT_THROW(validate(WeightVector{1, 1, 1}), ValidationError);
}

TEST(ClassCohesion, Examples) {
    DesignProblem p{"p", {"a0", "a1"}, {"m0", "m1"}, {{0, 0}, {1, 1}}, 2};
    EXPECT_DOUBLE_EQ(class_cohesion(p, DesignSolution{{{0, 2}, {1, 3}}}, 0), 1.0);

    // Class 0 = {a0, m0}; uses touching it: (m0,a0) in, (m0,a1) out, (m1,a0) out, (m0,a2) in.
    DesignProblem q{"q", {"a0", "a1", "a2"}, {"m0", "m1"}, {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}}, 2};
    const DesignSolution s{{{0, 2, 3}, {1, 4}}};
    EXPECT_DOUBLE_EQ(class_cohesion(q, s, 0), 0.5);

    DesignProblem r{"r", {"a0", "a1"}, {"m0"}, {{0, 0}}, 2};
    EXPECT_DOUBLE_EQ(class_cohesion(r, DesignSolution{{{0, 2}, {1}}}, 1), 0.0);
    EXPECT_THROW(class_cohesion(r, DesignSolution{{{0, 2}, {1}}}, 2), ValidationError);
}

TEST(CohesionTier, Thresholds) {
    EXPECT_EQ(cohesion_tier(1.0), CohesionTier::high);
    EXPECT_EQ(cohesion_tier(2.0 / 3.0), CohesionTier::high);
    EXPECT_EQ(cohesion_tier(0.5), CohesionTier::intermediate);
    EXPECT_EQ(cohesion_tier(1.0 / 3.0), CohesionTier::intermediate);
    EXPECT_EQ(cohesion_tier(0.0), CohesionTier::low);
}

TEST(CouplingStrength, DirectionAndErrors) {
    DesignProblem p{"p", {"a0", "a1"}, {"m0", "m1"}, {{0, 0}, {1, 1}}, 2};
    const DesignSolution internal{{{0, 2}, {1, 3}}};
    EXPECT_EQ(coupling_strength(p, internal, 0, 1), 0u);
    EXPECT_EQ(coupling_strength(p, internal, 1, 0), 0u);

    // m0 in class 0 uses a0 in class 1.
    DesignProblem q{"q", {"a0"}, {"m0"}, {{0, 0}}, 2};
    const DesignSolution s{{{1}, {0}}};
    EXPECT_EQ(coupling_strength(q, s, 0, 1), 1u);
    EXPECT_EQ(coupling_strength(q, s, 1, 0), 0u);
    EXPECT_THROW(coupling_strength(q, s, 1, 1), ValidationError);
}

TEST(CouplingStrength, SumEqualsCrossingUses) {
    Rng rng(24);
    for (int k = 0; k < 200; ++k) {
        const auto p = gen::problem(rng);
        const auto s = gen::solution(p, rng);
        std::size_t total = 0;
        for (std::uint32_t i = 0; i < p.class_count; ++i)
            for (std::uint32_t j = 0; j < p.class_count; ++j)
                if (i != j) total += coupling_strength(p, s, i, j);
        ASSERT_DOUBLE_EQ(static_cast<double>(total), static_cast<double>(p.uses.size()) * cbo(p, s));
        const auto km = coupling_matrix(p, s);
        for (std::uint32_t i = 0; i < p.class_count; ++i)
            for (std::uint32_t j = 0; j < p.class_count; ++j)
                if (i != j) {
                    ASSERT_EQ(km[i][j], coupling_strength(p, s, i, j));
                }
    }
}

namespace {

// 55 elements (43 attributes + 12 methods) in 5 classes, with class 2 holding 44.
DesignSolution skewed(const DesignProblem& p, std::uint32_t big_class, std::uint32_t big) {
    DesignSolution s;
    s.classes.resize(p.class_count);
    ElementId e = 0;
    for (; e < big; ++e) s.classes[big_class].push_back(e);
    std::uint32_t c = 0;
    for (; e < p.element_count(); ++e) {
        if (c == big_class) c = (c + 1) % p.class_count;
        s.classes[c].push_back(e);
        c = (c + 1) % p.class_count;
    }
    return s;
}

}  // namespace

TEST(GodClass, FlagsMajorityHolder) {
    const auto p = generate_problem(43, 12, 121, 5, 1);
    const auto s = skewed(p, 2, 44);
    ASSERT_EQ(s.classes[2].size(), 44u);
    EXPECT_EQ(detect_god_class(p, s), std::optional<std::uint32_t>(2));
}

TEST(GodClass, EvenSplitAndTwoClassesAreClean) {
    const auto p = generate_problem(43, 12, 121, 5, 1);
    DesignSolution even;
    even.classes.resize(5);
    for (ElementId e = 0; e < p.element_count(); ++e) even.classes[e % 5].push_back(e);
    EXPECT_EQ(detect_god_class(p, even), std::nullopt);

    DesignProblem q{"q", {"a0", "a1", "a2", "a4", "a5", "a6"}, {"m0", "m1", "m2", "m3"}, {{0, 0}}, 2};
    const DesignSolution split{{{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9}}};  // 60 / 40
    EXPECT_EQ(detect_god_class(q, split), std::nullopt);
}

TEST(GodClass, ExactlyHalfIsNotAGodClass) {
    DesignProblem p{"p", {"a0", "a1", "a2"}, {"m0", "m1", "m2"}, {{0, 0}}, 3};
    EXPECT_EQ(detect_god_class(p, DesignSolution{{{0, 1, 2}, {3, 4}, {5}}}), std::nullopt);
    EXPECT_EQ(detect_god_class(p, DesignSolution{{{0, 1, 2, 3}, {4}, {5}}}), std::optional<std::uint32_t>(0));
}
