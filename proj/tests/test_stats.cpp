#include <doctest.h>

#include <cmath>

#include "fairlens/errors.hpp"
#include "fairlens/rng.hpp"
#include "fairlens/stats.hpp"

using namespace fairlens;

TEST_CASE("mid-rank examples") {
    const auto r1 = rank_with_ties(std::vector<double>{10, 20, 30});
    CHECK(r1.ranks == std::vector<double>{1, 2, 3});
    CHECK(r1.tie_sizes.empty());

    const auto r2 = rank_with_ties(std::vector<double>{5, 5});
    CHECK(r2.ranks == std::vector<double>{1.5, 1.5});
    CHECK(r2.tie_sizes == std::vector<std::size_t>{2});

    const auto r3 = rank_with_ties(std::vector<double>{1, 2, 2, 3});
    CHECK(r3.ranks == std::vector<double>{1, 2.5, 2.5, 4});

    CHECK_THROWS_AS(rank_with_ties(std::vector<double>{}), InputError);
}

TEST_CASE("ranks sum to N(N+1)/2 for random inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 60));
        std::vector<double> values(n);
        for (auto& v : values) v = static_cast<double>(rng.uniform_int(0, 9)); // heavy ties
        const auto r = rank_with_ties(values);
        double sum = 0;
        for (const double x : r.ranks) sum += x;
        CHECK(sum == doctest::Approx(static_cast<double>(n * (n + 1)) / 2.0));
    }
}

// Reference p-values and statistics below were computed with SciPy 1.15
// (stats.kruskal, stats.chi2_contingency with correction=False, chi2.sf)
// and frozen here so the suite needs no Python at build time.
TEST_CASE("kruskal-wallis matches the reference implementation") {
    struct Fixture {
        std::vector<std::vector<double>> groups;
        double h;
        double p;
    };
    const std::vector<Fixture> fixtures = {
        {{{1, 2, 3}, {4, 5, 6}}, 3.857142857142854, 0.049534613435626915},
        {{{1, 2, 3}, {3, 2, 1}, {2, 1, 3}}, 0.0, 1.0},
        {{{10, 20, 30}, {15, 25, 35}, {12, 22, 32}}, 0.8000000000000007, 0.6703200460356391},
        {{{1.5, 2.5, 3.5, 4.5}, {2.0, 3.0, 4.0, 5.0}}, 0.33333333333333215, 0.5637028616507738},
        {{{5, 5, 5, 6}, {5, 6, 6, 6}}, 1.7499999999999984, 0.18587673236587227},
        {{{1, 1, 2, 2, 3, 3}, {4, 4, 5, 5, 6, 6}, {7, 7, 8, 8, 9, 9}}, 15.29999999999999, 0.00047604412902227194},
        {{{100}, {200}, {300}}, 2.0, 0.36787944117144245},
        {{{0.1, 0.2, 0.3, 0.4, 0.5}, {0.15, 0.25, 0.35, 0.45, 0.55}, {0.12, 0.22, 0.32}, {0.9, 1.0, 1.1}},
         7.852941176470594, 0.04915077893570952},
        {{{3, 1, 4, 1, 5}, {9, 2, 6, 5, 3}, {5, 8, 9, 7, 9}}, 7.162909090909095, 0.02783518125910727},
        {{{-5, -3, -1}, {0, 2, 4}, {1, 3, 5}, {-2, 0, 2}}, 7.307511737089208, 0.06271613294589619},
        {{{1e6, 2e6}, {1.5e6, 2.5e6}, {1.2e6, 2.2e6}}, 1.1428571428571423, 0.5647181220077593},
    };
    for (const auto& f : fixtures) {
        const auto r = kruskal_wallis(f.groups);
        CHECK(r.h == doctest::Approx(f.h).epsilon(1e-9));
        CHECK(r.p_value == doctest::Approx(f.p).epsilon(1e-9));
        CHECK(r.df == static_cast<int>(f.groups.size()) - 1);
    }
}

TEST_CASE("kruskal-wallis all-ties convention") {
    const auto r = kruskal_wallis({{7, 7}, {7, 7}});
    CHECK(r.h == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.df == 1);
}

TEST_CASE("kruskal-wallis permutation groups give H = 0") {
    const auto r = kruskal_wallis({{1, 2, 3}, {3, 2, 1}, {2, 1, 3}});
    CHECK(r.h == doctest::Approx(0.0));
}

TEST_CASE("kruskal-wallis is invariant under monotone transforms") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> groups, transformed;
        const int k = static_cast<int>(rng.uniform_int(2, 4));
        for (int g = 0; g < k; ++g) {
            std::vector<double> values, evalues;
            const int n = static_cast<int>(rng.uniform_int(3, 12));
            for (int i = 0; i < n; ++i) {
                const double v = rng.uniform() * 4 - 2;
                values.push_back(v);
                evalues.push_back(std::exp(v));
            }
            groups.push_back(std::move(values));
            transformed.push_back(std::move(evalues));
        }
        const auto r1 = kruskal_wallis(groups);
        const auto r2 = kruskal_wallis(transformed);
        CHECK(r1.h == doctest::Approx(r2.h).epsilon(1e-12));
        CHECK(r1.h >= 0.0);
    }
}

TEST_CASE("kruskal-wallis preconditions") {
    CHECK_THROWS_AS(kruskal_wallis({{1, 2, 3}}), InputError);
    CHECK_THROWS_AS(kruskal_wallis({{1}, {2}}), InputError);
    CHECK_THROWS_AS(kruskal_wallis({{1, 2}, {}}), InputError);
}

TEST_CASE("epsilon squared") {
    CHECK(epsilon_squared(3.857142857142854, 6) == doctest::Approx(0.7714285714285708));
    CHECK(epsilon_squared(0, 10) == 0.0);
    CHECK(epsilon_squared(4.95, 100) == doctest::Approx(0.05));
    CHECK(interpret_effect(EffectKind::EpsilonSquared, epsilon_squared(4.95, 100)) == Interpretation::Small);
    CHECK_THROWS_AS(epsilon_squared(1.0, 1), InputError);
}

TEST_CASE("epsilon squared stays within [0,1] on random group data") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<double>> groups;
        std::size_t n_total = 0;
        const int k = static_cast<int>(rng.uniform_int(2, 5));
        for (int g = 0; g < k; ++g) {
            std::vector<double> values;
            const int n = static_cast<int>(rng.uniform_int(2, 20));
            for (int i = 0; i < n; ++i) values.push_back(static_cast<double>(rng.uniform_int(0, 5)));
            n_total += values.size();
            groups.push_back(std::move(values));
        }
        const auto r = kruskal_wallis(groups);
        const double eps2 = epsilon_squared(r.h, n_total);
        CHECK(eps2 >= 0.0);
        CHECK(eps2 <= 1.0 + 1e-12);
    }
}

TEST_CASE("chi-square matches the reference implementation") {
    struct Fixture {
        std::vector<std::vector<std::int64_t>> counts;
        double chi2;
        int df;
        double p;
        double v;
    };
    const std::vector<Fixture> fixtures = {
        {{{10, 20}, {20, 10}}, 6.666666666666667, 1, 0.009823274507519235, 0.33333333333333337},
        {{{5, 0}, {0, 5}}, 10.0, 1, 0.001565402258002549, 1.0},
        {{{10, 10}, {10, 10}}, 0.0, 1, 1.0, 0.0},
        {{{12, 7, 9}, {8, 14, 6}, {10, 9, 15}}, 6.894957983193276, 4, 0.1415444361654284, 0.1957174548394995},
        {{{30, 10, 5}, {20, 25, 10}}, 9.187109187109188, 2, 0.01011683315387354, 0.3031024445152033},
        {{{50, 30, 20, 10}, {10, 20, 30, 50}}, 57.333333333333336, 3, 2.1814964136864257e-12, 0.5104958967573203},
        {{{3, 9}, {7, 2}, {5, 5}}, 5.751504629629631, 2, 0.05637371276736618, 0.4307347297437339},
        {{{100, 200}, {150, 150}, {120, 180}}, 17.44008159102499, 2, 0.00016328052967304622, 0.13920441241021136},
        {{{1, 2, 3, 4}, {4, 3, 2, 1}, {2, 2, 2, 2}}, 4.0, 6, 0.6766764161830634, 0.2672612419124244},
        {{{40, 60}, {35, 65}}, 0.5333333333333333, 1, 0.4652088184521417, 0.051639777949432225},
    };
    for (const auto& f : fixtures) {
        ContingencyTable t;
        t.counts = f.counts;
        const auto r = chi_square_independence(t);
        REQUIRE(r.has_value());
        CHECK(r->chi2 == doctest::Approx(f.chi2).epsilon(1e-9));
        CHECK(r->df == f.df);
        CHECK(r->p_value == doctest::Approx(f.p).epsilon(1e-6));
        CHECK(cramers_v(r->chi2, t.total(), r->rows, r->cols) == doctest::Approx(f.v).epsilon(1e-9));
    }
}

TEST_CASE("identical row distributions give chi2 = 0, p = 1") {
    ContingencyTable t;
    t.counts = {{10, 10}, {10, 10}};
    const auto r = chi_square_independence(t);
    REQUIRE(r.has_value());
    CHECK(r->chi2 == 0.0);
    CHECK(r->p_value == 1.0);
}

TEST_CASE("empty marginals are dropped before testing") {
    ContingencyTable t;
    t.counts = {{10, 0, 20}, {0, 0, 0}, {20, 0, 10}};
    const auto r = chi_square_independence(t);
    REQUIRE(r.has_value());
    CHECK(r->rows == 2);
    CHECK(r->cols == 2);
    CHECK(r->chi2 == doctest::Approx(6.666666666666667));

    ContingencyTable degenerate;
    degenerate.counts = {{10, 0}, {20, 0}};
    CHECK_FALSE(chi_square_independence(degenerate).has_value()); // one non-empty column left

    ContingencyTable empty;
    CHECK_FALSE(chi_square_independence(empty).has_value());
}

TEST_CASE("cramers v") {
    CHECK(cramers_v(6.667, 60, 2, 2) == doctest::Approx(0.3333).epsilon(1e-3));
    CHECK(cramers_v(0, 10, 2, 2) == 0.0);
    const double v = cramers_v(15.072, 60, 2, 2);
    CHECK(v == doctest::Approx(0.5012).epsilon(1e-3));
    CHECK(interpret_effect(EffectKind::CramersV, v) == Interpretation::VeryLarge);
    CHECK_THROWS_AS(cramers_v(1.0, 0, 2, 2), InputError);
    CHECK_THROWS_AS(cramers_v(1.0, 10, 1, 5), InputError);
}

TEST_CASE("chi2 upper tail matches reference values") {
    struct Fixture {
        double x;
        int df;
        double p;
    };
    const std::vector<Fixture> fixtures = {
        {0.0, 1, 1.0},
        {3.841, 1, 0.050013683763956804},
        {5.991, 2, 0.05001161502657909},
        {7.815, 3, 0.049993902974883875},
        {1.0, 1, 0.31731050786291115},
        {2.706, 1, 0.09997137812525883},
        {6.635, 1, 0.009999419574042536},
        {10.828, 1, 0.0009997657195830916},
        {0.5, 2, 0.7788007830714049},
        {4.605, 2, 0.10000850966145562},
        {9.21, 2, 0.01000170200470548},
        {1.386, 2, 0.5000735956957677},
        {12.5, 5, 0.028543123326167485},
        {3.0, 4, 0.5578254003710748},
        {25.0, 10, 0.005345505487134069},
        {0.01, 1, 0.920344325445942},
        {18.307, 10, 0.05000058909139812},
        {50.0, 30, 0.01240206071890054},
        {3.857142857142857, 1, 0.04953461343562649},
        {6.666666666666667, 1, 0.009823274507519235},
    };
    for (const auto& f : fixtures) CHECK(chi2_upper_tail(f.x, f.df) == doctest::Approx(f.p).epsilon(1e-10));
}

TEST_CASE("chi2 upper tail is monotone decreasing and hits the 0.05 criticals") {
    for (const int df : {1, 2, 3, 5, 10}) {
        double prev = 1.0;
        for (double x = 0.25; x < 40; x += 0.25) {
            const double p = chi2_upper_tail(x, df);
            CHECK(p < prev);
            prev = p;
        }
    }
    CHECK(std::fabs(chi2_upper_tail(3.841, 1) - 0.05) < 0.001);
    CHECK(std::fabs(chi2_upper_tail(5.991, 2) - 0.05) < 0.001);
    CHECK(std::fabs(chi2_upper_tail(7.815, 3) - 0.05) < 0.001);
    CHECK_THROWS_AS(chi2_upper_tail(-1.0, 1), InputError);
    CHECK_THROWS_AS(chi2_upper_tail(1.0, 0), InputError);
}

TEST_CASE("epsilon-squared interpretation bands") {
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.0) == Interpretation::Negligible);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.0099) == Interpretation::Negligible);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.01) == Interpretation::Small);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.0285) == Interpretation::Small);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.06) == Interpretation::Medium);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.1375) == Interpretation::Medium);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.14) == Interpretation::Large);
    CHECK(interpret_effect(EffectKind::EpsilonSquared, 0.1554) == Interpretation::Large);
}

TEST_CASE("cramers v interpretation bands, table convention") {
    CHECK(interpret_effect(EffectKind::CramersV, 0.049) == Interpretation::Small);
    CHECK(interpret_effect(EffectKind::CramersV, 0.29) == Interpretation::Medium);
    CHECK(interpret_effect(EffectKind::CramersV, 0.37) == Interpretation::Large);
    CHECK(interpret_effect(EffectKind::CramersV, 0.5024) == Interpretation::VeryLarge);
    CHECK(interpret_effect(EffectKind::CramersV, 0.1) == Interpretation::Medium);
    CHECK(interpret_effect(EffectKind::CramersV, 0.3) == Interpretation::Large);
    CHECK(interpret_effect(EffectKind::CramersV, 0.5) == Interpretation::VeryLarge);
}

TEST_CASE("cramers v interpretation bands, prose convention") {
    CHECK(interpret_effect(EffectKind::CramersV, 0.05, VConvention::ProseAnchors) == Interpretation::Negligible);
    CHECK(interpret_effect(EffectKind::CramersV, 0.1, VConvention::ProseAnchors) == Interpretation::Small);
    CHECK(interpret_effect(EffectKind::CramersV, 0.29, VConvention::ProseAnchors) == Interpretation::Small);
    CHECK(interpret_effect(EffectKind::CramersV, 0.37, VConvention::ProseAnchors) == Interpretation::Medium);
    CHECK(interpret_effect(EffectKind::CramersV, 0.5, VConvention::ProseAnchors) == Interpretation::Large);
    CHECK(interpret_effect(EffectKind::CramersV, 0.51, VConvention::ProseAnchors) == Interpretation::VeryLarge);
}

namespace {

CaseOutcomes make_outcome(int acuity, InsuranceGroup insurance, double duration, DecisionGroup decision) {
    CaseOutcomes o;
    o.acuity = acuity;
    o.duration_seconds = static_cast<std::int64_t>(duration);
    o.redo.waste_pct = 0;
    o.fitness = 1;
    o.decision = decision;
    o.profile.insurance_group = insurance;
    return o;
}

} // namespace

TEST_CASE("full grid has exactly 100 cells") {
    std::vector<CaseOutcomes> outcomes;
    Rng rng(5);
    for (int i = 0; i < 400; ++i) {
        auto o = make_outcome(static_cast<int>(rng.uniform_int(1, 5)),
                              rng.bernoulli(0.5) ? InsuranceGroup::Public : InsuranceGroup::Private,
                              rng.uniform() * 1000, rng.bernoulli(0.5) ? DecisionGroup::Home : DecisionGroup::Facility);
        o.profile.race_group = rng.bernoulli(0.5) ? RaceGroup::Caucasian : RaceGroup::NonCaucasian;
        o.profile.gender = rng.bernoulli(0.5) ? Gender::Female : Gender::Male;
        o.profile.language_group = rng.bernoulli(0.5) ? LanguageGroup::English : LanguageGroup::NonEnglish;
        o.profile.age_group = rng.bernoulli(0.5) ? AgeGroup::Until45 : AgeGroup::Older;
        outcomes.push_back(std::move(o));
    }
    const auto results = run_attribute_tests(outcomes);
    CHECK(results.size() == 100);
    std::size_t by_outcome[4] = {0, 0, 0, 0};
    for (const auto& r : results) ++by_outcome[static_cast<std::size_t>(r.outcome)];
    for (const auto n : by_outcome) CHECK(n == 25);
}

TEST_CASE("undersized groups are excluded; lone survivors mean not tested") {
    std::vector<CaseOutcomes> outcomes;
    for (int i = 0; i < 100; ++i)
        outcomes.push_back(make_outcome(3, InsuranceGroup::Public, 100 + i, DecisionGroup::Home));
    for (int i = 0; i < 10; ++i)
        outcomes.push_back(make_outcome(3, InsuranceGroup::Private, 500 + i, DecisionGroup::Facility));

    const auto results = run_attribute_tests(outcomes);
    for (const auto& r : results) {
        if (r.attribute != SensitiveAttribute::Insurance || r.acuity != 3) continue;
        CHECK_FALSE(r.tested);
        CHECK_FALSE(r.p_value.has_value());
        CHECK_FALSE(r.statistic.has_value());
        CHECK_FALSE(r.significant.has_value());
        REQUIRE(r.group_sizes.size() == 2); // sizes still reported
        CHECK(r.group_sizes[0] == std::pair<std::string, std::size_t>{"Private", 10});
        CHECK(r.group_sizes[1] == std::pair<std::string, std::size_t>{"Public", 100});
    }
}

TEST_CASE("a strong duration shift is detected in the right cell") {
    std::vector<CaseOutcomes> outcomes;
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        outcomes.push_back(make_outcome(3, InsuranceGroup::Public, 1000 + rng.uniform() * 100, DecisionGroup::Home));
        outcomes.push_back(make_outcome(3, InsuranceGroup::Private, 500 + rng.uniform() * 100, DecisionGroup::Home));
    }
    const auto results = run_attribute_tests(outcomes);
    for (const auto& r : results) {
        if (r.outcome != OutcomeKind::Time || r.attribute != SensitiveAttribute::Insurance) continue;
        if (r.acuity == 3) {
            REQUIRE(r.tested);
            CHECK(*r.significant);
            CHECK(*r.p_value < 0.001);
            CHECK(*r.effect > 0.5);
            CHECK(*r.interpretation == Interpretation::Large);
        } else {
            CHECK_FALSE(r.tested); // empty stratum
        }
    }
}

TEST_CASE("decision test runs chi-square with cramers v") {
    std::vector<CaseOutcomes> outcomes;
    for (int i = 0; i < 60; ++i) {
        outcomes.push_back(make_outcome(2, InsuranceGroup::Public,
                                        100, i % 3 == 0 ? DecisionGroup::Home : DecisionGroup::Facility));
        outcomes.push_back(make_outcome(2, InsuranceGroup::Private,
                                        100, i % 3 == 0 ? DecisionGroup::Facility : DecisionGroup::Home));
    }
    const auto results = run_attribute_tests(outcomes);
    for (const auto& r : results) {
        if (r.outcome != OutcomeKind::Decision || r.attribute != SensitiveAttribute::Insurance || r.acuity != 2)
            continue;
        REQUIRE(r.tested);
        CHECK(r.test == TestKind::ChiSquare);
        CHECK(*r.significant);
        CHECK(*r.effect > 0.3);
    }
}

TEST_CASE("p-value formatting") {
    CHECK(format_p_value(0.0005) == "<0.001");
    CHECK(format_p_value(0.001) == "0.001");
    CHECK(format_p_value(0.0494999) == "0.049");
    CHECK(format_p_value(0.655) == "0.655");
}
