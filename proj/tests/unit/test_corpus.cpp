#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fc/corpus/selector.hpp"
#include "fc/runner/test_runner.hpp"
#include "support.hpp"

namespace {

using namespace fc::corpus;
using fc::subject::TestCase;

TestCase synthetic(const std::string& id, const std::string& file, std::vector<std::string> calls,
                   std::size_t tokens) {
    TestCase t;
    t.id = id;
    t.file = file;
    t.name = id.substr(id.rfind(':') + 1);
    t.sut_calls = std::move(calls);
    t.token_estimate = tokens;
    t.assertion_count = 1;
    return t;
}

TEST(FilterCandidates, FunnelCountsOnSmallFixture) {
    if (!fc::testing::pytest_available()) {
        GTEST_SKIP() << "pytest not installed";
    }
    const auto project = fc::testing::scan_fixture(fc::testing::fixture_dir("funnel_py"));
    fc::runner::TestRunner runner(project.config);
    const auto r = filter_candidate_tests(project, runner);
    EXPECT_EQ(r.funnel, (Funnel{10, 10, 8, 7}));
    EXPECT_EQ(r.candidates.size(), 7U);
    EXPECT_EQ(r.timed_out.size(), 1U);
    EXPECT_TRUE(std::is_sorted(r.candidates.begin(), r.candidates.end(),
                               [](const TestCase& a, const TestCase& b) { return a.id < b.id; }));
    // Monotone funnel.
    EXPECT_GE(r.funnel.all, r.funnel.with_sut_calls);
    EXPECT_GE(r.funnel.with_sut_calls, r.funnel.with_assert);
    EXPECT_GE(r.funnel.with_assert, r.funnel.passing);
}

TEST(FilterCandidates, EmptySuiteGivesZeroFunnel) {
    fc::testing::TempDir dir;
    fc::testing::write_files(dir.path(), {{"src/m.py", "class K:\n    def go(self):\n        pass\n"}});
    const auto project = fc::subject::scan_project(dir.path(), {});
    fc::runner::TestRunner runner(project.config);
    const auto r = filter_candidate_tests(project, runner);
    EXPECT_EQ(r.funnel, (Funnel{0, 0, 0, 0}));
    EXPECT_TRUE(r.candidates.empty());
}

TEST(SelectContext, FiveTenThousandTokenTestsFillThirtyThousandBudget) {
    std::vector<TestCase> pop;
    const auto target = synthetic("tests/t.py::target", "tests/t.py", {"a.T.m()"}, 10);
    pop.push_back(target);
    for (int i = 0; i < 5; ++i) {
        pop.push_back(synthetic("tests/o.py::t" + std::to_string(i), "tests/o.py", {"a.T.m()"}, 10000));
    }
    const auto ctx = select_context_tests(pop, target, 30000, 1);
    EXPECT_EQ(ctx.size(), 3U);
    for (const auto& t : ctx) {
        EXPECT_NE(t.id, target.id);
    }
}

TEST(SelectContext, BudgetBelowSmallestTestSelectsNothing) {
    std::vector<TestCase> pop{synthetic("tests/t.py::target", "tests/t.py", {"a.T.m()"}, 10),
                              synthetic("tests/o.py::x", "tests/o.py", {"a.T.m()"}, 500)};
    EXPECT_TRUE(select_context_tests(pop, pop[0], 499, 3).empty());
}

TEST(SelectContext, OnlyTestsSharingADeclaringTypeAreRelated) {
    std::vector<TestCase> pop{synthetic("tests/t.py::target", "tests/t.py", {"a.T.m()"}, 10),
                              synthetic("tests/o.py::same", "tests/o.py", {"a.T.n(int)"}, 10),
                              synthetic("tests/o.py::other", "tests/o.py", {"a.U.n(int)"}, 10)};
    const auto ctx = select_context_tests(pop, pop[0], 1000, 0);
    ASSERT_EQ(ctx.size(), 1U);
    EXPECT_EQ(ctx[0].id, "tests/o.py::same");
}

TEST(SelectContext, DeterministicPerSeedAndWithinBudget) {
    std::vector<TestCase> pop;
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        pop.push_back(synthetic("tests/f" + std::to_string(i % 7) + ".py::t" + std::to_string(i),
                                "tests/f" + std::to_string(i % 7) + ".py", {"a.T.m()"}, 50 + rng() % 400));
    }
    const auto& target = pop[5];
    std::set<std::vector<std::string>> distinct;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = select_context_tests(pop, target, 5000, seed);
        const auto b = select_context_tests(pop, target, 5000, seed);
        std::vector<std::string> ia, ib;
        std::size_t used = 0;
        for (const auto& t : a) {
            ia.push_back(t.id);
            used += t.token_estimate;
        }
        for (const auto& t : b) {
            ib.push_back(t.id);
        }
        EXPECT_EQ(ia, ib);
        EXPECT_LE(used, 5000U);
        EXPECT_EQ(std::set<std::string>(ia.begin(), ia.end()).size(), ia.size());
        distinct.insert(ia);
    }
    // With a pool of 299 related tests, different seeds draw different contexts.
    EXPECT_GT(distinct.size(), 10U);
}

TEST(SeededShuffle, IsAPermutationAndRoughlyUniform) {
    std::map<std::size_t, int> first_counts;
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        std::vector<std::size_t> v{0, 1, 2, 3};
        seeded_shuffle(v, seed);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3}));
        ++first_counts[v[0]];
    }
    for (const auto& [k, n] : first_counts) {
        EXPECT_NEAR(n, 1000, 150) << k;
    }
}

TEST(SelectValidation, TargetFirstThenSameFileThenRelatedExtras) {
    std::vector<TestCase> pop{synthetic("tests/t.py::target", "tests/t.py", {"a.T.m()"}, 10),
                              synthetic("tests/t.py::b", "tests/t.py", {"a.U.m()"}, 10),
                              synthetic("tests/t.py::a", "tests/t.py", {"a.U.m()"}, 10)};
    for (int i = 0; i < 30; ++i) {
        pop.push_back(synthetic("tests/o.py::r" + std::to_string(i), "tests/o.py", {"a.T.m()"}, 10));
    }
    const auto v = select_validation_tests(pop, pop[0], 20, 9, {"tests/o.py::r0"});
    ASSERT_EQ(v.size(), 23U);
    EXPECT_EQ(v[0].id, "tests/t.py::target");
    EXPECT_EQ(v[1].id, "tests/t.py::a");
    EXPECT_EQ(v[2].id, "tests/t.py::b");
    std::set<std::string> ids;
    for (const auto& t : v) {
        EXPECT_TRUE(ids.insert(t.id).second) << "duplicate " << t.id;
        EXPECT_NE(t.id, "tests/o.py::r0");
    }
}

TEST(SelectValidation, DisjointFromContextExceptTarget) {
    std::vector<TestCase> pop{synthetic("tests/t.py::target", "tests/t.py", {"a.T.m()"}, 10)};
    for (int i = 0; i < 250; ++i) {
        pop.push_back(synthetic("tests/o" + std::to_string(i % 4) + ".py::r" + std::to_string(i),
                                "tests/o" + std::to_string(i % 4) + ".py", {"a.T.m()"}, 100));
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto split = make_split(pop, pop[0], 3000, 20, seed);
        EXPECT_EQ(split.validation.front(), split.target);
        EXPECT_LE(split.validation.size(), 21U);
        for (const auto& id : split.validation) {
            EXPECT_EQ(std::count(split.context.begin(), split.context.end(), id), 0) << id;
        }
        const auto back = CorpusSplit::from_json(split.to_json());
        EXPECT_EQ(back.context, split.context);
        EXPECT_EQ(back.validation, split.validation);
        EXPECT_EQ(back.seed, split.seed);
    }
}

TEST(MakeSplit, FixtureTargetSplitIsDeterministic) {
    const auto project = fc::testing::scan_fixture(fc::testing::fixture_dir("datanode_py"));
    const auto* target = project.test(fc::testing::kEmptyChildrenTest);
    ASSERT_NE(target, nullptr);
    const auto a = make_split(project.tests, *target, 30000, 20, 42).to_json().dump();
    const auto b = make_split(project.tests, *target, 30000, 20, 42).to_json().dump();
    EXPECT_EQ(a, b);
}

}  // namespace
