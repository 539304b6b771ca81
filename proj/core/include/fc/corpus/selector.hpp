#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/runner/test_runner.hpp"
#include "fc/subject/project.hpp"

namespace fc::corpus {

using subject::SubjectProject;
using subject::TestCase;

struct Funnel {
    std::size_t all = 0;
    std::size_t with_sut_calls = 0;
    std::size_t with_assert = 0;
    std::size_t passing = 0;

    nlohmann::json to_json() const;
    friend bool operator==(const Funnel&, const Funnel&) = default;
};

struct FilterResult {
    std::vector<TestCase> candidates;  // survivors, sorted by id
    Funnel funnel;
    std::vector<std::string> timed_out;
    std::vector<std::string> failing;
};

// Keeps tests with at least one SUT call, at least one assertion, and a
// passing solo run within the project's timeout.
FilterResult filter_candidate_tests(const SubjectProject& project, const runner::TestRunner& runner);

struct CorpusSplit {
    std::string target;
    std::vector<std::string> context;
    std::vector<std::string> validation;
    std::uint64_t seed = 0;
    std::size_t context_token_budget = 0;

    nlohmann::json to_json() const;
    static CorpusSplit from_json(const nlohmann::json& j);
};

// Deterministic uniform shuffle (Fisher-Yates over mt19937_64 with rejection
// sampling), identical on every standard library.
void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed);

// Other tests in `population` sharing a declaring type with `target`, sorted by id.
std::vector<const TestCase*> related_tests(const std::vector<TestCase>& population, const TestCase& target);

std::vector<TestCase> select_context_tests(const std::vector<TestCase>& population, const TestCase& target,
                                           std::size_t budget, std::uint64_t seed);

// Target first, then same-file tests, then up to `extra` seeded related tests;
// anything in `exclude` (the context) is skipped.
std::vector<TestCase> select_validation_tests(const std::vector<TestCase>& population, const TestCase& target,
                                              std::size_t extra, std::uint64_t seed,
                                              const std::vector<std::string>& exclude = {});

CorpusSplit make_split(const std::vector<TestCase>& population, const TestCase& target, std::size_t budget,
                       std::size_t extra, std::uint64_t seed);

}  // namespace fc::corpus
