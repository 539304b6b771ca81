#include "fc/corpus/selector.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <set>

#include "fc/error.hpp"

namespace fc::corpus {

using nlohmann::json;

json Funnel::to_json() const {
    return json{{"all", all}, {"with_sut_calls", with_sut_calls}, {"with_assert", with_assert}, {"passing", passing}};
}

json CorpusSplit::to_json() const {
    return json{{"target", target},
                {"context", context},
                {"validation", validation},
                {"seed", seed},
                {"context_token_budget", context_token_budget}};
}

CorpusSplit CorpusSplit::from_json(const json& j) {
    CorpusSplit s;
    s.target = j.at("target").get<std::string>();
    s.context = j.at("context").get<std::vector<std::string>>();
    s.validation = j.at("validation").get<std::vector<std::string>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.context_token_budget = j.at("context_token_budget").get<std::size_t>();
    return s;
}

FilterResult filter_candidate_tests(const SubjectProject& project, const runner::TestRunner& runner) {
    FilterResult out;
    out.funnel.all = project.tests.size();
    if (project.tests.empty()) {
        return out;
    }
    runner.check_available();
    const auto timeout = std::chrono::milliseconds(static_cast<long long>(project.config.timeout_seconds * 1000.0));
    for (const auto& t : project.tests) {
        if (t.sut_calls.empty()) {
            continue;
        }
        ++out.funnel.with_sut_calls;
        if (t.assertion_count == 0) {
            continue;
        }
        ++out.funnel.with_assert;
        const auto r = runner.run(runner::RunRequest{project.root, {t.id}, timeout, {}, {}});
        if (r.timed_out) {
            out.timed_out.push_back(t.id);
            continue;
        }
        if (r.infra_error) {
            throw InfraError("test runner failed for " + t.id + " (exit " + std::to_string(r.exit_code) +
                             "):\n" + r.output);
        }
        if (r.exit_code != 0) {
            out.failing.push_back(t.id);
            continue;
        }
        ++out.funnel.passing;
        out.candidates.push_back(t);
    }
    return out;
}

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform over [0, n).
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

bool shares_type(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& t : a) {
        if (std::binary_search(b.begin(), b.end(), t)) {
            return true;
        }
    }
    return false;
}

}  // namespace

void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

std::vector<const TestCase*> related_tests(const std::vector<TestCase>& population, const TestCase& target) {
    const auto types = target.declaring_types();
    std::vector<const TestCase*> pool;
    for (const auto& t : population) {
        if (t.id != target.id && shares_type(t.declaring_types(), types)) {
            pool.push_back(&t);
        }
    }
    std::sort(pool.begin(), pool.end(), [](const TestCase* a, const TestCase* b) { return a->id < b->id; });
    return pool;
}

std::vector<TestCase> select_context_tests(const std::vector<TestCase>& population, const TestCase& target,
                                           std::size_t budget, std::uint64_t seed) {
    const auto pool = related_tests(population, target);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    seeded_shuffle(order, seed);

    std::vector<TestCase> out;
    std::size_t used = 0;
    for (const auto i : order) {
        const auto cost = pool[i]->token_estimate;
        if (used + cost > budget) {
            break;
        }
        used += cost;
        out.push_back(*pool[i]);
    }
    return out;
}

std::vector<TestCase> select_validation_tests(const std::vector<TestCase>& population, const TestCase& target,
                                              std::size_t extra, std::uint64_t seed,
                                              const std::vector<std::string>& exclude) {
    std::set<std::string> taken(exclude.begin(), exclude.end());
    taken.erase(target.id);
    std::vector<TestCase> out{target};
    taken.insert(target.id);

    std::vector<const TestCase*> same_file;
    for (const auto& t : population) {
        if (t.file == target.file && t.id != target.id) {
            same_file.push_back(&t);
        }
    }
    std::sort(same_file.begin(), same_file.end(), [](const TestCase* a, const TestCase* b) { return a->id < b->id; });
    for (const auto* t : same_file) {
        if (taken.insert(t->id).second) {
            out.push_back(*t);
        }
    }

    std::vector<const TestCase*> pool;
    for (const auto* t : related_tests(population, target)) {
        if (taken.count(t->id) == 0) {
            pool.push_back(t);
        }
    }
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    // A distinct stream from the context draw with the same seed.
    seeded_shuffle(order, seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < order.size() && k < extra; ++k) {
        out.push_back(*pool[order[k]]);
    }
    return out;
}

CorpusSplit make_split(const std::vector<TestCase>& population, const TestCase& target, std::size_t budget,
                       std::size_t extra, std::uint64_t seed) {
    CorpusSplit split;
    split.target = target.id;
    split.seed = seed;
    split.context_token_budget = budget;
    for (const auto& t : select_context_tests(population, target, budget, seed)) {
        split.context.push_back(t.id);
    }
    for (const auto& t : select_validation_tests(population, target, extra, seed, split.context)) {
        split.validation.push_back(t.id);
    }
    return split;
}

}  // namespace fc::corpus
