#include <random>

#include <benchmark/benchmark.h>

#include "fc/config.hpp"
#include "fc/corpus/selector.hpp"
#include "fc/pipeline/static_validator.hpp"
#include "fc/python/lexer.hpp"
#include "fc/shadow/shadow_model.hpp"
#include "fc/subject/project.hpp"
#include "fc/util/fs.hpp"

namespace {

const std::filesystem::path kRoot = std::filesystem::path(FC_FIXTURES_DIR) / "datanode_py";

const fc::subject::SubjectProject& datanode() {
    static const auto p = [] {
        const auto config = fc::Config::load(kRoot / "flycatcher.json");
        return fc::subject::scan_project(config.project_root, config.project);
    }();
    return p;
}

void BM_Tokenize(benchmark::State& state) {
    const auto source = fc::util::read_file(kRoot / "src/datanode.py");
    for (auto _ : state) {
        benchmark::DoNotOptimize(fc::python::tokenize(source));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * source.size()));
}
BENCHMARK(BM_Tokenize);

void BM_StaticValidate(benchmark::State& state) {
    fc::pipeline::CheckerArtifact base;
    base.id = "c_bench000";
    base.target = "tests/test_datanode.py::t";
    base.checker_source =
        "def childrenChecker(op, shadowState):\n"
        "    objectState = shadowState.get(op.baseObject, {})\n"
        "    children = objectState.get(\"children\", set())\n"
        "    if op.signature == \"datanode.DataNode.addChild(str)\":\n"
        "        children.add(op.arguments[0])\n"
        "    elif op.signature == \"datanode.DataNode.removeChild(str)\":\n"
        "        children.discard(op.arguments[0])\n"
        "    assertEquals(len(children), len(op.baseObject.getChildren()))\n";
    const auto& project = datanode();
    for (auto _ : state) {
        auto a = base;
        benchmark::DoNotOptimize(fc::pipeline::static_validate(a, project));
    }
}
BENCHMARK(BM_StaticValidate);

void BM_SelectContext(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::vector<fc::subject::TestCase> pop(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].id = "tests/t.py::t" + std::to_string(i);
        pop[i].file = "tests/t.py";
        pop[i].sut_calls = {"a.T.m()"};
        pop[i].token_estimate = 10 + rng() % 2000;
    }
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fc::corpus::select_context_tests(pop, pop[0], 30000, seed++));
    }
}
BENCHMARK(BM_SelectContext)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ShadowApply(benchmark::State& state) {
    const std::string add = "datanode.DataNode.addChild(str)";
    const std::string remove = "datanode.DataNode.removeChild(str)";
    const fc::shadow::ChildrenModel model(add, remove);
    std::mt19937_64 rng(9);
    std::vector<fc::shadow::Operation> ops(4096);
    for (auto& op : ops) {
        op.base = 1 + rng() % 64;
        op.signature = rng() % 2 == 0 ? add : remove;
        op.arguments = {std::string(1, static_cast<char>('a' + rng() % 8))};
        op.return_value = true;
    }
    for (auto _ : state) {
        fc::shadow::ShadowState shadow;
        for (const auto& op : ops) {
            model.apply(shadow, op);
        }
        benchmark::DoNotOptimize(shadow.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ops.size()));
}
BENCHMARK(BM_ShadowApply);

}  // namespace

BENCHMARK_MAIN();
