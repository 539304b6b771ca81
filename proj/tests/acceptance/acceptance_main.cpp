// Acceptance runner: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion in the selected group fails.
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fc/corpus/selector.hpp"
#include "fc/instrument/diff.hpp"
#include "fc/instrument/instrumenter.hpp"
#include "fc/instrument/shim_templates.hpp"
#include "fc/llm/provider.hpp"
#include "fc/mutation/evaluate.hpp"
#include "fc/mutation/mutants.hpp"
#include "fc/pipeline/generate.hpp"
#include "fc/pipeline/refine.hpp"
#include "fc/pipeline/static_validator.hpp"
#include "fc/report/overhead.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/shadow/shadow_model.hpp"
#include "fc/util/hash.hpp"
#include "fc/util/text.hpp"
#include "fc/validation/dynamic_validator.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using fc::pipeline::CheckerArtifact;
using fc::pipeline::CheckerStatus;
using fc::pipeline::FeedbackKind;
using fc::testing::TempDir;
using json = nlohmann::json;

struct Verdict {
    bool pass = false;
    std::string detail;
};

// Collects failed expectations so a criterion reports every mismatch at once.
class Expect {
public:
    void that(bool ok, const std::string& what) {
        if (!ok) {
            failures_.push_back(what);
        }
    }
    Verdict verdict(const std::string& summary) const {
        if (failures_.empty()) {
            return {true, summary};
        }
        std::string d;
        for (const auto& f : failures_) {
            d += (d.empty() ? "" : "; ") + f;
        }
        return {false, d};
    }

private:
    std::vector<std::string> failures_;
};

const std::string kDup = "tests/test_datanode.py::test_add_child_returns_false_for_duplicate";
const std::string kVer = "tests/test_datanode.py::test_set_data_bumps_version";

const fc::subject::SubjectProject& datanode() {
    static const auto p = fc::testing::scan_fixture(fc::testing::fixture_dir("datanode_py"));
    return p;
}

const fc::runner::TestRunner& runner() {
    static const fc::runner::TestRunner r(datanode().config);
    return r;
}

json script() {
    return json::parse(fc::util::read_file(fc::testing::fixture_dir("datanode_py") / "scripts/gen.json"));
}

std::string scripted_checker(const std::string& test_id) {
    return *fc::pipeline::extract_code_block(script().at(test_id).back().get<std::string>()).code;
}

CheckerArtifact statically_valid(const std::string& id, const std::string& target, std::string source) {
    CheckerArtifact a;
    a.id = id;
    a.target = target;
    a.imports = {"from datanode import DataNode"};
    a.state_changing = {"datanode.DataNode.DataNode(bytes,int,StatPersisted)"};
    a.checker_source = std::move(source);
    if (const auto fb = fc::pipeline::static_validate(a, datanode())) {
        throw std::runtime_error("checker " + id + " is not statically valid: " + fb->message);
    }
    return a;
}

CheckerArtifact validated(const std::string& id, const std::string& target, std::string source) {
    auto a = statically_valid(id, target, std::move(source));
    a.advance(CheckerStatus::Validated);
    return a;
}

std::vector<std::string> all_test_ids() {
    std::vector<std::string> ids;
    for (const auto& t : datanode().tests) {
        ids.push_back(t.id);
    }
    return ids;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- primary

Verdict determinism() {
    TempDir dir("fc_acc");
    const auto root = fc::testing::copy_fixture("datanode_py", dir.path());
    std::string args = " gen --seed 11";
    for (const auto& t : {fc::testing::kEmptyChildrenTest, kDup, kVer}) {
        args += " --test " + fc::util::shell_quote(t);
    }
    Expect e;
    double slowest = 0.0;
    for (const char* w : {"a", "b"}) {
        fc::util::ProcessOptions opts;
        opts.cwd = root;
        opts.timeout = std::chrono::seconds(300);
        const auto start = std::chrono::steady_clock::now();
        const auto r = fc::util::run_shell(
            fc::util::shell_quote(FC_CLI_PATH) + " --work " + fc::util::shell_quote((dir / w).string()) + args, opts);
        const auto elapsed = seconds_since(start);
        slowest = std::max(slowest, elapsed);
        e.that(r.exit_code == 0, std::string("gen run ") + w + " exited " + std::to_string(r.exit_code));
        e.that(elapsed < 60.0, std::string("gen run ") + w + " took " + std::to_string(elapsed) + "s");
    }
    if (fs::exists(dir / "a/ledger.json") && fs::exists(dir / "b/ledger.json")) {
        e.that(fc::util::read_file(dir / "a/ledger.json") == fc::util::read_file(dir / "b/ledger.json"),
               "ledgers differ");
        e.that(fc::util::tree_hash(dir / "a/checkers") == fc::util::tree_hash(dir / "b/checkers"),
               "checker trees differ");
        const auto ledger = json::parse(fc::util::read_file(dir / "a/ledger.json"));
        e.that(ledger.at("rows").size() == 3, "expected 3 ledger rows");
    } else {
        e.that(false, "ledger missing");
    }
    std::ostringstream s;
    s << "3 scripted targets, identical checkers and ledger, slowest run " << slowest << "s";
    return e.verdict(s.str());
}

Verdict static_table() {
    const auto golden =
        json::parse(fc::util::read_file(fc::testing::golden_dir() / "feedback_table.json"));
    using fc::util::replace_all;
    struct Case {
        std::string source;
        FeedbackKind kind;
        std::string text;
    };
    const std::vector<Case> cases{
        {"def c(op, shadowState)\n    assertTrue(True)\n", FeedbackKind::SyntaxError,
         replace_all(golden.at("SyntaxError").get<std::string>(), "[language]", "Python")},
        {"def c(op, shadowState):\n    # assertTrue(op.baseObject.getChildren())\n    x = 1\n",
         FeedbackKind::NoAssertion, golden.at("NoAssertion").get<std::string>()},
        {"def c(op, shadowState):\n    if op.signature == \"java.util.List.add(object)\":\n        pass\n"
         "    assertTrue(True)\n",
         FeedbackKind::NonSutMethod,
         replace_all(golden.at("NonSutMethod").get<std::string>(), "[methods signatures]",
                     "java.util.List.add(object)")},
        {"def c(op, shadowState):\n    if op.signature == \"addChild\":\n        pass\n    assertTrue(True)\n",
         FeedbackKind::UnqualifiedSignature,
         replace_all(golden.at("UnqualifiedSignature").get<std::string>(), "[unqualified signature]", "addChild")},
    };
    Expect e;
    for (const auto& c : cases) {
        CheckerArtifact a;
        a.id = "c_00000000";
        a.target = fc::testing::kEmptyChildrenTest;
        a.checker_source = c.source;
        const auto fb = fc::pipeline::static_validate(a, datanode());
        const auto name = std::string(fc::pipeline::feedback_kind_name(c.kind));
        if (!fb) {
            e.that(false, name + ": accepted");
            continue;
        }
        e.that(fb->kind == c.kind, name + ": got " + std::string(fc::pipeline::feedback_kind_name(fb->kind)));
        e.that(fb->message == c.text, name + ": text differs from the golden table");
        e.that(a.status == CheckerStatus::Draft, name + ": status advanced");
    }
    return e.verdict("4 malformed checkers map to their kinds and golden texts");
}

// Identification, generation and refinement driven by a recorded script.
CheckerArtifact refine_from(const fs::path& script_file, int max_attempts, int cutoff) {
    TempDir out("fc_acc");
    const auto& target = *datanode().test(fc::testing::kEmptyChildrenTest);
    auto provider = fc::llm::ScriptedProvider::from_file(script_file, target.id);
    fc::pipeline::TargetOptions options;
    options.refine.max_attempts = max_attempts;
    options.refine.same_kind_cutoff = cutoff;
    return fc::pipeline::run_target(datanode(), datanode().tests, target, *provider, options, {}, out.path())
        .artifact;
}

Verdict refinement() {
    const auto scripts = fc::testing::fixture_dir("datanode_py") / "scripts";
    Expect e;
    const auto broken = refine_from(scripts / "broken.json", 125, 5);
    e.that(broken.status == CheckerStatus::Rejected, "broken: not rejected");
    e.that(broken.attempts == 5, "broken: attempts " + std::to_string(broken.attempts));
    e.that(broken.failure_history == std::vector<FeedbackKind>(5, FeedbackKind::SyntaxError),
           "broken: history is not 5 syntax errors");
    const auto alternating = refine_from(scripts / "alternating.json", 7, 5);
    e.that(alternating.status == CheckerStatus::Rejected, "alternating: not rejected");
    e.that(alternating.attempts == 7, "alternating: attempts " + std::to_string(alternating.attempts));
    return e.verdict("same-kind run rejects at 5, alternating kinds reject at the cap of 7");
}

Verdict context_budget() {
    Expect e;
    std::mt19937_64 rng(77);
    constexpr int kPools = 250;
    constexpr std::size_t kBudget = 30000;
    const std::vector<std::string> types{"a.T", "a.U", "b.V"};
    for (int pool = 0; pool < kPools; ++pool) {
        std::vector<fc::subject::TestCase> pop;
        const auto n = 1 + rng() % 200;
        for (std::uint64_t i = 0; i < n; ++i) {
            fc::subject::TestCase t;
            t.file = "tests/f" + std::to_string(rng() % 6) + ".py";
            t.id = t.file + "::t" + std::to_string(i);
            t.name = "t" + std::to_string(i);
            t.sut_calls = {types[rng() % types.size()] + ".m()"};
            t.token_estimate = 1 + rng() % 12000;
            t.assertion_count = 1;
            pop.push_back(std::move(t));
        }
        const auto& target = pop[rng() % pop.size()];
        const auto seed = rng();
        const auto a = fc::corpus::select_context_tests(pop, target, kBudget, seed);
        const auto b = fc::corpus::select_context_tests(pop, target, kBudget, seed);
        std::size_t used = 0;
        std::vector<std::string> ia, ib;
        for (const auto& t : a) {
            used += t.token_estimate;
            ia.push_back(t.id);
        }
        for (const auto& t : b) {
            ib.push_back(t.id);
        }
        e.that(used <= kBudget, "pool " + std::to_string(pool) + " used " + std::to_string(used));
        e.that(ia == ib, "pool " + std::to_string(pool) + " not deterministic");
        e.that(std::find(ia.begin(), ia.end(), target.id) == ia.end(),
               "pool " + std::to_string(pool) + " selected the target");
    }
    return e.verdict(std::to_string(kPools) + " random pools within 30000 tokens, deterministic per seed");
}

std::set<std::string> signatures_of(const fc::subject::SubjectProject& p) {
    std::set<std::string> out;
    for (const auto& [sig, m] : p.method_index) {
        out.insert(sig);
    }
    return out;
}

Verdict instrumentation_identity() {
    Expect e;
    TempDir out("fc_acc");
    using namespace fc::instrument;
    instrument(datanode(), InstrumentationPlan::build({}, datanode(), out / "empty"));
    const auto empty_diff = uninstrument_diff(datanode().root, out / "empty");
    e.that(empty_diff.identical_modulo_wrappers(), "empty plan: tree differs");
    e.that(empty_diff.wrapped.empty(), "empty plan: wrapped methods reported");
    for (const auto& f : datanode().source_files) {
        e.that(fc::util::read_file(out / "empty" / f) == fc::util::read_file(datanode().root / f),
               "empty plan: " + f + " not verbatim");
    }

    auto checker = validated("c_acc00002", fc::testing::kEmptyChildrenTest, scripted_checker(fc::testing::kEmptyChildrenTest));
    instrument(datanode(), InstrumentationPlan::build({checker}, datanode(), out / "full"));
    const auto diff = uninstrument_diff(datanode().root, out / "full");
    e.that(diff.identical_modulo_wrappers(), "targeted plan: edits outside wrappers");
    e.that(!diff.wrapped.empty(), "targeted plan: nothing wrapped");
    auto config = datanode().config;
    config.exclude_dirs.push_back("fc_runtime");
    const auto rescanned = fc::subject::scan_project(out / "full", config);
    e.that(signatures_of(rescanned) == signatures_of(datanode()), "re-scanned signatures changed");
    return e.verdict("empty plan is a verbatim copy; targeted tree differs only in wrappers with signatures intact");
}

// Brute-force oracle: the last add/remove event per name decides membership.
std::set<std::string> replay(const std::vector<fc::shadow::Operation>& history, fc::shadow::ObjectId object,
                             const std::string& add, const std::string& remove) {
    std::map<std::string, bool> last;
    for (const auto& op : history) {
        if (op.base == object && !op.arguments.empty() && (op.signature == add || op.signature == remove)) {
            last[op.arguments[0]] = op.signature == add;
        }
    }
    std::set<std::string> out;
    for (const auto& [name, present] : last) {
        if (present) {
            out.insert(name);
        }
    }
    return out;
}

Verdict shadow_model() {
    const std::string add = "datanode.DataNode.addChild(str)";
    const std::string remove = "datanode.DataNode.removeChild(str)";
    const std::string get = "datanode.DataNode.getChildren()";
    const fc::shadow::ChildrenModel model(add, remove);
    std::mt19937_64 rng(4242);
    const std::vector<std::string> names{"a", "b", "c", "d"};
    Expect e;
    std::size_t ops = 0;
    for (int seq = 0; seq < 1000; ++seq) {
        fc::shadow::ShadowState state;
        std::vector<fc::shadow::Operation> history;
        std::map<fc::shadow::ObjectId, std::set<std::string>> real;
        const auto length = 1 + rng() % 64;
        for (std::uint64_t step = 0; step < length; ++step) {
            fc::shadow::Operation op;
            op.base = 1 + rng() % 3;
            const auto kind = rng() % 3;
            op.signature = kind == 0 ? add : kind == 1 ? remove : get;
            if (kind < 2) {
                op.arguments = {names[rng() % names.size()]};
                auto& r = real[op.base];
                op.return_value = kind == 0 ? r.insert(op.arguments[0]).second : r.erase(op.arguments[0]) == 1;
            }
            history.push_back(op);
            model.apply(state, op);
            ++ops;
            if (fc::shadow::ChildrenModel::children(state, op.base) != replay(history, op.base, add, remove) ||
                !fc::shadow::ChildrenModel::consistent(state, op.base, real[op.base])) {
                e.that(false, "sequence " + std::to_string(seq) + " diverged at step " + std::to_string(step));
                break;
            }
        }
    }
    return e.verdict("1000 sequences (" + std::to_string(ops) + " operations, length <= 64) agree with the oracle");
}

Verdict mutation() {
    Expect e;
    const std::set<std::string> scope{"datanode.DataNode", "datatree.DataTree", "stat_info.StatPersisted"};
    const auto all = fc::mutation::generate_mutants(datanode(), scope);
    std::set<fc::mutation::Operator> kinds;
    for (const auto& m : all) {
        kinds.insert(m.op);
    }
    e.that(all.size() >= 50, "only " + std::to_string(all.size()) + " mutants");
    e.that(kinds.size() >= 4, "only " + std::to_string(kinds.size()) + " operator kinds");

    TempDir work("fc_acc");
    const auto checker = validated("c_acc00003", fc::testing::kEmptyChildrenTest, scripted_checker(fc::testing::kEmptyChildrenTest));
    const auto before = fc::util::tree_hash(datanode().root);
    const auto r = fc::mutation::evaluate_mutants(datanode(), all, {fc::testing::kEmptyChildrenTest}, {checker}, runner(),
                                                  {work / "eval", "raise", true});
    const auto& c = r.counts;
    e.that(c.all == c.not_covered + c.killed_by_target_tests + c.survived + c.killed_by_checkers,
           "partition does not sum");
    e.that(c.all + c.infra_skipped == all.size(), "mutants lost");
    e.that(r.hash_stable, "working copy hash changed");
    e.that(fc::util::tree_hash(datanode().root) == before, "project tree touched");
    std::ostringstream s;
    s << all.size() << " mutants, " << kinds.size() << " kinds; not_covered " << c.not_covered << ", killed_by_tests "
      << c.killed_by_target_tests << ", survived " << c.survived << ", killed_by_checker " << c.killed_by_checkers
      << ", skipped " << c.infra_skipped << "; hash stable";
    return e.verdict(s.str());
}

// -------------------------------------------------------------- secondary

Verdict motivating_mutant() {
    Expect e;
    auto ms = fc::mutation::generate_mutants(datanode(), {"datanode.DataNode"});
    std::vector<fc::mutation::MutantRecord> fig;
    for (const auto& m : ms) {
        if (m.method == "datanode.DataNode.getChildren()" && m.original_snippet == "set(self.children)" &&
            m.mutated_snippet == "set()") {
            fig.push_back(m);
        }
    }
    if (fig.size() != 1) {
        return {false, "emptied getChildren mutant not generated"};
    }
    TempDir work("fc_acc");
    const auto checker = validated("c_acc00004", fc::testing::kEmptyChildrenTest, scripted_checker(fc::testing::kEmptyChildrenTest));
    const auto plain = fc::mutation::evaluate_mutants(datanode(), fig, {fc::testing::kEmptyChildrenTest}, {}, runner(),
                                                      {work / "plain", "raise", false});
    const auto checked = fc::mutation::evaluate_mutants(datanode(), fig, {fc::testing::kEmptyChildrenTest}, {checker},
                                                        runner(), {work / "checked", "raise", false});
    e.that(plain.mutants[0].status == fc::mutation::MutantStatus::Survived, "survives without a checker: no");
    e.that(checked.mutants[0].status == fc::mutation::MutantStatus::KilledByChecker, "killed by checker: no");

    // Where it fires: the failing line in the target test is the first addChild.
    TempDir copy("fc_acc");
    const auto root = fc::testing::copy_fixture("datanode_py", copy.path());
    const auto original = fc::mutation::apply_mutant(root, fig[0]);
    (void)original;
    const auto mutated = fc::testing::scan_fixture(root);
    fc::instrument::instrument(mutated,
                               fc::instrument::InstrumentationPlan::build({checker}, mutated, copy / "tree"));
    const auto run = runner().run({copy / "tree", {fc::testing::kEmptyChildrenTest}, std::chrono::seconds(300), {}, {}});
    e.that(run.output.find(fc::instrument::kViolationTag) != std::string::npos, "no tagged violation");
    e.that(run.output.find(">       dataNode.addChild(child)") != std::string::npos,
           "violation not raised at the first addChild");
    return e.verdict("emptied getChildren survives the plain test and is killed by the checker at the first addChild");
}

Verdict recursion_guard() {
    Expect e;
    TempDir work("fc_acc");
    // Re-enters the subject only for the child named "child", which only the first test adds.
    auto a = statically_valid("c_acc00005", fc::testing::kEmptyChildrenTest,
                              "def reentrantChecker(op, shadowState):\n"
                              "    if op.signature == \"datanode.DataNode.addChild(str)\":\n"
                              "        if op.arguments[0] == \"child\":\n"
                              "            op.baseObject.removeChild(\"ghost\")\n"
                              "    elif op.signature == \"datanode.DataNode.removeChild(str)\":\n"
                              "        pass\n"
                              "    assertTrue(True)\n");
    fc::corpus::CorpusSplit split;
    split.target = fc::testing::kEmptyChildrenTest;
    split.validation = {fc::testing::kEmptyChildrenTest, kDup};
    const auto r = fc::validation::dynamic_validate(a, split, datanode(), runner(), 300, work / "dv");
    e.that(r.feedback && r.feedback->kind == FeedbackKind::RecursiveCall, "no RecursiveCall feedback");
    std::set<std::string> failed;
    for (const auto& [id, log] : r.outcome.failures) {
        failed.insert(id);
    }
    e.that(failed.count(fc::testing::kEmptyChildrenTest) == 1, "target test did not fail");
    e.that(failed.count(kDup) == 0, "second test failed, so the guard flag leaked");
    return e.verdict("re-entry trips the guard on the target and the flag is cleared for the next test");
}

Verdict cross_validation() {
    Expect e;
    TempDir work("fc_acc");
    auto over = statically_valid("c_acc00007", kDup, scripted_checker(kDup));
    fc::corpus::CorpusSplit own;
    own.target = kDup;
    own.validation = {kDup};
    const auto solo = fc::validation::dynamic_validate(over, own, datanode(), runner(), 300, work / "own");
    e.that(!solo.feedback, "over-fitted checker fails its own test");

    std::vector<CheckerArtifact> pair{validated("c_acc00006", fc::testing::kEmptyChildrenTest,
                                                scripted_checker(fc::testing::kEmptyChildrenTest)),
                                      validated("c_acc00007", kDup, scripted_checker(kDup))};
    const auto report =
        fc::validation::cross_validate(pair, datanode(), runner(), all_test_ids(), 300, work / "cv");
    e.that(report.cross_validated.at("c_acc00006"), "correct checker not cross-validated");
    e.that(!report.cross_validated.at("c_acc00007"), "over-fitted checker cross-validated");
    e.that(pair[0].status == CheckerStatus::CrossValidated, "correct checker status");

    // A no-op checker on the same methods leaves every test outcome unchanged.
    auto noop = fc::pipeline::noop_checker(pair[0].instrumented_signatures());
    noop.id = "c_acc0noop";
    noop.target = fc::testing::kEmptyChildrenTest;
    fc::instrument::instrument(datanode(),
                               fc::instrument::InstrumentationPlan::build({noop}, datanode(), work / "noop"));
    const auto base = runner().run({datanode().root, all_test_ids(), std::chrono::seconds(300), {}, {}});
    const auto wrapped = runner().run({work / "noop", all_test_ids(), std::chrono::seconds(300), {}, {}});
    e.that(base.exit_code == wrapped.exit_code && base.passed_count == wrapped.passed_count &&
               base.failed == wrapped.failed,
           "no-op instrumentation changed test outcomes");
    return e.verdict("over-fitted checker passes alone but fails the suite; no-op instrumentation is transparent");
}

Verdict concurrency() {
    TempDir dir("fc_acc");
    fc::testing::write_files(dir.path(),
                             {{"src/ctr.py", "class Ctr:\n"
                                             "    def __init__(self):\n"
                                             "        self.n = 0\n"
                                             "\n"
                                             "    def bump(self) -> int:\n"
                                             "        self.n += 1\n"
                                             "        return self.n\n"},
                              {"drive.py", "import sys, threading\n"
                                           "from ctr import Ctr\n"
                                           "import fc_runtime\n"
                                           "\n"
                                           "objects = [Ctr() for _ in range(8)]\n"
                                           "\n"
                                           "def work(c):\n"
                                           "    for _ in range(10000):\n"
                                           "        c.bump()\n"
                                           "\n"
                                           "threads = [threading.Thread(target=work, args=(c,)) for c in objects]\n"
                                           "for t in threads:\n"
                                           "    t.start()\n"
                                           "for t in threads:\n"
                                           "    t.join()\n"
                                           "counts = [fc_runtime.ShadowState.state.get(c, {}).get(\"n\") for c in objects]\n"
                                           "print(\"COUNTS\", sorted(set(counts)), \"ERRORS\", len(fc_runtime.violations))\n"}});
    const auto project = fc::subject::scan_project(dir.path(), {});
    CheckerArtifact a;
    a.id = "c_acc00008";
    a.target = "drive";
    a.state_changing = {"ctr.Ctr.bump()"};
    a.checker_source =
        "def counterChecker(op, shadowState):\n"
        "    state = shadowState.get(op.baseObject, {})\n"
        "    state[\"n\"] = state.get(\"n\", 0) + 1\n"
        "    shadowState[op.baseObject] = state\n"
        "    assertEquals(state[\"n\"], op.returnValue)\n";
    if (const auto fb = fc::pipeline::static_validate(a, project)) {
        return {false, fb->message};
    }
    TempDir out("fc_acc");
    fc::instrument::instrument(project, fc::instrument::InstrumentationPlan::build({a}, project, out / "tree", "log"));
    fc::util::ProcessOptions opts;
    opts.cwd = out / "tree";
    opts.timeout = std::chrono::seconds(300);
    opts.env = {{"PYTHONPATH", (out / "tree/src").string() + ":" + (out / "tree").string()},
                {"PYTHONDONTWRITEBYTECODE", "1"}};
    const auto r = fc::util::run_shell("python3 drive.py", opts);
    Expect e;
    e.that(r.exit_code == 0, "driver exited " + std::to_string(r.exit_code));
    e.that(r.output.find("COUNTS [10000] ERRORS 0") != std::string::npos, "unexpected output: " + r.output);
    return e.verdict("8 threads x 10000 calls: every per-object count is 10000, 0 errors");
}

Verdict overhead() {
    TempDir work("fc_acc");
    const auto config = fc::testing::fixture_config(fc::testing::fixture_dir("datanode_py"));
    const auto checker = validated("c_acc00009", fc::testing::kEmptyChildrenTest, scripted_checker(fc::testing::kEmptyChildrenTest));
    auto noop = fc::pipeline::noop_checker(checker.instrumented_signatures());
    noop.id = "c_noop_acc00009";
    noop.target = checker.target;
    const auto record = fc::report::measure_overhead(datanode(), {noop}, runner(), 5, config.overhead_noise_bound,
                                                     work / "overhead");
    std::ostringstream s;
    s << "no-op relative overhead " << record.relative << " (noise bound " << record.noise_bound << ")";
    return {record.within_noise(), s.str()};
}

struct Criterion {
    const char* name;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const bool secondary = argc > 1 && std::strcmp(argv[1], "--secondary") == 0;
    if (!fc::testing::pytest_available()) {
        std::cout << "FAIL prerequisites: python3 with pytest is not available\n";
        return 1;
    }
    const std::vector<Criterion> primary{
        {"determinism", determinism},
        {"static-feedback-table", static_table},
        {"refinement-policy", refinement},
        {"context-budget", context_budget},
        {"instrumentation-identity", instrumentation_identity},
        {"shadow-state-model", shadow_model},
        {"mutation-partition", mutation},
    };
    const std::vector<Criterion> extra{
        {"motivating-mutant", motivating_mutant},
        {"recursion-guard", recursion_guard},
        {"cross-validation", cross_validation},
        {"concurrency", concurrency},
        {"noop-overhead", overhead},
    };
    int failed = 0;
    for (const auto& c : secondary ? extra : primary) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            v = c.run();
        } catch (const std::exception& ex) {
            v = {false, std::string("exception: ") + ex.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << " [" << seconds_since(start)
                  << "s]\n"
                  << std::flush;
    }
    return failed == 0 ? 0 : 1;
}
