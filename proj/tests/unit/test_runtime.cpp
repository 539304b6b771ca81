#include <set>

#include <gtest/gtest.h>

#include "fc/instrument/instrumenter.hpp"
#include "fc/instrument/shim_templates.hpp"
#include "fc/pipeline/static_validator.hpp"
#include "fc/runner/test_runner.hpp"
#include "fc/util/text.hpp"
#include "support.hpp"

namespace {

using namespace fc::instrument;
using fc::pipeline::CheckerArtifact;
using fc::testing::TempDir;

const std::string kAccountSrc =
    "class Acct:\n"
    "    def __init__(self, balance: int = 0):\n"
    "        self.balance = balance\n"
    "\n"
    "    def deposit(self, amount: int) -> int:\n"
    "        self.balance += amount\n"
    "        return self.balance\n"
    "\n"
    "    def withdraw(self, amount: int) -> int:\n"
    "        if amount > self.balance:\n"
    "            raise ValueError(\"insufficient funds\")\n"
    "        self.balance -= amount\n"
    "        return self.balance\n"
    "\n"
    "    def poke(self):\n"
    "        return None\n";

const std::string kConftest =
    "import os\nimport sys\n\nsys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), \"src\"))\n";

// Probe: appends every observed operation to FC_PROBE_OUT.
CheckerArtifact probe_checker(const fc::subject::SubjectProject& project, std::vector<std::string> sigs) {
    CheckerArtifact a;
    a.id = "c_probe001";
    a.target = "tests/test_acct.py::test_x";
    a.imports = {"import os"};
    a.state_changing = std::move(sigs);
    a.checker_source =
        "def probeChecker(op, shadowState):\n"
        "    # Records the operation; the base type name stands in for the object\n"
        "    with open(os.environ[\"FC_PROBE_OUT\"], \"a\") as sink:\n"
        "        sink.write(\"%s|%r|%s|%r\\n\" % (op.signature, op.returnValue, type(op.baseObject).__name__, op.arguments))\n"
        "    assertTrue(True)\n";
    EXPECT_FALSE(fc::pipeline::static_validate(a, project).has_value());
    return a;
}

CheckerArtifact reentrant_checker(const fc::subject::SubjectProject& project) {
    CheckerArtifact a;
    a.id = "c_reenter1";
    a.target = "tests/test_acct.py::test_x";
    a.state_changing = {"acct.Acct.poke()", "acct.Acct.deposit(int)"};
    a.checker_source =
        "def reentrantChecker(op, shadowState):\n"
        "    if op.signature == \"acct.Acct.poke()\":\n"
        "        op.baseObject.deposit(1)\n"
        "    assertTrue(True)\n";
    EXPECT_FALSE(fc::pipeline::static_validate(a, project).has_value());
    return a;
}

fc::runner::TestRunResult run_tests(const fc::subject::SubjectProject& project, const fc::fs::path& tree,
                                    std::map<std::string, std::string> env = {}) {
    fc::runner::TestRunner runner(project.config);
    return runner.run({tree, {}, std::chrono::seconds(300), std::move(env), {}});
}

TEST(Runtime, NoopCheckerPreservesSuiteOutcome) {
    if (!fc::testing::pytest_available()) {
        GTEST_SKIP() << "pytest not installed";
    }
    const auto project = fc::testing::scan_fixture(fc::testing::fixture_dir("datanode_py"));
    std::vector<std::string> sigs;
    for (const auto& [sig, m] : project.method_index) {
        if (m.body.find("yield") == std::string::npos) {
            sigs.push_back(sig);
        }
    }
    ASSERT_GT(sigs.size(), 10U);
    TempDir out;
    auto noop = fc::pipeline::noop_checker(sigs);
    instrument(project, InstrumentationPlan::build({noop}, project, out / "tree"));

    const auto plain = run_tests(project, project.root);
    const auto checked = run_tests(project, out / "tree");
    EXPECT_EQ(plain.exit_code, checked.exit_code) << checked.output;
    EXPECT_EQ(plain.passed_count, checked.passed_count);
    EXPECT_EQ(plain.failed, checked.failed);
}

class AccountProject : public ::testing::Test {
protected:
    void SetUp() override {
        if (!fc::testing::pytest_available()) {
            GTEST_SKIP() << "pytest not installed";
        }
        fc::testing::write_files(dir.path(), {{"src/acct.py", kAccountSrc},
                                               {"conftest.py", kConftest},
                                               {"tests/test_acct.py", tests_source()}});
        project = fc::subject::scan_project(dir.path(), {});
    }
    virtual std::string tests_source() const = 0;

    TempDir dir;
    fc::subject::SubjectProject project;
};

class ExceptionTransparency : public AccountProject {
    std::string tests_source() const override {
        return "import pytest\n"
               "from acct import Acct\n"
               "\n"
               "def test_flow():\n"
               "    a = Acct(5)\n"
               "    assert a.deposit(2) == 7\n"
               "    with pytest.raises(ValueError, match=\"insufficient funds\"):\n"
               "        a.withdraw(100)\n"
               "    assert a.balance == 7\n";
    }
};

TEST_F(ExceptionTransparency, ExceptionsPropagateAndDispatchStillRuns) {
    TempDir out;
    const auto checker =
        probe_checker(project, {"acct.Acct.Acct(int)", "acct.Acct.deposit(int)", "acct.Acct.withdraw(int)"});
    instrument(project, InstrumentationPlan::build({checker}, project, out / "tree"));
    const auto probe = out / "probe.txt";
    const auto r = run_tests(project, out / "tree", {{"FC_PROBE_OUT", probe.string()}});
    EXPECT_EQ(r.exit_code, 0) << r.output;
    const auto lines = fc::util::split_lines(fc::util::read_file(probe));
    ASSERT_EQ(lines.size(), 3U);
    // Constructors carry no return value but the new object as base.
    EXPECT_EQ(lines[0], "acct.Acct.Acct(int)|ABSENT|Acct|[5]");
    EXPECT_EQ(lines[1], "acct.Acct.deposit(int)|7|Acct|[2]");
    // A raising method still dispatches, with no return value.
    EXPECT_EQ(lines[2], "acct.Acct.withdraw(int)|ABSENT|Acct|[100]");
}

class RecursionGuard : public AccountProject {
    std::string tests_source() const override {
        return "from acct import Acct\n"
               "\n"
               "def test_a_reentrant():\n"
               "    a = Acct()\n"
               "    a.poke()\n"
               "\n"
               "def test_b_after():\n"
               "    a = Acct()\n"
               "    assert a.deposit(3) == 3\n";
    }
};

TEST_F(RecursionGuard, ReentryFailsAndFlagIsClearedAfterwards) {
    TempDir out;
    instrument(project, InstrumentationPlan::build({reentrant_checker(project)}, project, out / "tree"));
    const auto r = run_tests(project, out / "tree");
    EXPECT_EQ(r.exit_code, 1) << r.output;
    EXPECT_NE(r.output.find(std::string(kGuardMessage)), std::string::npos);
    EXPECT_EQ(r.failed, std::vector<std::string>{"tests/test_acct.py::test_a_reentrant"});
    EXPECT_EQ(r.passed_count, 1U);
}

TEST(Runtime, ConcurrentDispatchIsSerialized) {
    TempDir dir;
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
                                           "def work():\n"
                                           "    c = Ctr()\n"
                                           "    for _ in range(10000):\n"
                                           "        c.bump()\n"
                                           "\n"
                                           "threads = [threading.Thread(target=work) for _ in range(8)]\n"
                                           "for t in threads:\n"
                                           "    t.start()\n"
                                           "for t in threads:\n"
                                           "    t.join()\n"
                                           "total = fc_runtime.ShadowState.state.get(Ctr, {}).get(\"total\")\n"
                                           "print(\"TOTAL\", total, \"VIOLATIONS\", len(fc_runtime.violations))\n"
                                           "sys.exit(0 if total == 80000 else 3)\n"}});
    const auto project = fc::subject::scan_project(dir.path(), {});
    CheckerArtifact a;
    a.id = "c_ctr00001";
    a.target = "drive";
    a.state_changing = {"ctr.Ctr.bump()"};
    a.checker_source =
        "def counterChecker(op, shadowState):\n"
        "    # Per-object count plus a total keyed by the class\n"
        "    state = shadowState.get(op.baseObject, {})\n"
        "    state[\"n\"] = state.get(\"n\", 0) + 1\n"
        "    shadowState[op.baseObject] = state\n"
        "    totals = shadowState.get(type(op.baseObject), {})\n"
        "    seen = totals.get(\"total\", 0)\n"
        "    for _ in range(20):\n"
        "        pass\n"
        "    totals[\"total\"] = seen + 1\n"
        "    shadowState[type(op.baseObject)] = totals\n"
        "    assertEquals(state[\"n\"], op.returnValue)\n";
    ASSERT_FALSE(fc::pipeline::static_validate(a, project).has_value());
    TempDir out;
    instrument(project, InstrumentationPlan::build({a}, project, out / "tree", "log"));
    fc::util::ProcessOptions opts;
    opts.cwd = out / "tree";
    opts.timeout = std::chrono::seconds(300);
    opts.env = {{"PYTHONPATH", (out / "tree/src").string() + ":" + (out / "tree").string()},
                {"PYTHONDONTWRITEBYTECODE", "1"}};
    const auto r = fc::util::run_shell("python3 drive.py", opts);
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("TOTAL 80000 VIOLATIONS 0"), std::string::npos) << r.output;
}

TEST(ShimTemplates, ConfigRejectsUnknownMode) {
    EXPECT_EQ(shim_config_source("log"), "ON_VIOLATION = \"log\"\n");
    EXPECT_THROW(shim_config_source("ignore"), std::invalid_argument);
    for (auto src : {shim_init_source(), shim_core_source(), coverage_probe_source()}) {
        EXPECT_NO_THROW(fc::python::Module::parse(std::string(src)));
    }
    EXPECT_NE(shim_core_source().find(kGuardMessage), std::string::npos);
}

}  // namespace
