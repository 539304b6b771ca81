#include <gtest/gtest.h>

#include "fc/util/process.hpp"
#include "support.hpp"

namespace {

using fc::testing::TempDir;

fc::util::ProcessResult cli(const std::string& args, const fc::fs::path& cwd) {
    fc::util::ProcessOptions opts;
    opts.cwd = cwd;
    opts.timeout = std::chrono::seconds(600);
    return fc::util::run_shell(fc::util::shell_quote(FC_CLI_PATH) + " " + args, opts);
}

TEST(Cli, UsageErrorsExitTwo) {
    TempDir dir;
    EXPECT_EQ(cli("", dir.path()).exit_code, 2);
    EXPECT_EQ(cli("frobnicate", dir.path()).exit_code, 2);
    EXPECT_EQ(cli("gen --provider carrier-pigeon", dir.path()).exit_code, 2);
}

TEST(Cli, MissingConfigIsADomainError) {
    TempDir dir;
    const auto r = cli("report", dir.path());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("config file not found"), std::string::npos);
}

TEST(Cli, EmptyWorkDirReports) {
    TempDir dir;
    const auto root = fc::testing::copy_fixture("datanode_py", dir.path());
    const auto r = cli("--work " + (dir / "w").string() + " report", root);
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_TRUE(std::filesystem::exists(dir / "w/report.json"));
}

TEST(Cli, ScriptedGenerationIsDeterministic) {
    if (!fc::testing::pytest_available()) {
        GTEST_SKIP() << "pytest not installed";
    }
    TempDir dir;
    const auto root = fc::testing::copy_fixture("datanode_py", dir.path());
    const std::string target = "--test " + fc::util::shell_quote(fc::testing::kEmptyChildrenTest);
    const auto a = cli("--work " + (dir / "a").string() + " gen " + target + " --seed 7", root);
    const auto b = cli("--work " + (dir / "b").string() + " gen " + target + " --seed 7", root);
    ASSERT_EQ(a.exit_code, 0) << a.output;
    ASSERT_EQ(b.exit_code, 0) << b.output;
    EXPECT_EQ(fc::util::read_file(dir / "a/ledger.json"), fc::util::read_file(dir / "b/ledger.json"));
    EXPECT_EQ(fc::util::tree_hash(dir / "a/checkers"), fc::util::tree_hash(dir / "b/checkers"));
}

TEST(Cli, ExhaustedRejectionExitsOne) {
    if (!fc::testing::pytest_available()) {
        GTEST_SKIP() << "pytest not installed";
    }
    TempDir dir;
    const auto root = fc::testing::copy_fixture("datanode_py", dir.path());
    const auto r = cli("--work " + (dir / "w").string() + " gen --test " + fc::util::shell_quote(fc::testing::kEmptyChildrenTest) +
                           " --script scripts/broken.json",
                       root);
    EXPECT_EQ(r.exit_code, 1) << r.output;
    const auto ledger = nlohmann::json::parse(fc::util::read_file(dir / "w/ledger.json"));
    EXPECT_EQ(ledger["rows"][0]["final_status"], "rejected");
    EXPECT_EQ(ledger["rows"][0]["attempts"], 5);
}

}  // namespace
