#include "fc/runner/test_runner.hpp"

#include <cstdlib>
#include <regex>
#include <set>

#include "fc/error.hpp"
#include "fc/util/process.hpp"
#include "fc/util/text.hpp"

namespace fc::runner {

TestRunner::TestRunner(subject::ProjectConfig config) : config_(std::move(config)) {}

void TestRunner::check_available() const {
    const auto trimmed = util::trim(config_.test_runner);
    const auto exe = trimmed.substr(0, trimmed.find_first_of(" \t"));
    if (exe.empty() || !util::find_executable(exe)) {
        throw InfraError("test runner executable not found: " + exe);
    }
}

std::string TestRunner::command_for(const std::vector<std::string>& test_ids) const {
    std::string quoted;
    for (const auto& id : test_ids) {
        if (!quoted.empty()) {
            quoted += ' ';
        }
        quoted += util::shell_quote(id);
    }
    return util::replace_all(config_.test_runner, "{TESTS}", quoted);
}

namespace {

std::size_t count_before(const std::string& line, const std::string& word) {
    const std::regex re("(\\d+) " + word);
    std::smatch m;
    std::size_t total = 0;
    auto begin = line.cbegin();
    while (std::regex_search(begin, line.cend(), m, re)) {
        total += std::stoul(m[1]);
        begin = m[0].second;
    }
    return total;
}

}  // namespace

TestRunResult TestRunner::run(const RunRequest& request) const {
    util::ProcessOptions opts;
    opts.cwd = request.tree;
    opts.timeout = request.timeout;
    opts.env = request.env;
    opts.env["PYTHONDONTWRITEBYTECODE"] = "1";
    std::string pythonpath;
    for (const auto& p : request.python_path) {
        pythonpath += p.string() + ":";
    }
    pythonpath += request.tree.string();
    if (const char* existing = std::getenv("PYTHONPATH"); existing != nullptr && *existing != '\0') {
        pythonpath += std::string(":") + existing;
    }
    opts.env["PYTHONPATH"] = pythonpath;

    const auto proc = util::run_shell(command_for(request.test_ids), opts);

    TestRunResult r;
    r.exit_code = proc.exit_code;
    r.timed_out = proc.timed_out;
    r.wall_time_s = proc.wall_time_s;
    r.output = proc.output;
    r.infra_error = !proc.timed_out && proc.exit_code != 0 && proc.exit_code != 1;

    std::vector<std::regex> patterns;
    for (const auto& p : config_.failure_patterns) {
        patterns.emplace_back(p, std::regex::ECMAScript | std::regex::multiline);
    }
    std::set<std::string> seen;
    for (const auto& line : util::split_lines(proc.output)) {
        for (const auto& re : patterns) {
            std::smatch m;
            if (std::regex_search(line, m, re) && m.size() > 1 && seen.insert(m[1]).second) {
                r.failed.push_back(m[1]);
            }
        }
        if (line.find(" passed") != std::string::npos || line.find(" failed") != std::string::npos) {
            r.passed_count = std::max(r.passed_count, count_before(line, "passed"));
            r.failed_count = std::max(r.failed_count, count_before(line, "failed"));
        }
    }
    return r;
}

std::string normalize_log(std::string log, const fs::path& tree) {
    if (!tree.empty()) {
        log = util::replace_all(std::move(log), tree.string(), "<tree>");
    }
    static const std::regex duration(R"(in \d+(?:\.\d+)?s(?: \(\d+:\d\d:\d\d\))?)");
    static const std::regex address(R"(0x[0-9a-fA-F]{4,})");
    log = std::regex_replace(log, duration, "in <t>s");
    log = std::regex_replace(log, address, "0x<addr>");
    return log;
}

}  // namespace fc::runner
