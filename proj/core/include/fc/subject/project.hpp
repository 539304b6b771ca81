#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/python/syntax.hpp"

namespace fc::subject {

namespace fs = std::filesystem;

struct ProjectConfig {
    std::vector<std::string> source_dirs{"src"};
    std::vector<std::string> test_dirs{"tests"};
    // `{TESTS}` is replaced by the shell-quoted test ids.
    std::string test_runner = "python3 -m pytest -q -rfE -p no:cacheprovider {TESTS}";
    std::vector<std::string> assertion_names{"assert"};
    double timeout_seconds = 180.0;

    std::vector<std::string> exclude_dirs;
    // Regexes applied line by line to runner output; group 1 is a failing test id.
    std::vector<std::string> failure_patterns{R"(^(?:FAILED|ERROR) (\S+))"};
    // Optional syntax check run on each checker before validation; `{FILE}`
    // is replaced by the checker module path. Empty disables it.
    std::string compile_command;
    std::string language = "Python";

    static ProjectConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

struct MethodInfo {
    std::string signature;
    std::string file;  // relative to the project root, '/'-separated
    Span span;         // decorators through last body byte
    std::string body;  // exactly source[span]
    bool is_constructor = false;

    std::string name;            // simple name (the type name for constructors)
    std::string declaring_type;  // `<ns>.<Type>`
    std::size_t min_args = 0;    // excluding self/cls
    std::size_t max_args = 0;
    bool variadic = false;
    bool is_static = false;
    int line = 0;

    bool accepts(std::size_t arity) const { return arity >= min_args && (variadic || arity <= max_args); }
};

struct ResolvedCall {
    std::string signature;
    int line = 0;  // 1-based line within TestCase::body
};

struct TestCase {
    std::string id;    // `<file>::<name>` or `<file>::<Class>::<name>`
    std::string file;  // relative to the project root
    std::string name;
    std::string body;
    std::vector<std::string> imports;
    std::vector<std::string> sut_calls;  // unique, first-occurrence order
    std::vector<ResolvedCall> calls;     // every resolved call site
    std::size_t assertion_count = 0;
    std::size_t token_estimate = 0;
    int line = 0;  // line of the body's first line in `file`

    // Declaring types of sut_calls, sorted.
    std::vector<std::string> declaring_types() const;
};

struct SubjectProject {
    fs::path root;
    ProjectConfig config;
    std::map<std::string, MethodInfo> method_index;
    std::vector<TestCase> tests;  // sorted by id
    std::vector<std::string> source_files;
    std::vector<std::string> test_files;
    std::vector<std::string> warnings;

    const MethodInfo* method(std::string_view signature) const;
    const TestCase* test(std::string_view id) const;
    bool has_type(std::string_view declaring_type) const;
};

nlohmann::json method_index_json(const SubjectProject& project);
nlohmann::json test_case_json(const TestCase& test);

SubjectProject scan_project(const fs::path& root, const ProjectConfig& config);

// Resolves the calls of one test function. `source` is a test function
// definition (decorators allowed). Ambiguous calls are omitted and reported
// in `warnings`; unresolvable calls are omitted and reported in `notes`.
TestCase resolve_test_calls(const SubjectProject& project, std::string_view source,
                            std::vector<std::string>* warnings = nullptr,
                            std::vector<std::string>* notes = nullptr);

std::vector<std::string> extract_imports(const fs::path& file);

// Module namespace for a file under a source root: `pkg/mod.py` -> `pkg.mod`,
// `pkg/__init__.py` -> `pkg`.
std::string module_namespace(const fs::path& relative_to_source_root);

// True for `test_*.py` and `*_test.py`.
bool is_test_file_name(std::string_view filename);

}  // namespace fc::subject
