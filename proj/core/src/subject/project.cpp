#include "fc/subject/project.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fc/error.hpp"
#include "fc/subject/signature.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/text.hpp"

namespace fc::subject {

using nlohmann::json;
using python::FunctionDef;
using python::Module;
using python::ParamKind;

ProjectConfig ProjectConfig::from_json(const json& j) {
    ProjectConfig c;
    c.source_dirs = j.value("source_dirs", c.source_dirs);
    c.test_dirs = j.value("test_dirs", c.test_dirs);
    c.test_runner = j.value("test_runner", c.test_runner);
    c.assertion_names = j.value("assertion_names", c.assertion_names);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.exclude_dirs = j.value("exclude_dirs", c.exclude_dirs);
    c.failure_patterns = j.value("failure_patterns", c.failure_patterns);
    c.compile_command = j.value("compile_command", c.compile_command);
    c.language = j.value("language", c.language);
    if (c.source_dirs.empty()) {
        throw DomainError("project config: source_dirs is empty");
    }
    if (c.test_runner.find("{TESTS}") == std::string::npos) {
        throw DomainError("project config: test_runner lacks the {TESTS} placeholder");
    }
    if (c.timeout_seconds <= 0) {
        throw DomainError("project config: timeout_seconds must be positive");
    }
    return c;
}

json ProjectConfig::to_json() const {
    return json{{"source_dirs", source_dirs},         {"test_dirs", test_dirs},
                {"test_runner", test_runner},         {"assertion_names", assertion_names},
                {"timeout_seconds", timeout_seconds}, {"exclude_dirs", exclude_dirs},
                {"failure_patterns", failure_patterns}, {"compile_command", compile_command},
                {"language", language}};
}

std::vector<std::string> TestCase::declaring_types() const {
    std::set<std::string> types;
    for (const auto& sig : sut_calls) {
        types.insert(declaring_type_of(sig));
    }
    return {types.begin(), types.end()};
}

const MethodInfo* SubjectProject::method(std::string_view signature) const {
    const auto it = method_index.find(std::string(signature));
    return it == method_index.end() ? nullptr : &it->second;
}

const TestCase* SubjectProject::test(std::string_view id) const {
    const auto it = std::lower_bound(tests.begin(), tests.end(), id,
                                     [](const TestCase& t, std::string_view v) { return t.id < v; });
    return it != tests.end() && it->id == id ? &*it : nullptr;
}

bool SubjectProject::has_type(std::string_view declaring_type) const {
    return std::any_of(method_index.begin(), method_index.end(),
                       [&](const auto& kv) { return kv.second.declaring_type == declaring_type; });
}

json method_index_json(const SubjectProject& project) {
    json out = json::object();
    for (const auto& [sig, m] : project.method_index) {
        out[sig] = json{{"file", m.file},
                        {"span", {m.span.begin, m.span.end}},
                        {"is_constructor", m.is_constructor},
                        {"line", m.line},
                        {"min_args", m.min_args},
                        {"max_args", m.max_args},
                        {"variadic", m.variadic}};
    }
    return out;
}

json test_case_json(const TestCase& t) {
    return json{{"id", t.id},
                {"file", t.file},
                {"name", t.name},
                {"imports", t.imports},
                {"sut_calls", t.sut_calls},
                {"assertion_count", t.assertion_count},
                {"token_estimate", t.token_estimate}};
}

std::string module_namespace(const fs::path& rel) {
    std::vector<std::string> parts;
    for (const auto& p : rel.parent_path()) {
        if (!p.empty() && p != ".") {
            parts.push_back(p.string());
        }
    }
    const auto stem = rel.stem().string();
    if (stem != "__init__") {
        parts.push_back(stem);
    }
    return util::join(parts, ".");
}

bool is_test_file_name(std::string_view name) {
    if (!name.ends_with(".py")) {
        return false;
    }
    return name.starts_with("test_") || name.ends_with("_test.py");
}

namespace {

std::vector<std::string> excluded(const ProjectConfig& config) {
    auto dirs = util::default_excluded_dirs();
    dirs.insert(dirs.end(), config.exclude_dirs.begin(), config.exclude_dirs.end());
    return dirs;
}

// Chain of class names enclosing `fn`, outermost first; empty if the def is
// not a method or sits inside a function somewhere up the chain.
std::vector<std::string> class_chain(const Module& m, const FunctionDef& fn) {
    std::vector<std::string> chain;
    if (fn.parent_class < 0) {
        return chain;
    }
    int c = fn.parent_class;
    while (c >= 0) {
        const auto& cls = m.classes()[static_cast<std::size_t>(c)];
        if (cls.parent_function >= 0) {
            return {};
        }
        chain.insert(chain.begin(), cls.name);
        c = cls.parent_class;
    }
    return chain;
}

std::size_t span_begin_line_start(const Module& m, const FunctionDef& fn) {
    const auto& src = m.source();
    const auto nl = fn.decorators_begin == 0 ? std::string::npos : src.rfind('\n', fn.decorators_begin - 1);
    return nl == std::string::npos ? 0 : nl + 1;
}

void index_module(const Module& m, const std::string& file, const std::string& ns, SubjectProject& project) {
    for (const auto& fn : m.functions()) {
        auto chain = class_chain(m, fn);
        if (chain.empty()) {
            continue;
        }
        MethodInfo info;
        info.file = file;
        info.span = Span{span_begin_line_start(m, fn), fn.end};
        info.body = std::string(m.text(info.span.begin, info.span.end));
        info.line = fn.line;
        info.is_static = fn.has_decorator("staticmethod");

        Signature sig;
        sig.type = chain.back();
        chain.pop_back();
        chain.insert(chain.begin(), ns);
        sig.ns = util::join(chain, ".");
        info.is_constructor = fn.name == "__init__";
        sig.method = info.is_constructor ? sig.type : fn.name;

        std::size_t skip = info.is_static ? 0 : 1;
        for (const auto& p : fn.params) {
            if (skip > 0 && p.kind == ParamKind::Positional) {
                --skip;
                continue;
            }
            switch (p.kind) {
                case ParamKind::VarPositional:
                    sig.params.push_back("tuple");
                    info.variadic = true;
                    break;
                case ParamKind::VarKeyword:
                    sig.params.push_back("dict");
                    info.variadic = true;
                    break;
                default:
                    sig.params.push_back(simple_type_name(p.annotation));
                    ++info.max_args;
                    if (!p.has_default) {
                        ++info.min_args;
                    }
            }
        }
        info.signature = sig.str();
        info.name = sig.method;
        info.declaring_type = sig.declaring_type();
        if (!parse_signature(info.signature)) {
            project.warnings.push_back(file + ":" + std::to_string(fn.line) + ": cannot form a canonical signature for " +
                                       fn.name);
            continue;
        }
        if (project.method_index.count(info.signature) != 0) {
            project.warnings.push_back(file + ":" + std::to_string(fn.line) + ": duplicate definition of " +
                                       info.signature + " ignored");
            continue;
        }
        project.method_index.emplace(info.signature, std::move(info));
    }
}

using NameIndex = std::unordered_map<std::string, std::vector<const MethodInfo*>>;

NameIndex build_name_index(const SubjectProject& project) {
    NameIndex index;
    for (const auto& [sig, m] : project.method_index) {
        index[m.name].push_back(&m);
    }
    return index;
}

struct ResolveSink {
    std::vector<std::string>* warnings = nullptr;
    std::vector<std::string>* notes = nullptr;
};

TestCase resolve_function(const SubjectProject& project, const NameIndex& index, const Module& m,
                          const FunctionDef& fn, const ResolveSink& sink) {
    TestCase t;
    t.name = fn.name;
    const auto body_begin = span_begin_line_start(m, fn);
    t.body = std::string(m.text(body_begin, fn.end));
    t.line = m.source().empty() ? 1 : static_cast<int>(std::count(m.source().begin(),
                                                                  m.source().begin() + static_cast<long>(body_begin), '\n')) + 1;
    t.token_estimate = util::estimate_tokens(t.body);

    const std::set<std::string> assertion_names(project.config.assertion_names.begin(),
                                                project.config.assertion_names.end());
    const auto& toks = m.tokens();
    if (assertion_names.count("assert") != 0) {
        for (std::size_t k = fn.colon_token + 1; k <= fn.last_token; ++k) {
            if (toks[k].kind == python::TokenKind::Name && toks[k].text == "assert") {
                ++t.assertion_count;
            }
        }
    }

    std::set<std::string> seen;
    for (const auto& call : m.calls_between(fn.colon_token + 1, fn.last_token)) {
        if (assertion_names.count(call.name) != 0) {
            ++t.assertion_count;
        }
        const auto it = index.find(call.name);
        std::vector<const MethodInfo*> hits;
        if (it != index.end()) {
            for (const auto* mi : it->second) {
                if (mi->accepts(call.arity)) {
                    hits.push_back(mi);
                }
            }
        }
        const int rel_line = call.line - t.line + 1;
        if (hits.size() == 1) {
            t.calls.push_back(ResolvedCall{hits[0]->signature, rel_line});
            if (seen.insert(hits[0]->signature).second) {
                t.sut_calls.push_back(hits[0]->signature);
            }
        } else if (hits.size() > 1) {
            if (sink.warnings != nullptr) {
                std::string msg = "ambiguous call " + call.name + "/" + std::to_string(call.arity) + " at line " +
                                  std::to_string(call.line) + " omitted; candidates:";
                for (const auto* h : hits) {
                    msg += " " + h->signature;
                }
                sink.warnings->push_back(std::move(msg));
            }
        } else if (sink.notes != nullptr) {
            sink.notes->push_back("unresolved call " + call.name + "/" + std::to_string(call.arity) + " at line " +
                                  std::to_string(call.line));
        }
    }
    return t;
}

bool is_test_function(const Module& m, const FunctionDef& fn) {
    if (!util::starts_with(fn.name, "test") || fn.parent_function >= 0) {
        return false;
    }
    if (fn.parent_class < 0) {
        return true;
    }
    const auto& cls = m.classes()[static_cast<std::size_t>(fn.parent_class)];
    return util::starts_with(cls.name, "Test") && cls.parent_class < 0 && cls.parent_function < 0;
}

std::string dedent(std::string_view text) {
    auto lines = util::split_lines(text);
    std::size_t common = std::string::npos;
    for (const auto& l : lines) {
        const auto first = l.find_first_not_of(" \t");
        if (first == std::string::npos) {
            continue;
        }
        common = std::min(common, first);
    }
    if (common == std::string::npos || common == 0) {
        return std::string(text);
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) {
            out += '\n';
        }
        out += lines[i].size() >= common ? lines[i].substr(common) : util::trim(lines[i]);
    }
    if (!text.empty() && text.back() == '\n') {
        out += '\n';
    }
    return out;
}

}  // namespace

SubjectProject scan_project(const fs::path& root, const ProjectConfig& config) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw InfraError("project root does not exist or is not a directory: " + root.string());
    }
    SubjectProject project;
    project.root = fs::canonical(root);
    project.config = config;
    const auto skip = excluded(config);

    std::size_t parseable = 0;
    for (const auto& dir : config.source_dirs) {
        const auto base = project.root / dir;
        if (!fs::is_directory(base, ec)) {
            project.warnings.push_back("source directory missing: " + dir);
            continue;
        }
        for (const auto& rel : util::list_files(base, skip)) {
            if (rel.extension() != ".py") {
                continue;
            }
            const auto file = util::generic_relative(base / rel, project.root);
            project.source_files.push_back(file);
            try {
                const auto m = Module::parse(util::read_file(base / rel));
                ++parseable;
                index_module(m, file, module_namespace(rel), project);
            } catch (const python::SyntaxError& e) {
                project.warnings.push_back(file + ": unparseable: " + e.what());
            }
        }
    }
    if (parseable == 0) {
        throw DomainError("zero parseable source files under " + project.root.string());
    }

    const auto index = build_name_index(project);
    for (const auto& dir : config.test_dirs) {
        const auto base = project.root / dir;
        if (!fs::is_directory(base, ec)) {
            project.warnings.push_back("test directory missing: " + dir);
            continue;
        }
        for (const auto& rel : util::list_files(base, skip)) {
            if (!is_test_file_name(rel.filename().string())) {
                continue;
            }
            const auto file = util::generic_relative(base / rel, project.root);
            project.test_files.push_back(file);
            std::optional<Module> m;
            try {
                m.emplace(Module::parse(util::read_file(base / rel)));
            } catch (const python::SyntaxError& e) {
                project.warnings.push_back(file + ": unparseable: " + e.what());
                continue;
            }
            std::vector<std::string> imports;
            for (const auto& imp : m->imports()) {
                imports.push_back(imp.text);
            }
            for (const auto& fn : m->functions()) {
                if (!is_test_function(*m, fn)) {
                    continue;
                }
                std::vector<std::string> warnings;
                auto t = resolve_function(project, index, *m, fn, ResolveSink{&warnings, nullptr});
                for (auto& w : warnings) {
                    project.warnings.push_back(file + ": " + w);
                }
                t.file = file;
                t.id = fn.parent_class >= 0
                           ? file + "::" + m->classes()[static_cast<std::size_t>(fn.parent_class)].name + "::" + fn.name
                           : file + "::" + fn.name;
                t.imports = imports;
                project.tests.push_back(std::move(t));
            }
        }
    }
    std::sort(project.tests.begin(), project.tests.end(),
              [](const TestCase& a, const TestCase& b) { return a.id < b.id; });
    return project;
}

TestCase resolve_test_calls(const SubjectProject& project, std::string_view source,
                            std::vector<std::string>* warnings, std::vector<std::string>* notes) {
    const auto m = Module::parse(dedent(source));
    const FunctionDef* fn = nullptr;
    for (const auto& f : m.functions()) {
        if (f.parent_class < 0 && f.parent_function < 0) {
            fn = &f;
            break;
        }
    }
    if (fn == nullptr) {
        throw python::SyntaxError("no function definition in test source", 1);
    }
    auto t = resolve_function(project, build_name_index(project), m, *fn, ResolveSink{warnings, notes});
    t.id = fn->name;
    return t;
}

std::vector<std::string> extract_imports(const fs::path& file) {
    const auto m = Module::parse(util::read_file(file));
    std::vector<std::string> out;
    for (const auto& imp : m.imports()) {
        out.push_back(imp.text);
    }
    return out;
}

}  // namespace fc::subject
