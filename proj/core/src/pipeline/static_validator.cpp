#include "fc/pipeline/static_validator.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <set>

#include "fc/python/syntax.hpp"
#include "fc/subject/signature.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/process.hpp"
#include "fc/util/text.hpp"

namespace fc::pipeline {

using python::Module;
using python::Token;
using python::TokenKind;

const std::vector<std::string>& shim_assertion_helpers() {
    static const std::vector<std::string> names{"assertTrue", "assertEquals", "assertNotNull"};
    return names;
}

namespace {

bool is_op(const Token& t, std::string_view s) { return t.kind == TokenKind::Op && t.text == s; }
bool is_name(const Token& t, std::string_view s) { return t.kind == TokenKind::Name && t.text == s; }

// Value of a simple string literal; nullopt for bytes, f-strings and
// implicit concatenations the caller does not handle.
std::optional<std::string> literal_value(std::string_view text) {
    std::size_t p = 0;
    while (p < text.size() && std::isalpha(static_cast<unsigned char>(text[p]))) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[p])));
        if (c == 'b' || c == 'f') {
            return std::nullopt;
        }
        ++p;
    }
    text.remove_prefix(p);
    if (text.size() >= 6 && (text.substr(0, 3) == "'''" || text.substr(0, 3) == "\"\"\"")) {
        return std::string(text.substr(3, text.size() - 6));
    }
    if (text.size() >= 2) {
        return std::string(text.substr(1, text.size() - 2));
    }
    return std::nullopt;
}

std::atomic<unsigned> compile_counter{0};

const python::FunctionDef* sole_function(const Module& m) {
    const python::FunctionDef* fn = nullptr;
    for (const auto& f : m.functions()) {
        if (f.parent_class < 0 && f.parent_function < 0) {
            if (fn != nullptr) {
                return nullptr;
            }
            fn = &f;
        }
    }
    return fn;
}

}  // namespace

std::vector<std::string> signature_literals(const std::string& checker_source) {
    const auto m = Module::parse(checker_source);
    const auto* fn = sole_function(m);
    if (fn == nullptr || fn->params.empty()) {
        return {};
    }
    const auto& op = fn->params.front().name;
    const auto& all = m.tokens();
    std::vector<std::size_t> sig;
    for (std::size_t k = fn->colon_token + 1; k <= fn->last_token; ++k) {
        if (python::is_significant(all[k]) || all[k].kind == TokenKind::Newline) {
            sig.push_back(k);
        }
    }
    auto tok = [&](std::size_t i) -> const Token& { return all[sig[i]]; };
    const std::size_t n = sig.size();

    // Positions (index into sig) where an expression equal to op.signature ends.
    std::set<std::string> aliases;
    auto subject_at = [&](std::size_t i, std::size_t& end) {
        if (i + 2 < n && is_name(tok(i), op) && is_op(tok(i + 1), ".") && is_name(tok(i + 2), "signature")) {
            end = i + 3;
            return true;
        }
        if (i < n && tok(i).kind == TokenKind::Name && aliases.count(std::string(tok(i).text)) != 0 &&
            !(i > 0 && is_op(tok(i - 1), "."))) {
            end = i + 1;
            return true;
        }
        return false;
    };

    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](const Token& t) {
        if (t.kind != TokenKind::String) {
            return;
        }
        if (auto v = literal_value(t.text); v && seen.insert(*v).second) {
            out.push_back(*v);
        }
    };
    auto add_collection = [&](std::size_t open) {
        if (open >= n || !(is_op(tok(open), "(") || is_op(tok(open), "[") || is_op(tok(open), "{"))) {
            return;
        }
        int depth = 0;
        for (std::size_t j = open; j < n; ++j) {
            const auto& t = tok(j);
            if (t.kind == TokenKind::Op && (t.text == "(" || t.text == "[" || t.text == "{")) {
                ++depth;
            } else if (t.kind == TokenKind::Op && (t.text == ")" || t.text == "]" || t.text == "}")) {
                if (--depth == 0) {
                    return;
                }
            } else if (depth == 1) {
                add(t);
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        // alias = op.signature
        if (i + 4 < n && tok(i).kind == TokenKind::Name && is_op(tok(i + 1), "=") && is_name(tok(i + 2), op) &&
            is_op(tok(i + 3), ".") && is_name(tok(i + 4), "signature") &&
            (i + 5 >= n || tok(i + 5).kind == TokenKind::Newline)) {
            aliases.insert(std::string(tok(i).text));
            i += 4;
            continue;
        }
        // match op.signature: ... case "a" | "b":
        if (is_name(tok(i), "case") && (i == 0 || tok(i - 1).kind == TokenKind::Newline)) {
            for (std::size_t j = i + 1; j < n && !is_op(tok(j), ":"); ++j) {
                add(tok(j));
            }
            continue;
        }
        std::size_t end = 0;
        if (subject_at(i, end)) {
            if (end + 1 < n && (is_op(tok(end), "==") || is_op(tok(end), "!="))) {
                add(tok(end + 1));
            } else if (end < n && is_name(tok(end), "in")) {
                add_collection(end + 1);
            } else if (end + 1 < n && is_name(tok(end), "not") && is_name(tok(end + 1), "in")) {
                add_collection(end + 2);
            }
            continue;
        }
        // "literal" == op.signature
        if (tok(i).kind == TokenKind::String && i + 1 < n && (is_op(tok(i + 1), "==") || is_op(tok(i + 1), "!=")) &&
            subject_at(i + 2, end)) {
            add(tok(i));
        }
    }
    return out;
}

std::optional<Feedback> static_validate(CheckerArtifact& artifact, const subject::SubjectProject& project) {
    const auto& language = project.config.language;
    // (1) exactly one function definition, nothing else.
    std::optional<Module> parsed;
    try {
        parsed.emplace(Module::parse(artifact.checker_source));
    } catch (const python::SyntaxError&) {
        return feedback::syntax_error(language);
    }
    const auto& m = *parsed;
    const auto* fn = sole_function(m);
    if (fn == nullptr || !m.classes().empty() || m.functions().size() != 1) {
        return feedback::syntax_error(language);
    }
    for (const auto& d : fn->decorators) {
        if (d != "staticmethod") {
            return feedback::syntax_error(language);
        }
    }
    for (const auto& line : m.top_level_lines()) {
        if (line.first_token < fn->first_token || line.first_token > fn->last_token) {
            const auto& head = m.tokens()[line.first_token];
            if (!(head.kind == TokenKind::Op && head.text == "@")) {
                return feedback::syntax_error(language);
            }
        }
    }
    if (!project.config.compile_command.empty()) {
        const auto dir = std::filesystem::temp_directory_path() /
                         ("fc_compile_" + std::to_string(::getpid()) + "_" + std::to_string(compile_counter++));
        const auto file = dir / "checker.py";
        util::write_file(file, artifact.checker_source);
        util::ProcessOptions opts;
        opts.cwd = dir;
        opts.timeout = std::chrono::seconds(60);
        const auto r = util::run_shell(
            util::replace_all(project.config.compile_command, "{FILE}", util::shell_quote(file.string())), opts);
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
        if (r.exit_code != 0) {
            return feedback::syntax_error(language);
        }
    }

    // (2) at least one assertion-helper call; comments never produce tokens.
    std::set<std::string> assertion_names(shim_assertion_helpers().begin(), shim_assertion_helpers().end());
    assertion_names.insert(project.config.assertion_names.begin(), project.config.assertion_names.end());
    bool has_assertion = false;
    for (const auto& call : m.calls_between(fn->colon_token + 1, fn->last_token)) {
        if (assertion_names.count(call.name) != 0) {
            has_assertion = true;
            break;
        }
    }
    if (!has_assertion && assertion_names.count("assert") != 0) {
        for (std::size_t k = fn->colon_token + 1; k <= fn->last_token; ++k) {
            if (m.tokens()[k].kind == TokenKind::Name && m.tokens()[k].text == "assert") {
                has_assertion = true;
                break;
            }
        }
    }
    if (!has_assertion) {
        return feedback::no_assertion();
    }

    // (3) qualified literals must name SUT methods; (4) all literals must be qualified.
    const auto literals = signature_literals(artifact.checker_source);
    std::vector<std::string> unknown;
    std::vector<std::string> unqualified;
    for (const auto& lit : literals) {
        if (!subject::is_qualified_signature(lit)) {
            unqualified.push_back(lit);
        } else if (project.method_index.count(lit) == 0) {
            unknown.push_back(lit);
        }
    }
    if (!unknown.empty()) {
        return feedback::non_sut_method(unknown);
    }
    if (!unqualified.empty()) {
        return feedback::unqualified_signature(unqualified);
    }

    artifact.handled_signatures = literals;
    std::sort(artifact.handled_signatures.begin(), artifact.handled_signatures.end());
    artifact.advance(CheckerStatus::StaticallyValid);
    return std::nullopt;
}

}  // namespace fc::pipeline
