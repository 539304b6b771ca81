#include "fc/mutation/mutants.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

#include "fc/python/syntax.hpp"
#include "fc/subject/signature.hpp"
#include "fc/util/fs.hpp"

namespace fc::mutation {

using python::Module;
using python::Token;
using python::TokenKind;

namespace {

constexpr std::array<std::pair<Operator, std::string_view>, 6> kOperators{{
    {Operator::EmptyReturn, "EmptyReturn"},
    {Operator::NegateConditional, "NegateConditional"},
    {Operator::BooleanLiteralFlip, "BooleanLiteralFlip"},
    {Operator::ArithmeticSwap, "ArithmeticSwap"},
    {Operator::ConstantNudge, "ConstantNudge"},
    {Operator::RemoveInitializer, "RemoveInitializer"},
}};

constexpr std::array<std::pair<MutantStatus, std::string_view>, 4> kStatuses{{
    {MutantStatus::NotCovered, "not_covered"},
    {MutantStatus::KilledByTests, "killed_by_tests"},
    {MutantStatus::Survived, "survived"},
    {MutantStatus::KilledByChecker, "killed_by_checker"},
}};

// Empty value for a return annotation; nullopt when the function returns
// nothing useful to empty.
std::optional<std::string> empty_value_for(const std::string& annotation) {
    if (annotation.empty()) {
        return "None";
    }
    static const std::map<std::string, std::string> table{
        {"set", "set()"},     {"Set", "set()"},   {"AbstractSet", "set()"}, {"frozenset", "frozenset()"},
        {"FrozenSet", "frozenset()"}, {"list", "[]"}, {"List", "[]"},     {"Sequence", "[]"},
        {"dict", "{}"},       {"Dict", "{}"},     {"Mapping", "{}"},        {"tuple", "()"},
        {"Tuple", "()"},      {"str", "\"\""},    {"bytes", "b\"\""},       {"int", "0"},
        {"float", "0.0"},     {"bool", "False"},
    };
    const auto simple = subject::simple_type_name(annotation);
    if (simple == "NoneType") {
        return std::nullopt;
    }
    const auto it = table.find(simple);
    return it == table.end() ? std::string("None") : it->second;
}

bool is_binary_context(const Token& prev) {
    switch (prev.kind) {
        case TokenKind::Number:
        case TokenKind::String:
            return true;
        case TokenKind::Name:
            return !python::is_keyword(prev.text) || prev.text == "True" || prev.text == "False" ||
                   prev.text == "None";
        case TokenKind::Op:
            return prev.text == ")" || prev.text == "]" || prev.text == "}";
        default:
            return false;
    }
}

std::optional<std::string> arithmetic_swap(std::string_view op) {
    static const std::map<std::string_view, std::string_view> table{
        {"+", "-"}, {"-", "+"}, {"*", "/"}, {"/", "*"}, {"//", "*"}, {"%", "*"},
        {"+=", "-="}, {"-=", "+="}, {"*=", "/="}, {"/=", "*="},
    };
    const auto it = table.find(op);
    return it == table.end() ? std::nullopt : std::optional<std::string>(it->second);
}

bool is_literal_token(const Token& t) {
    return t.kind == TokenKind::Number || t.kind == TokenKind::String ||
           (t.kind == TokenKind::Name && (t.text == "True" || t.text == "False" || t.text == "None"));
}

bool is_plain_int(std::string_view s) {
    return !s.empty() && s.size() < 18 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
           (s.size() == 1 || s.front() != '0');
}

struct Collector {
    const Module& m;
    const std::string& file;
    const subject::MethodInfo& method;
    std::vector<MutantRecord>& out;

    void add(Operator op, std::size_t begin, std::size_t end, std::string mutated) {
        const auto& src = m.source();
        MutantRecord r;
        r.op = op;
        r.file = file;
        r.span = subject::Span{begin, end};
        r.original_snippet = src.substr(begin, end - begin);
        r.mutated_snippet = std::move(mutated);
        if (r.original_snippet == r.mutated_snippet) {
            return;
        }
        r.method = method.signature;
        r.line = 1 + static_cast<int>(std::count(src.begin(), src.begin() + static_cast<long>(begin), '\n'));
        r.end_line = r.line + static_cast<int>(std::count(r.original_snippet.begin(), r.original_snippet.end(), '\n'));
        out.push_back(std::move(r));
    }
};

}  // namespace

std::string_view operator_name(Operator op) {
    for (const auto& [o, n] : kOperators) {
        if (o == op) {
            return n;
        }
    }
    throw std::invalid_argument("unknown operator");
}

Operator operator_from_name(std::string_view name) {
    for (const auto& [o, n] : kOperators) {
        if (n == name) {
            return o;
        }
    }
    throw std::invalid_argument("unknown mutation operator: " + std::string(name));
}

std::string_view mutant_status_name(MutantStatus status) {
    for (const auto& [s, n] : kStatuses) {
        if (s == status) {
            return n;
        }
    }
    throw std::invalid_argument("unknown status");
}

MutantStatus mutant_status_from_name(std::string_view name) {
    for (const auto& [s, n] : kStatuses) {
        if (n == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown mutant status: " + std::string(name));
}

nlohmann::json MutantRecord::to_json() const {
    nlohmann::json j{{"id", id},
                     {"operator", operator_name(op)},
                     {"file", file},
                     {"span", {span.begin, span.end}},
                     {"line", line},
                     {"end_line", end_line},
                     {"method", method},
                     {"original_snippet", original_snippet},
                     {"mutated_snippet", mutated_snippet},
                     {"status", status ? nlohmann::json(mutant_status_name(*status)) : nlohmann::json(nullptr)},
                     {"infra_skip", infra_skip}};
    if (!note.empty()) {
        j["note"] = note;
    }
    return j;
}

MutantRecord MutantRecord::from_json(const nlohmann::json& j) {
    MutantRecord r;
    r.id = j.at("id").get<std::string>();
    r.op = operator_from_name(j.at("operator").get<std::string>());
    r.file = j.at("file").get<std::string>();
    r.span = subject::Span{j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
    r.line = j.value("line", 0);
    r.end_line = j.value("end_line", r.line);
    r.method = j.value("method", "");
    r.original_snippet = j.at("original_snippet").get<std::string>();
    r.mutated_snippet = j.at("mutated_snippet").get<std::string>();
    if (j.contains("status") && !j["status"].is_null()) {
        r.status = mutant_status_from_name(j["status"].get<std::string>());
    }
    r.infra_skip = j.value("infra_skip", false);
    r.note = j.value("note", "");
    return r;
}

std::vector<MutantRecord> mutants_for_source(const std::string& source, const std::string& file,
                                             const std::vector<const subject::MethodInfo*>& methods) {
    const auto m = Module::parse(source);
    const auto& toks = m.tokens();
    std::vector<MutantRecord> out;

    for (const auto* method : methods) {
        const python::FunctionDef* fn = nullptr;
        for (const auto& f : m.functions()) {
            if (f.end == method->span.end && f.decorators_begin >= method->span.begin && f.begin < method->span.end) {
                fn = &f;
                break;
            }
        }
        if (fn == nullptr) {
            continue;
        }
        // Nested functions belong to neither their own method nor this one.
        std::vector<std::pair<std::size_t, std::size_t>> nested;
        for (const auto& f : m.functions()) {
            if (&f != fn && f.begin > fn->begin && f.end <= fn->end) {
                nested.emplace_back(f.decorators_begin, f.end);
            }
        }
        const auto in_body = [&](std::size_t i) {
            if (i <= fn->colon_token || i > fn->last_token) {
                return false;
            }
            return std::none_of(nested.begin(), nested.end(), [&](const auto& r) {
                return toks[i].begin >= r.first && toks[i].begin < r.second;
            });
        };
        Collector c{m, file, *method, out};

        for (const auto& line : m.lines()) {
            if (!in_body(line.first_token)) {
                continue;
            }
            const auto& head = toks[line.first_token];
            if (head.text == "return" && line.last_token > line.first_token) {
                if (const auto empty = empty_value_for(fn->return_annotation)) {
                    c.add(Operator::EmptyReturn, toks[line.first_token + 1].begin, toks[line.last_token].end, *empty);
                }
            }
            if ((head.text == "if" || head.text == "elif" || head.text == "while") && head.kind == TokenKind::Name) {
                int depth = 0;
                std::size_t colon = 0;
                bool has_lambda = false;
                for (std::size_t i = line.first_token + 1; i <= line.last_token; ++i) {
                    const auto t = toks[i].text;
                    if (t == "lambda") {
                        has_lambda = true;
                    }
                    if (t == "(" || t == "[" || t == "{") {
                        ++depth;
                    } else if (t == ")" || t == "]" || t == "}") {
                        --depth;
                    } else if (t == ":" && depth == 0) {
                        colon = i;
                        break;
                    }
                }
                if (colon > line.first_token + 1 && !has_lambda) {
                    const auto b = toks[line.first_token + 1].begin;
                    const auto e = toks[colon - 1].end;
                    c.add(Operator::NegateConditional, b, e, "not (" + source.substr(b, e - b) + ")");
                }
            }
            // `target = literal` where target is a name or attribute chain.
            if (head.kind == TokenKind::Name && !python::is_keyword(head.text)) {
                std::size_t i = line.first_token + 1;
                while (i + 1 <= line.last_token && toks[i].text == "." && toks[i + 1].kind == TokenKind::Name) {
                    i += 2;
                }
                if (i + 1 <= line.last_token && toks[i].text == "=") {
                    const auto lit = i + 1;
                    const bool single = lit == line.last_token && is_literal_token(toks[lit]);
                    const bool negative = lit + 1 == line.last_token && toks[lit].text == "-" &&
                                          toks[lit + 1].kind == TokenKind::Number;
                    const bool empty_coll = lit + 1 == line.last_token &&
                                            ((toks[lit].text == "[" && toks[lit + 1].text == "]") ||
                                             (toks[lit].text == "{" && toks[lit + 1].text == "}") ||
                                             (toks[lit].text == "(" && toks[lit + 1].text == ")"));
                    if (single || negative || empty_coll) {
                        c.add(Operator::RemoveInitializer, head.begin, toks[line.last_token].end, "pass");
                    }
                }
            }
        }

        for (std::size_t i = fn->colon_token + 1; i <= fn->last_token; ++i) {
            if (!in_body(i)) {
                continue;
            }
            const auto& t = toks[i];
            if (t.kind == TokenKind::Name && (t.text == "True" || t.text == "False")) {
                c.add(Operator::BooleanLiteralFlip, t.begin, t.end, t.text == "True" ? "False" : "True");
            } else if (t.kind == TokenKind::Number && is_plain_int(t.text)) {
                const auto value = std::stoll(std::string(t.text));
                c.add(Operator::ConstantNudge, t.begin, t.end, std::to_string(value == 1 ? 0 : value + 1));
            } else if (t.kind == TokenKind::Op) {
                if (const auto swapped = arithmetic_swap(t.text)) {
                    std::size_t p = i - 1;
                    while (p > fn->colon_token && !python::is_significant(toks[p])) {
                        --p;
                    }
                    const bool augmented = t.text.size() == 2 && t.text.back() == '=' && t.text != "//";
                    if (augmented || (p > fn->colon_token && is_binary_context(toks[p]))) {
                        c.add(Operator::ArithmeticSwap, t.begin, t.end, *swapped);
                    }
                }
            }
        }
    }

    // Keep only mutants whose text still tokenizes and parses.
    std::vector<MutantRecord> valid;
    for (auto& r : out) {
        try {
            (void)Module::parse(mutate_text(source, r));
            valid.push_back(std::move(r));
        } catch (const python::SyntaxError&) {
        }
    }
    return valid;
}

std::vector<MutantRecord> generate_mutants(const subject::SubjectProject& project, const std::set<std::string>& scope) {
    if (scope.empty()) {
        throw std::invalid_argument("mutation scope must name at least one type");
    }
    std::map<std::string, std::vector<const subject::MethodInfo*>> per_file;
    for (const auto& [sig, info] : project.method_index) {
        if (scope.count(info.declaring_type) != 0) {
            per_file[info.file].push_back(&info);
        }
    }
    std::vector<MutantRecord> all;
    for (const auto& [file, methods] : per_file) {
        auto found = mutants_for_source(util::read_file(project.root / file), file, methods);
        all.insert(all.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    }
    std::sort(all.begin(), all.end(), [](const MutantRecord& a, const MutantRecord& b) {
        return std::tie(a.file, a.span.begin, a.span.end, a.op) < std::tie(b.file, b.span.begin, b.span.end, b.op);
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const MutantRecord& a, const MutantRecord& b) {
                              return a.file == b.file && a.span.begin == b.span.begin && a.span.end == b.span.end &&
                                     a.op == b.op;
                          }),
              all.end());
    char buf[16];
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::snprintf(buf, sizeof buf, "m%04zu", i + 1);
        all[i].id = buf;
    }
    return all;
}

std::string mutate_text(const std::string& source, const MutantRecord& mutant) {
    if (mutant.span.end > source.size() || mutant.span.begin > mutant.span.end ||
        source.compare(mutant.span.begin, mutant.span.end - mutant.span.begin, mutant.original_snippet) != 0) {
        throw MutantApplyError("span drift for mutant " + mutant.id + " in " + mutant.file);
    }
    std::string out = source;
    out.replace(mutant.span.begin, mutant.span.end - mutant.span.begin, mutant.mutated_snippet);
    return out;
}

std::string apply_mutant(const fs::path& root, const MutantRecord& mutant) {
    const auto path = root / mutant.file;
    if (!fs::exists(path)) {
        throw MutantApplyError("missing file for mutant " + mutant.id + ": " + mutant.file);
    }
    auto original = util::read_file(path);
    util::write_file(path, mutate_text(original, mutant));
    return original;
}

void revert_mutant(const fs::path& root, const MutantRecord& mutant, const std::string& original_content) {
    util::write_file(root / mutant.file, original_content);
}

}  // namespace fc::mutation
