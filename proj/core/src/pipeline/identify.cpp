#include "fc/pipeline/identify.hpp"

#include <algorithm>
#include <set>

#include "fc/llm/prompts.hpp"
#include "fc/pipeline/generate.hpp"
#include "fc/util/text.hpp"

namespace fc::pipeline {

namespace {

// Code part of a line: drops a trailing comment (quotes respected) and
// collapses whitespace.
std::string normalize_code(std::string_view line) {
    char quote = 0;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote != 0) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == '#') {
            cut = i;
            break;
        }
    }
    std::string out;
    bool space = false;
    for (const char c : line.substr(0, cut)) {
        if (c == ' ' || c == '\t' || c == '\r') {
            space = !out.empty();
        } else {
            if (space) {
                out += ' ';
                space = false;
            }
            out += c;
        }
    }
    return out;
}

bool flagged(std::string_view line) { return line.find(llm::kStateChangingMarker) != std::string_view::npos; }

}  // namespace

std::string annotate_body(const subject::TestCase& test, const std::vector<std::string>& state_changing) {
    const std::set<std::string> sc(state_changing.begin(), state_changing.end());
    std::set<int> lines;
    for (const auto& call : test.calls) {
        if (sc.count(call.signature) != 0) {
            lines.insert(call.line);
        }
    }
    auto body_lines = util::split_lines(test.body);
    for (int l : lines) {
        if (l < 1 || static_cast<std::size_t>(l) > body_lines.size()) {
            continue;
        }
        auto& text = body_lines[static_cast<std::size_t>(l - 1)];
        if (!text.empty() && text.back() == '\\') {
            continue;
        }
        text += "  ";
        text += llm::kStateChangingMarker;
    }
    std::string out = util::join(body_lines, "\n");
    if (!test.body.empty() && test.body.back() == '\n') {
        out += '\n';
    }
    return out;
}

ReplyParse parse_identification_reply(const subject::SubjectProject& project, const subject::TestCase& test,
                                      std::string_view reply) {
    ReplyParse out;
    out.annotated.base = test;
    const auto block = extract_code_block(reply);
    const std::string text = block.code ? *block.code : std::string(reply);

    const auto body_lines = util::split_lines(test.body);
    std::vector<std::string> norm_body;
    for (const auto& l : body_lines) {
        norm_body.push_back(normalize_code(l));
    }
    std::vector<bool> used(norm_body.size(), false);

    std::set<std::string> chosen;
    std::size_t cursor = 0;
    for (const auto& raw : util::split_lines(text)) {
        const auto code = normalize_code(raw);
        if (code.empty()) {
            continue;
        }
        // Match in order, so repeated identical lines pair up one by one.
        std::size_t hit = norm_body.size();
        for (std::size_t pass = 0; pass < 2 && hit == norm_body.size(); ++pass) {
            for (std::size_t i = pass == 0 ? cursor : 0; i < norm_body.size(); ++i) {
                if (!used[i] && norm_body[i] == code) {
                    hit = i;
                    break;
                }
            }
        }
        if (hit == norm_body.size()) {
            if (flagged(raw)) {
                out.annotated.warnings.push_back("flagged line not found in the test, ignored: " + util::trim(raw));
            }
            continue;
        }
        used[hit] = true;
        cursor = hit + 1;
        if (!util::starts_with(code, "def ") && !util::starts_with(code, "async def ")) {
            out.recognized = true;
        }
        if (!flagged(raw)) {
            continue;
        }
        const int line = static_cast<int>(hit) + 1;
        bool any = false;
        for (const auto& call : test.calls) {
            if (call.line == line) {
                chosen.insert(call.signature);
                any = true;
            }
        }
        if (!any) {
            out.annotated.warnings.push_back("flagged line " + std::to_string(line) +
                                             " has no resolved SUT call, ignored: " + util::trim(raw));
        }
    }

    for (const auto& sig : test.sut_calls) {
        const auto* m = project.method(sig);
        if ((m != nullptr && m->is_constructor) || chosen.count(sig) != 0) {
            out.annotated.state_changing.push_back(sig);
        }
    }
    out.annotated.annotated_body = annotate_body(test, out.annotated.state_changing);
    return out;
}

AnnotatedTest identify_state_changing(const subject::SubjectProject& project, const subject::TestCase& test,
                                      llm::Gateway& gateway, llm::Conversation& conversation) {
    if (test.sut_calls.empty()) {
        throw IdentificationError("test " + test.id + " calls no SUT method");
    }
    std::vector<const subject::MethodInfo*> impls;
    for (const auto& sig : test.sut_calls) {
        if (const auto* m = project.method(sig)) {
            impls.push_back(m);
        }
    }
    const auto prompt = llm::render_identification_prompt(test, impls);
    for (int round = 0; round < 2; ++round) {
        const auto& reply = gateway.send(conversation, prompt);
        auto parsed = parse_identification_reply(project, test, reply.content);
        if (parsed.recognized) {
            return std::move(parsed.annotated);
        }
    }
    throw IdentificationError("identification reply for " + test.id + " contains no recognizable test body");
}

}  // namespace fc::pipeline
