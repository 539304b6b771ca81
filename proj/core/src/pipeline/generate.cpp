#include "fc/pipeline/generate.hpp"

#include "fc/llm/prompts.hpp"
#include "fc/util/text.hpp"

namespace fc::pipeline {

CodeBlock extract_code_block(std::string_view reply) {
    CodeBlock out;
    const auto lines = util::split_lines(reply);
    bool inside = false;
    std::string current;
    for (const auto& line : lines) {
        const auto t = util::trim(line);
        if (!inside) {
            if (util::starts_with(t, "```")) {
                inside = true;
                current.clear();
            }
            continue;
        }
        if (util::starts_with(t, "```")) {
            inside = false;
            if (++out.blocks == 1) {
                out.code = current;
            }
            continue;
        }
        current += line;
        current += '\n';
    }
    return out;
}

Candidate candidate_from_reply(std::string_view reply) {
    Candidate c;
    const auto block = extract_code_block(reply);
    c.source = block.code;
    if (block.blocks > 1) {
        c.warnings.push_back("reply contains " + std::to_string(block.blocks) +
                             " code blocks; using the first");
    }
    return c;
}

Candidate generate_checker(const AnnotatedTest& annotated, const std::vector<std::string>& imports,
                           const std::vector<subject::TestCase>& context, llm::Gateway& gateway,
                           llm::Conversation& conversation) {
    const auto prompt = llm::render_generation_prompt(annotated.annotated_body, imports, context);
    const auto& reply = gateway.send(conversation, prompt);
    return candidate_from_reply(reply.content);
}

}  // namespace fc::pipeline
