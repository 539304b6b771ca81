#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fc/llm/provider.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/pipeline/identify.hpp"

namespace fc::pipeline {

struct CodeBlock {
    std::optional<std::string> code;  // first fenced block
    std::size_t blocks = 0;
};

CodeBlock extract_code_block(std::string_view reply);

struct Candidate {
    std::optional<std::string> source;  // nullopt: reply had no code block
    std::vector<std::string> warnings;
};

Candidate candidate_from_reply(std::string_view reply);

// Sends the generation prompt in `conversation` and returns the reply's
// candidate checker (or the SyntaxError feedback when it has no code).
Candidate generate_checker(const AnnotatedTest& annotated, const std::vector<std::string>& imports,
                           const std::vector<subject::TestCase>& context, llm::Gateway& gateway,
                           llm::Conversation& conversation);

}  // namespace fc::pipeline
