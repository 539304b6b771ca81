#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fc/error.hpp"
#include "fc/llm/provider.hpp"
#include "fc/subject/project.hpp"

namespace fc::pipeline {

struct AnnotatedTest {
    subject::TestCase base;
    std::vector<std::string> state_changing;  // in sut_calls order
    std::string annotated_body;
    std::vector<std::string> warnings;
};

class IdentificationError : public DomainError {
public:
    using DomainError::DomainError;
};

struct ReplyParse {
    bool recognized = false;  // at least one reply line matches a test line
    AnnotatedTest annotated;
};

// Maps flagged reply lines back to resolved calls of `test`; constructors are
// always added.
ReplyParse parse_identification_reply(const subject::SubjectProject& project, const subject::TestCase& test,
                                      std::string_view reply);

// `test.body` with the state-changing marker appended to every line holding
// a resolved call to one of `state_changing`.
std::string annotate_body(const subject::TestCase& test, const std::vector<std::string>& state_changing);

// Sends the identification prompt; an unrecognizable reply is retried once in
// the same conversation, after which IdentificationError is thrown.
AnnotatedTest identify_state_changing(const subject::SubjectProject& project, const subject::TestCase& test,
                                      llm::Gateway& gateway, llm::Conversation& conversation);

}  // namespace fc::pipeline
