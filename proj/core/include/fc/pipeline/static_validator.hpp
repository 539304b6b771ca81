#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fc/pipeline/artifact.hpp"
#include "fc/subject/project.hpp"

namespace fc::pipeline {

// Assertion helpers every checker may call.
const std::vector<std::string>& shim_assertion_helpers();

// String literals compared against `<op>.signature`, where `<op>` is the
// checker's first parameter: ==/!=, `in`/`not in` over a literal tuple, list
// or set, match/case, and one-level aliases (`sig = op.signature`). In order
// of appearance, unique. Requires parseable source.
std::vector<std::string> signature_literals(const std::string& checker_source);

// Runs the four static checks in order; on success records the handled
// signatures and advances the artifact to statically_valid.
std::optional<Feedback> static_validate(CheckerArtifact& artifact, const subject::SubjectProject& project);

}  // namespace fc::pipeline
