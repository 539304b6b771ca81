#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fc/subject/project.hpp"

namespace fc::llm {

// Line comment flagging state-changing calls in an annotated test.
inline constexpr std::string_view kStateChangingMarker = "# state-changing";

enum class Stage { Compile, Instrument, Execute };
std::string_view stage_word(Stage stage);

struct FewShotExample {
    std::string name;
    std::string test;     // annotated
    std::string checker;  // a single function
};

const std::vector<std::string>& generation_guidelines();
const std::vector<FewShotExample>& few_shot_examples();

std::string render_identification_prompt(const subject::TestCase& test,
                                         const std::vector<const subject::MethodInfo*>& impls);

// Never includes SUT method bodies: only the annotated target, its imports and
// the context tests' bodies.
std::string render_generation_prompt(std::string_view annotated_test, const std::vector<std::string>& imports,
                                     const std::vector<subject::TestCase>& context);

// Throws std::invalid_argument on an empty error.
std::string render_refinement_prompt(Stage stage, std::string_view error);

}  // namespace fc::llm
