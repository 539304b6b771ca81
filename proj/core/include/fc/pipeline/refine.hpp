#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fc/corpus/selector.hpp"
#include "fc/llm/provider.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/pipeline/identify.hpp"
#include "fc/subject/project.hpp"

namespace fc::pipeline {

struct RefineOptions {
    int max_attempts = 125;
    int same_kind_cutoff = 5;
};

// Runs a statically valid checker against its validation tests. Returns the
// feedback on failure; on success leaves the artifact validated.
using DynamicCheck = std::function<std::optional<Feedback>(CheckerArtifact&, const corpus::CorpusSplit&)>;

// Evaluates candidates until one validates or the policy rejects: `attempts`
// counts evaluated candidates; rejection happens after `same_kind_cutoff`
// consecutive failures of one kind or when attempts reach `max_attempts`.
// `seed` carries id, target, state_changing and imports. The first prompt is
// sent in `conversation`; every refinement continues that conversation.
CheckerArtifact refine_loop(const CheckerArtifact& seed, const subject::SubjectProject& project,
                            llm::Gateway& gateway, llm::Conversation& conversation, const std::string& first_prompt,
                            const corpus::CorpusSplit& split, const RefineOptions& options,
                            const DynamicCheck& dynamic_check, std::vector<std::string>* warnings = nullptr);

struct TargetOptions {
    RefineOptions refine;
    std::size_t context_budget = 30000;
    std::size_t validation_extra = 20;
    std::uint64_t seed = 0;
};

struct TargetRun {
    CheckerArtifact artifact;
    std::optional<AnnotatedTest> annotated;
    corpus::CorpusSplit split;
    llm::TokenUsage usage;
    double wall_time_s = 0.0;
    std::vector<std::string> warnings;
};

// identify -> split -> generate -> refine, persisting the artifact directory
// `<checkers_root>/<id>/` (checker.src, meta.json, transcript.jsonl,
// split.json).
TargetRun run_target(const subject::SubjectProject& project, const std::vector<subject::TestCase>& population,
                     const subject::TestCase& target, llm::Provider& provider, const TargetOptions& options,
                     const DynamicCheck& dynamic_check, const std::filesystem::path& checkers_root);

}  // namespace fc::pipeline
