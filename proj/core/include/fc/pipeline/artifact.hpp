#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/llm/prompts.hpp"

namespace fc::pipeline {

namespace fs = std::filesystem;

enum class FeedbackKind { SyntaxError, NoAssertion, NonSutMethod, UnqualifiedSignature, TestFailure, RecursiveCall, Timeout };

std::string_view feedback_kind_name(FeedbackKind kind);
FeedbackKind feedback_kind_from_name(std::string_view name);
llm::Stage stage_for(FeedbackKind kind);

struct Feedback {
    FeedbackKind kind;
    std::string message;
};

// Feedback texts with their slots filled.
namespace feedback {
Feedback syntax_error(std::string_view language);
Feedback no_assertion();
Feedback non_sut_method(const std::vector<std::string>& signatures);
Feedback unqualified_signature(const std::vector<std::string>& signatures);
Feedback test_failure(std::string_view logs);
Feedback recursive_call();
Feedback timeout(double cap_s);
}  // namespace feedback

// "30min" for 1800, "5min" for 300, "45s" for 45.
std::string format_cap(double cap_s);

enum class CheckerStatus { Draft, StaticallyValid, Validated, CrossValidated, Rejected };

std::string_view status_name(CheckerStatus status);
CheckerStatus status_from_name(std::string_view name);

struct CheckerArtifact {
    std::string id;
    std::string target;
    std::string checker_source;
    std::vector<std::string> handled_signatures;  // sorted, unique
    std::vector<std::string> state_changing;      // from identification
    std::vector<std::string> imports;             // of the target's test file
    CheckerStatus status = CheckerStatus::Draft;
    int attempts = 0;
    std::string transcript_ref;  // relative to the artifact directory
    std::vector<FeedbackKind> failure_history;
    std::string last_feedback;   // message of the last failure, if any
    std::string provider_error;  // set when the provider aborted the loop
    std::vector<CheckerStatus> status_history;

    // Moves forward along draft -> statically_valid -> validated ->
    // cross_validated, or to rejected. Throws std::logic_error otherwise.
    void advance(CheckerStatus next);

    // Signatures the instrumenter wraps for this checker.
    std::vector<std::string> instrumented_signatures() const;

    nlohmann::json meta_json() const;
    static CheckerArtifact from_meta(const nlohmann::json& meta, std::string source);
};

// `c_` followed by the first 8 hex digits of sha256(test id).
std::string checker_id_for(std::string_view test_id);

void save_artifact(const fs::path& dir, const CheckerArtifact& artifact);
CheckerArtifact load_artifact(const fs::path& dir);

// All artifacts under `checkers_root`, sorted by id.
std::vector<CheckerArtifact> load_artifacts(const fs::path& checkers_root);

// A checker that accepts every operation; used for behavioral-identity runs
// and overhead baselines.
CheckerArtifact noop_checker(std::vector<std::string> signatures);

}  // namespace fc::pipeline
