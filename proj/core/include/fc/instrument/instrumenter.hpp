#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fc/error.hpp"
#include "fc/pipeline/artifact.hpp"
#include "fc/subject/project.hpp"

namespace fc::instrument {

namespace fs = std::filesystem;

inline constexpr std::string_view kMarker = "# fc-instrumented";
inline constexpr std::string_view kImportLine = "import fc_runtime as _fc";

class InstrumentError : public DomainError {
public:
    using DomainError::DomainError;
};

struct InstrumentationPlan {
    std::vector<pipeline::CheckerArtifact> checkers;  // sorted by id
    std::map<std::string, std::vector<std::string>> targets;  // signature -> checker ids, sorted
    fs::path output_root;
    std::string on_violation = "raise";

    // Targets every checker's instrumented_signatures(); throws
    // InstrumentError for a signature missing from the method index.
    static InstrumentationPlan build(std::vector<pipeline::CheckerArtifact> checkers,
                                     const subject::SubjectProject& project, fs::path output_root,
                                     std::string on_violation = "raise");
};

struct MethodTarget {
    std::string signature;
    std::vector<std::string> checker_ids;
    subject::Span span;  // MethodInfo::span of the method in the original file
    bool is_constructor = false;
};

struct InstrumentResult {
    std::map<std::string, std::vector<std::string>> wrapped;  // file -> signatures
};

// Rewrites one module. Throws InstrumentError when a target is not found, is
// a generator, or the source already carries the marker.
std::string instrument_source(const std::string& source, const std::vector<MethodTarget>& targets);

// Copies the project to plan.output_root, rewrites targeted files, emits the
// runtime shim and one scaffolded module per checker.
InstrumentResult instrument(const subject::SubjectProject& project, const InstrumentationPlan& plan);

bool has_marker(std::string_view source);

}  // namespace fc::instrument
