#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/error.hpp"
#include "fc/subject/project.hpp"

namespace fc::mutation {

namespace fs = std::filesystem;

enum class Operator { EmptyReturn, NegateConditional, BooleanLiteralFlip, ArithmeticSwap, ConstantNudge, RemoveInitializer };

std::string_view operator_name(Operator op);
Operator operator_from_name(std::string_view name);

enum class MutantStatus { NotCovered, KilledByTests, Survived, KilledByChecker };

std::string_view mutant_status_name(MutantStatus status);
MutantStatus mutant_status_from_name(std::string_view name);

struct MutantRecord {
    std::string id;  // m0001, ... in (file, span, operator) order
    Operator op = Operator::EmptyReturn;
    std::string file;
    subject::Span span;
    int line = 0;
    int end_line = 0;
    std::string method;  // signature of the enclosing method
    std::string original_snippet;
    std::string mutated_snippet;
    std::optional<MutantStatus> status;
    bool infra_skip = false;  // could not be applied; excluded from totals
    std::string note;

    nlohmann::json to_json() const;
    static MutantRecord from_json(const nlohmann::json& j);
};

class MutantApplyError : public InfraError {
public:
    using InfraError::InfraError;
};

// Every operator site inside the bodies of methods declared by a type in
// `scope` (`<ns>.<Type>` names). Throws std::invalid_argument on an empty
// scope.
std::vector<MutantRecord> generate_mutants(const subject::SubjectProject& project,
                                           const std::set<std::string>& scope);

// Sites of one module, for the given method spans.
std::vector<MutantRecord> mutants_for_source(const std::string& source, const std::string& file,
                                             const std::vector<const subject::MethodInfo*>& methods);

// Replaces the span in `root/file`; returns the previous file content.
// Throws MutantApplyError when the span no longer holds original_snippet.
std::string apply_mutant(const fs::path& root, const MutantRecord& mutant);
void revert_mutant(const fs::path& root, const MutantRecord& mutant, const std::string& original_content);

std::string mutate_text(const std::string& source, const MutantRecord& mutant);

}  // namespace fc::mutation
