#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fc/llm/conversation.hpp"
#include "fc/llm/provider.hpp"
#include "fc/subject/project.hpp"

namespace fc {

namespace fs = std::filesystem;

struct Budgets {
    std::size_t context_tokens = 30000;
    int max_attempts = 125;
    int same_kind_cutoff = 5;
    std::size_t validation_extra = 20;
};

struct Caps {
    double validation_timeout_seconds = 1800.0;
};

// Prices are per million tokens and always user supplied.
struct Pricing {
    double input_per_million = 0.0;
    double output_per_million = 0.0;
    std::string currency = "USD";

    double cost(const llm::TokenUsage& usage) const;
    double cost(std::uint64_t input_tokens, std::uint64_t output_tokens) const;
};

// flycatcher.json. Relative paths resolve against the file's directory,
// which is also the project root unless "root" says otherwise.
struct Config {
    subject::ProjectConfig project;
    llm::ProviderConfig provider;
    Budgets budgets;
    Caps caps;
    Pricing pricing;
    std::string on_violation = "raise";
    double overhead_noise_bound = 0.05;
    fs::path base_dir;
    fs::path project_root;

    static Config load(const fs::path& path);
    static Config from_json(const nlohmann::json& j, const fs::path& base_dir);
    nlohmann::json to_json() const;
};

}  // namespace fc
