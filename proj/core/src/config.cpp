#include "fc/config.hpp"

#include "fc/error.hpp"
#include "fc/util/fs.hpp"

namespace fc {

double Pricing::cost(std::uint64_t input_tokens, std::uint64_t output_tokens) const {
    return static_cast<double>(input_tokens) * input_per_million / 1e6 +
           static_cast<double>(output_tokens) * output_per_million / 1e6;
}

double Pricing::cost(const llm::TokenUsage& usage) const { return cost(usage.input, usage.output); }

Config Config::from_json(const nlohmann::json& j, const fs::path& base_dir) {
    if (!j.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    Config c;
    c.base_dir = base_dir;
    try {
        c.project = subject::ProjectConfig::from_json(j.value("project", nlohmann::json::object()));
        if (j.contains("provider")) {
            c.provider = llm::ProviderConfig::from_json(j.at("provider"));
        }
        const auto b = j.value("budgets", nlohmann::json::object());
        c.budgets.context_tokens = b.value("context_tokens", c.budgets.context_tokens);
        c.budgets.max_attempts = b.value("max_attempts", c.budgets.max_attempts);
        c.budgets.same_kind_cutoff = b.value("same_kind_cutoff", c.budgets.same_kind_cutoff);
        c.budgets.validation_extra = b.value("validation_extra", c.budgets.validation_extra);
        const auto caps = j.value("caps", nlohmann::json::object());
        c.caps.validation_timeout_seconds = caps.value("validation_timeout_seconds", c.caps.validation_timeout_seconds);
        const auto p = j.value("pricing", nlohmann::json::object());
        c.pricing.input_per_million = p.value("input_per_million", 0.0);
        c.pricing.output_per_million = p.value("output_per_million", 0.0);
        c.pricing.currency = p.value("currency", c.pricing.currency);
        c.on_violation = j.value("on_violation", c.on_violation);
        c.overhead_noise_bound = j.value("overhead_noise_bound", c.overhead_noise_bound);
        c.project_root = base_dir / j.value("root", std::string("."));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("invalid config: ") + e.what());
    }
    if (c.on_violation != "raise" && c.on_violation != "log") {
        throw DomainError("on_violation must be \"raise\" or \"log\"");
    }
    if (c.budgets.context_tokens == 0 || c.budgets.max_attempts < 1 || c.budgets.same_kind_cutoff < 1) {
        throw DomainError("budgets must be positive");
    }
    if (c.caps.validation_timeout_seconds <= 0) {
        throw DomainError("validation_timeout_seconds must be positive");
    }
    if (!c.provider.script_path.empty() && c.provider.script_path.is_relative()) {
        c.provider.script_path = base_dir / c.provider.script_path;
    }
    return c;
}

Config Config::load(const fs::path& path) {
    if (!fs::exists(path)) {
        throw DomainError("config file not found: " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("config is not valid JSON: " + std::string(e.what()));
    }
    return from_json(j, fs::absolute(path).parent_path());
}

nlohmann::json Config::to_json() const {
    return {{"project", project.to_json()},
            {"provider", provider.to_json()},
            {"budgets",
             {{"context_tokens", budgets.context_tokens},
              {"max_attempts", budgets.max_attempts},
              {"same_kind_cutoff", budgets.same_kind_cutoff},
              {"validation_extra", budgets.validation_extra}}},
            {"caps", {{"validation_timeout_seconds", caps.validation_timeout_seconds}}},
            {"pricing",
             {{"input_per_million", pricing.input_per_million},
              {"output_per_million", pricing.output_per_million},
              {"currency", pricing.currency}}},
            {"on_violation", on_violation},
            {"overhead_noise_bound", overhead_noise_bound}};
}

}  // namespace fc
