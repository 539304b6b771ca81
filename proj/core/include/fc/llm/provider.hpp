#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fc/error.hpp"
#include "fc/llm/conversation.hpp"

namespace fc::llm {

struct ProviderConfig {
    enum class Kind { Http, Scripted };
    Kind kind = Kind::Scripted;
    std::string endpoint;  // http kind; FC_PROVIDER_URL overrides
    std::string model_name;
    int max_completions = 1;
    std::filesystem::path script_path;  // scripted kind
    double request_timeout_s = 600.0;

    static ProviderConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Network, auth and script-exhaustion failures. They end the current
// checker's attempts, not the run.
class ProviderError : public InfraError {
public:
    using InfraError::InfraError;
};

struct Completion {
    std::string content;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    std::uint64_t wall_time_ms = 0;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual Completion complete(const std::vector<PromptExchange>& conversation) = 0;
};

// Replays canned replies in order; token counts are estimated from text so
// runs are reproducible.
class ScriptedProvider final : public Provider {
public:
    explicit ScriptedProvider(std::vector<std::string> replies);

    // A script file is either a JSON array of replies (used for every target)
    // or an object mapping test ids to arrays.
    static std::unique_ptr<ScriptedProvider> from_file(const std::filesystem::path& path, const std::string& test_id);

    Completion complete(const std::vector<PromptExchange>& conversation) override;
    std::size_t remaining() const;

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
    mutable std::mutex mu_;
};

// OpenAI-style chat completions over HTTP(S).
class HttpProvider final : public Provider {
public:
    HttpProvider(ProviderConfig config, std::string api_key);
    Completion complete(const std::vector<PromptExchange>& conversation) override;

    static nlohmann::json request_body(const std::string& model, const std::vector<PromptExchange>& conversation);

private:
    ProviderConfig config_;
    std::string api_key_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config, const std::string& test_id,
                                        const std::filesystem::path& base_dir = {});

// Sends user turns through a provider and accumulates usage. Thread-safe;
// each conversation must be driven by a single thread.
class Gateway {
public:
    explicit Gateway(Provider& provider) : provider_(provider) {}

    // Appends `user_content` and the reply to `conversation`; returns the reply.
    const PromptExchange& send(Conversation& conversation, std::string user_content);

    TokenUsage usage() const;

private:
    Provider& provider_;
    mutable std::mutex mu_;
    TokenUsage usage_;
};

}  // namespace fc::llm
