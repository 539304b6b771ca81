#include "fc/llm/provider.hpp"

#include <cstdlib>

#include "fc/util/fs.hpp"
#include "fc/util/text.hpp"

namespace fc::llm {

using nlohmann::json;

ProviderConfig ProviderConfig::from_json(const json& j) {
    ProviderConfig c;
    const auto kind = j.value("kind", std::string("scripted"));
    if (kind == "scripted") {
        c.kind = Kind::Scripted;
    } else if (kind == "http") {
        c.kind = Kind::Http;
    } else {
        throw DomainError("provider kind must be 'http' or 'scripted', got '" + kind + "'");
    }
    c.endpoint = j.value("endpoint", c.endpoint);
    c.model_name = j.value("model_name", c.model_name);
    c.max_completions = j.value("max_completions", c.max_completions);
    c.script_path = j.value("script_path", std::string());
    c.request_timeout_s = j.value("request_timeout_s", c.request_timeout_s);
    if (c.max_completions != 1) {
        throw DomainError("provider max_completions must be 1");
    }
    return c;
}

json ProviderConfig::to_json() const {
    return json{{"kind", kind == Kind::Http ? "http" : "scripted"},
                {"endpoint", endpoint},
                {"model_name", model_name},
                {"max_completions", max_completions},
                {"script_path", script_path.string()},
                {"request_timeout_s", request_timeout_s}};
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> replies) : replies_(std::move(replies)) {}

std::unique_ptr<ScriptedProvider> ScriptedProvider::from_file(const std::filesystem::path& path,
                                                              const std::string& test_id) {
    json j;
    try {
        j = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw ProviderError("malformed script " + path.string() + ": " + e.what());
    }
    if (j.is_object()) {
        if (!j.contains(test_id)) {
            throw ProviderError("script " + path.string() + " has no replies for " + test_id);
        }
        j = j.at(test_id);
    }
    if (!j.is_array()) {
        throw ProviderError("script " + path.string() + " must be a JSON array of strings");
    }
    std::vector<std::string> replies;
    for (const auto& r : j) {
        if (!r.is_string()) {
            throw ProviderError("script " + path.string() + " must be a JSON array of strings");
        }
        replies.push_back(r.get<std::string>());
    }
    return std::make_unique<ScriptedProvider>(std::move(replies));
}

Completion ScriptedProvider::complete(const std::vector<PromptExchange>& conversation) {
    std::lock_guard lock(mu_);
    if (next_ >= replies_.size()) {
        throw ProviderError("script exhausted");
    }
    Completion c;
    c.content = replies_[next_++];
    for (const auto& m : conversation) {
        c.input_tokens += util::estimate_tokens(m.content);
    }
    c.output_tokens = util::estimate_tokens(c.content);
    return c;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mu_);
    return replies_.size() - next_;
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config, const std::string& test_id,
                                        const std::filesystem::path& base_dir) {
    if (config.kind == ProviderConfig::Kind::Scripted) {
        auto path = config.script_path;
        if (path.empty()) {
            throw DomainError("scripted provider needs script_path");
        }
        if (path.is_relative() && !base_dir.empty()) {
            path = base_dir / path;
        }
        return ScriptedProvider::from_file(path, test_id);
    }
    const char* key = std::getenv("FC_API_KEY");
    return std::make_unique<HttpProvider>(config, key != nullptr ? key : "");
}

const PromptExchange& Gateway::send(Conversation& conversation, std::string user_content) {
    PromptExchange user;
    user.role = Role::User;
    user.content = std::move(user_content);
    conversation.append(std::move(user));

    const auto reply = provider_.complete(conversation.messages());

    PromptExchange assistant;
    assistant.role = Role::Assistant;
    assistant.content = reply.content;
    assistant.input_tokens = reply.input_tokens;
    assistant.output_tokens = reply.output_tokens;
    assistant.wall_time_ms = reply.wall_time_ms;
    conversation.append(std::move(assistant));
    {
        std::lock_guard lock(mu_);
        usage_ += TokenUsage{reply.input_tokens, reply.output_tokens, reply.wall_time_ms, 1};
    }
    return conversation.messages().back();
}

TokenUsage Gateway::usage() const {
    std::lock_guard lock(mu_);
    return usage_;
}

}  // namespace fc::llm
