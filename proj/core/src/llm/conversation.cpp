#include "fc/llm/conversation.hpp"

#include <fstream>
#include <stdexcept>

#include "fc/error.hpp"
#include "fc/util/fs.hpp"

namespace fc::llm {

using nlohmann::json;

std::string_view role_name(Role role) {
    switch (role) {
        case Role::System:
            return "system";
        case Role::User:
            return "user";
        case Role::Assistant:
            return "assistant";
    }
    return "user";
}

Role role_from_name(std::string_view name) {
    if (name == "system") {
        return Role::System;
    }
    if (name == "user") {
        return Role::User;
    }
    if (name == "assistant") {
        return Role::Assistant;
    }
    throw std::invalid_argument("unknown role: " + std::string(name));
}

json PromptExchange::to_json() const {
    return json{{"role", role_name(role)},
                {"content", content},
                {"input_tokens", input_tokens},
                {"output_tokens", output_tokens},
                {"wall_time_ms", wall_time_ms}};
}

PromptExchange PromptExchange::from_json(const json& j) {
    PromptExchange e;
    e.role = role_from_name(j.at("role").get<std::string>());
    e.content = j.at("content").get<std::string>();
    e.input_tokens = j.value("input_tokens", std::uint64_t{0});
    e.output_tokens = j.value("output_tokens", std::uint64_t{0});
    e.wall_time_ms = j.value("wall_time_ms", std::uint64_t{0});
    return e;
}

Conversation::Conversation(std::string label, std::filesystem::path transcript)
    : label_(std::move(label)), transcript_(std::move(transcript)) {}

void Conversation::append(PromptExchange exchange) {
    if (!transcript_.empty()) {
        auto line = exchange.to_json();
        line["conversation"] = label_;
        util::append_file(transcript_, line.dump() + "\n");
    }
    messages_.push_back(std::move(exchange));
}

std::vector<PromptExchange> read_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InfraError("cannot read transcript " + path.string());
    }
    std::vector<PromptExchange> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(PromptExchange::from_json(json::parse(line)));
        }
    }
    return out;
}

}  // namespace fc::llm
