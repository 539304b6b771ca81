#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fc::llm {

enum class Role { System, User, Assistant };

std::string_view role_name(Role role);
Role role_from_name(std::string_view name);

struct PromptExchange {
    Role role = Role::User;
    std::string content;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    std::uint64_t wall_time_ms = 0;

    nlohmann::json to_json() const;
    static PromptExchange from_json(const nlohmann::json& j);
};

// Append-only message list. When a transcript path is set, every appended
// exchange is also written there as one JSON line tagged with `label`.
class Conversation {
public:
    explicit Conversation(std::string label = "chat", std::filesystem::path transcript = {});

    void append(PromptExchange exchange);

    const std::vector<PromptExchange>& messages() const { return messages_; }
    std::size_t size() const { return messages_.size(); }
    bool empty() const { return messages_.empty(); }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    std::filesystem::path transcript_;
    std::vector<PromptExchange> messages_;
};

std::vector<PromptExchange> read_transcript(const std::filesystem::path& path);

struct TokenUsage {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t wall_time_ms = 0;
    std::uint64_t calls = 0;

    std::uint64_t total() const { return input + output; }
    TokenUsage& operator+=(const TokenUsage& o) {
        input += o.input;
        output += o.output;
        wall_time_ms += o.wall_time_ms;
        calls += o.calls;
        return *this;
    }
};

}  // namespace fc::llm
