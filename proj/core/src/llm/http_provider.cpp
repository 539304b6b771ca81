#include <chrono>
#include <cstdlib>
#include <regex>

#include <httplib.h>

#include "fc/llm/provider.hpp"
#include "fc/util/text.hpp"

namespace fc::llm {

using nlohmann::json;

HttpProvider::HttpProvider(ProviderConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    if (const char* url = std::getenv("FC_PROVIDER_URL"); url != nullptr && *url != '\0') {
        config_.endpoint = url;
    }
    if (config_.endpoint.empty()) {
        throw ProviderError("http provider has no endpoint (set FC_PROVIDER_URL)");
    }
}

json HttpProvider::request_body(const std::string& model, const std::vector<PromptExchange>& conversation) {
    json messages = json::array();
    for (const auto& m : conversation) {
        messages.push_back(json{{"role", role_name(m.role)}, {"content", m.content}});
    }
    return json{{"model", model}, {"n", 1}, {"messages", messages}};
}

Completion HttpProvider::complete(const std::vector<PromptExchange>& conversation) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.endpoint, m, url_re)) {
        throw ProviderError("malformed provider endpoint: " + config_.endpoint);
    }
    const std::string origin = m[1];
    const std::string path = m[2].matched ? std::string(m[2]) : "/v1/chat/completions";

    httplib::Client client(origin);
    const auto timeout = std::chrono::milliseconds(static_cast<long long>(config_.request_timeout_s * 1000));
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count());
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count());
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path, headers, request_body(config_.model_name, conversation).dump(), "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (!res) {
        throw ProviderError("network failure: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
        throw ProviderError("auth failure: HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
    }

    Completion c;
    c.wall_time_ms = static_cast<std::uint64_t>(elapsed.count());
    try {
        const auto body = json::parse(res->body);
        c.content = body.at("choices").at(0).at("message").at("content").get<std::string>();
        if (body.contains("usage")) {
            c.input_tokens = body["usage"].value("prompt_tokens", std::uint64_t{0});
            c.output_tokens = body["usage"].value("completion_tokens", std::uint64_t{0});
        } else {
            for (const auto& msg : conversation) {
                c.input_tokens += util::estimate_tokens(msg.content);
            }
            c.output_tokens = util::estimate_tokens(c.content);
        }
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed provider response: ") + e.what());
    }
    return c;
}

}  // namespace fc::llm
