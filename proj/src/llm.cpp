#include "qa/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace qa {

void CostLedger::add(long input, long output) {
    input_tokens += input;
    output_tokens += output;
}

double CostLedger::dollars() const {
    return input_tokens / 1000.0 * 0.0015 + output_tokens / 1000.0 * 0.0020;
}

CostLedger CostLedger::operator+(const CostLedger& other) const {
    return {input_tokens + other.input_tokens, output_tokens + other.output_tokens};
}

long approx_token_count(const std::string& text) {
    long count = 0;
    bool in_token = false;
    for (char c : text) {
        bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!ws && !in_token) ++count;
        in_token = !ws;
    }
    return count;
}

std::string truncate_at_first_action(const std::string& text) {
    static const std::regex action_re(R"(Action\s*\d+\s*:[^\n]*)");
    std::smatch m;
    if (std::regex_search(text, m, action_re)) {
        return text.substr(0, static_cast<size_t>(m.position(0)) + m.length(0));
    }
    return text;
}

ScriptedClient::ScriptedClient(std::vector<std::string> entries)
    : entries_(std::move(entries)) {}

GenerationResult ScriptedClient::complete(const GenerationRequest& request) {
    if (request.prompt.empty()) {
        throw QueryError(ErrorCode::EngineError, "empty prompt");
    }
    if (next_ >= entries_.size()) {
        throw QueryError(ErrorCode::TranscriptExhausted,
                         "call " + std::to_string(next_ + 1) + " of a " +
                             std::to_string(entries_.size()) + "-entry transcript");
    }
    GenerationResult result;
    result.text = truncate_at_first_action(entries_[next_++]);
    result.input_tokens = approx_token_count(request.prompt);
    result.output_tokens = approx_token_count(result.text);
    return result;
}

std::vector<std::string> ScriptedClient::parse_transcript(const std::string& text) {
    std::vector<std::string> entries;
    std::istringstream in(text);
    std::string line;
    std::string current;
    bool started = false;
    auto flush = [&]() {
        if (!started) return;
        while (!current.empty() && current.back() == '\n') current.pop_back();
        entries.push_back(current);
        current.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#step", 0) == 0) {
            flush();
            started = true;
            continue;
        }
        if (started) current += line + "\n";
    }
    flush();
    return entries;
}

ScriptedClient ScriptedClient::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QueryError(ErrorCode::BadFixture, "cannot open transcript " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return ScriptedClient(parse_transcript(buf.str()));
}

HttpClientConfig HttpClientConfig::from_env() {
    HttpClientConfig config;
    if (const char* e = std::getenv("QA_LLM_ENDPOINT")) config.endpoint = e;
    if (const char* k = std::getenv("QA_LLM_API_KEY")) config.api_key = k;
    if (const char* m = std::getenv("QA_LLM_MODEL")) config.model = m;
    return config;
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) {
        throw QueryError(ErrorCode::HttpFailure, "no endpoint configured");
    }
}

GenerationResult HttpChatClient::complete(const GenerationRequest& request) {
    if (request.prompt.empty()) {
        throw QueryError(ErrorCode::EngineError, "empty prompt");
    }
    nlohmann::json body = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", 0},
        {"max_tokens", request.max_output_tokens},
    };
    const std::string payload = body.dump();

    httplib::Client client(config_.endpoint);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    int last_status = 0;
    for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        }
        auto res = client.Post(config_.path, headers, payload, "application/json");
        if (!res) {
            last_status = -1;
            continue;
        }
        last_status = res->status;
        if (res->status != 200) continue;
        auto reply = nlohmann::json::parse(res->body);
        GenerationResult result;
        result.text = truncate_at_first_action(
            reply.at("choices").at(0).at("message").at("content").get<std::string>());
        if (reply.contains("usage")) {
            result.input_tokens = reply["usage"].value("prompt_tokens", 0);
            result.output_tokens = reply["usage"].value("completion_tokens", 0);
        } else {
            result.input_tokens = approx_token_count(request.prompt);
            result.output_tokens = approx_token_count(result.text);
        }
        return result;
    }
    throw QueryError(ErrorCode::HttpFailure,
                     "status " + std::to_string(last_status) + " after " +
                         std::to_string(config_.max_retries) + " attempts");
}

}  // namespace qa
