#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qa/errors.hpp"

namespace qa {

struct GenerationRequest {
    std::string prompt;
    std::string stop_at_action = "Action";  // truncate after the first complete Action line
    int max_output_tokens = 512;
};

struct GenerationResult {
    std::string text;
    long input_tokens = 0;
    long output_tokens = 0;
};

/// Token/cost accounting per episode, using the gpt-3.5-turbo price sheet:
/// input/1000 * $0.0015 + output/1000 * $0.0020.
struct CostLedger {
    long input_tokens = 0;
    long output_tokens = 0;

    void add(long input, long output);
    double dollars() const;

    CostLedger operator+(const CostLedger& other) const;
    bool operator==(const CostLedger&) const = default;
};

/// Whitespace-delimited token approximation for offline clients.
long approx_token_count(const std::string& text);

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual GenerationResult complete(const GenerationRequest& request) = 0;
};

/// Replays a fixed transcript: call i returns entry i. Exhaustion throws
/// TranscriptExhausted. Token counts use the whitespace approximation.
class ScriptedClient : public LlmClient {
public:
    explicit ScriptedClient(std::vector<std::string> entries);

    GenerationResult complete(const GenerationRequest& request) override;

    size_t calls_made() const { return next_; }
    size_t entries_total() const { return entries_.size(); }

    /// Transcript file: entries separated by lines starting with `#step`.
    static ScriptedClient load_file(const std::string& path);
    static std::vector<std::string> parse_transcript(const std::string& text);

private:
    std::vector<std::string> entries_;
    size_t next_ = 0;
};

struct HttpClientConfig {
    std::string endpoint;   // e.g. http://localhost:8080
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    int max_retries = 3;
    int timeout_seconds = 30;

    /// Reads QA_LLM_ENDPOINT / QA_LLM_API_KEY / QA_LLM_MODEL.
    static HttpClientConfig from_env();
};

/// Chat-completion client with bounded retries; records provider-reported
/// token usage when present, the approximation otherwise.
class HttpChatClient : public LlmClient {
public:
    explicit HttpChatClient(HttpClientConfig config);

    GenerationResult complete(const GenerationRequest& request) override;

private:
    HttpClientConfig config_;
};

/// Cuts the generation off after the first complete `Action N: ...` line.
std::string truncate_at_first_action(const std::string& text);

}  // namespace qa
