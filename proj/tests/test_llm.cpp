#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qa/llm.hpp"
#include "test_util.hpp"

using namespace qa;

TEST_CASE("cost accounting follows the published price sheet") {
    CostLedger ledger;
    CHECK(ledger.dollars() == doctest::Approx(0.0).epsilon(1e-12));

    ledger.add(2000, 500);
    CHECK(ledger.dollars() == doctest::Approx(0.004).epsilon(1e-9));

    CostLedger other;
    other.add(1000, 1000);
    CHECK(other.dollars() == doctest::Approx(0.0035).epsilon(1e-9));

    auto sum = ledger + other;
    CHECK(sum.input_tokens == 3000);
    CHECK(sum.output_tokens == 1500);
    CHECK(sum.dollars() == doctest::Approx(ledger.dollars() + other.dollars()).epsilon(1e-12));
}

TEST_CASE("token approximation counts whitespace-delimited words") {
    CHECK(approx_token_count("") == 0);
    CHECK(approx_token_count("   \n\t ") == 0);
    CHECK(approx_token_count("one") == 1);
    CHECK(approx_token_count("Thought 1: look at the\nrelations first") == 7);
}

TEST_CASE("generations are cut after the first complete action line") {
    std::string text = "Thought 2: done.\nAction 2: execute()\nThought 3: hallucinated\n"
                       "Action 3: get_relation(m.x)";
    CHECK(truncate_at_first_action(text) == "Thought 2: done.\nAction 2: execute()");
    CHECK(truncate_at_first_action("no action here") == "no action here");
}

TEST_CASE("scripted client replays entries in order and then fails loudly") {
    ScriptedClient client({"first", "second"});
    CHECK(client.entries_total() == 2);

    auto a = client.complete({"prompt one two"});
    CHECK(a.text == "first");
    CHECK(a.input_tokens == 3);
    CHECK(a.output_tokens == 1);
    CHECK(client.complete({"p"}).text == "second");
    CHECK(client.calls_made() == 2);

    try {
        client.complete({"p"});
        FAIL("expected TranscriptExhausted");
    } catch (const QueryError& e) {
        CHECK(e.code() == ErrorCode::TranscriptExhausted);
    }
}

TEST_CASE("transcript files split on #step lines") {
    auto entries = ScriptedClient::parse_transcript(
        "#step 1\nThought 1: a\nAction 1: execute()\n#step 2\nThought 2: b\n\n"
        "Action 2: execute()\n");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0] == "Thought 1: a\nAction 1: execute()");
    CHECK(entries[1] == "Thought 2: b\n\nAction 2: execute()");

    // Text before the first marker is ignored; an empty transcript is empty.
    CHECK(ScriptedClient::parse_transcript("preamble\n").empty());

    auto from_file =
        ScriptedClient::load_file(qa::test::fixture_path("transcripts/q01.txt"));
    CHECK(from_file.entries_total() == 4);
}

TEST_CASE("http client round-trips against a local stub server") {
    httplib::Server server;
    std::atomic<int> requests{0};
    nlohmann::json last_body;
    server.Post("/v1/chat/completions",
                [&](const httplib::Request& req, httplib::Response& res) {
                    ++requests;
                    last_body = nlohmann::json::parse(req.body);
                    nlohmann::json reply = {
                        {"choices",
                         {{{"message",
                            {{"role", "assistant"},
                             {"content", "Thought 1: ok.\nAction 1: execute()\ngarbage"}}}}}},
                        {"usage", {{"prompt_tokens", 42}, {"completion_tokens", 7}}},
                    };
                    res.set_content(reply.dump(), "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpClientConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port);
    config.api_key = "sk-test";
    HttpChatClient client(config);

    auto result = client.complete({"hello there"});
    CHECK(result.text == "Thought 1: ok.\nAction 1: execute()");
    CHECK(result.input_tokens == 42);
    CHECK(result.output_tokens == 7);
    CHECK(requests == 1);
    CHECK(last_body["model"] == "gpt-3.5-turbo");
    CHECK(last_body["temperature"] == 0);
    CHECK(last_body["messages"][0]["content"] == "hello there");

    server.stop();
    server_thread.join();
}

TEST_CASE("http client retries transient failures and gives up cleanly") {
    httplib::Server server;
    std::atomic<int> requests{0};
    server.Post("/v1/chat/completions",
                [&](const httplib::Request&, httplib::Response& res) {
                    int n = ++requests;
                    if (n < 3) {
                        res.status = 500;
                        return;
                    }
                    nlohmann::json reply = {
                        {"choices",
                         {{{"message", {{"content", "Action 1: execute()"}}}}}},
                    };
                    res.set_content(reply.dump(), "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpClientConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port);
    HttpChatClient client(config);

    // Two 500s, then success; usage is absent so tokens fall back to the
    // approximation.
    auto result = client.complete({"one two three"});
    CHECK(result.text == "Action 1: execute()");
    CHECK(requests == 3);
    CHECK(result.input_tokens == 3);
    CHECK(result.output_tokens == 3);

    // Persistent failure exhausts the retry budget.
    requests = 100;  // handler keeps returning 200 now, so point at a bad path
    HttpClientConfig bad = config;
    bad.path = "/nowhere";
    bad.max_retries = 2;
    HttpChatClient failing(bad);
    try {
        failing.complete({"x"});
        FAIL("expected HttpFailure");
    } catch (const QueryError& e) {
        CHECK(e.code() == ErrorCode::HttpFailure);
    }

    server.stop();
    server_thread.join();
}

TEST_CASE("misconfiguration is rejected up front") {
    CHECK_THROWS_AS(HttpChatClient{HttpClientConfig{}}, QueryError);
}
