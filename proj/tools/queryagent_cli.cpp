#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "qa/harness.hpp"

namespace {

qa::Environment make_env(const std::string& kb_path, const std::string& table_path,
                         std::unique_ptr<qa::TripleStore>& kb_holder,
                         std::unique_ptr<qa::Table>& table_holder) {
    qa::Environment env;
    if (!kb_path.empty()) {
        kb_holder = std::make_unique<qa::TripleStore>(qa::TripleStore::load_file(kb_path));
        env.kb = kb_holder.get();
    } else if (!table_path.empty()) {
        table_holder = std::make_unique<qa::Table>(qa::Table::load_file(table_path));
        env.table = table_holder.get();
    } else {
        throw qa::QueryError(qa::ErrorCode::BadFixture, "one of --kb/--table is required");
    }
    return env;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw qa::QueryError(qa::ErrorCode::BadFixture, "cannot write " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Step-by-step query construction agent with environmental-feedback "
                 "self-correction"};
    app.require_subcommand(1);

    // run
    std::string kb_path, table_path, question_file, llm_kind = "scripted", transcript,
                strategy = "eraser", trace_out;
    int max_steps = 10;
    unsigned seed = 0;
    auto* run = app.add_subcommand("run", "Answer a single question fixture");
    run->add_option("--kb", kb_path, "KB fixture (tab-separated triples)");
    run->add_option("--table", table_path, "Table fixture (CSV with #types line)");
    run->add_option("--question-file", question_file, "Question fixture (JSON)")->required();
    run->add_option("--llm", llm_kind, "scripted|http");
    run->add_option("--transcript", transcript, "Transcript for the scripted client");
    run->add_option("--max-steps", max_steps, "Step budget T");
    run->add_option("--strategy", strategy, "eraser|zeroshot|fewshot|off");
    run->add_option("--seed", seed, "Relation-ranking shuffle seed");
    run->add_option("--trace-out", trace_out, "Write the episode trace here");

    // bench
    std::string fixtures_path, metrics_out;
    int workers = 1;
    auto* bench = app.add_subcommand("bench", "Run a fixture suite and report metrics");
    bench->add_option("--kb", kb_path, "KB fixture");
    bench->add_option("--table", table_path, "Table fixture");
    bench->add_option("--fixtures", fixtures_path, "Fixture suite (JSON array)")->required();
    bench->add_option("--metrics-out", metrics_out, "Write the JSON report here");
    bench->add_option("--strategy", strategy, "eraser|zeroshot|fewshot|off");
    bench->add_option("--max-steps", max_steps, "Step budget T");
    bench->add_option("--seed", seed, "Relation-ranking shuffle seed");
    bench->add_option("--workers", workers, "Worker pool size");

    // replay
    std::string trace_path;
    auto* replay = app.add_subcommand("replay", "Validate a stored trace re-executes identically");
    replay->add_option("--kb", kb_path, "KB fixture");
    replay->add_option("--table", table_path, "Table fixture");
    replay->add_option("--question-file", question_file, "Question fixture (JSON)")->required();
    replay->add_option("--trace", trace_path, "Stored trace to validate")->required();
    replay->add_option("--strategy", strategy, "eraser|zeroshot|fewshot|off");
    replay->add_option("--max-steps", max_steps, "Step budget T");
    replay->add_option("--seed", seed, "Relation-ranking shuffle seed");

    CLI11_PARSE(app, argc, argv);

    try {
        std::unique_ptr<qa::TripleStore> kb_holder;
        std::unique_ptr<qa::Table> table_holder;
        qa::Environment env = make_env(kb_path, table_path, kb_holder, table_holder);

        if (run->parsed()) {
            qa::QuestionFixture fixture = qa::QuestionFixture::load_file(question_file);
            if (!transcript.empty()) fixture.transcript_path = transcript;

            qa::AgentConfig config;
            config.max_steps = max_steps;
            config.strategy = qa::parse_correction_strategy(strategy);
            config.seed = seed;
            config.instruction = qa::default_instruction(fixture.dialect);
            config.one_shot_example = qa::default_one_shot_example(fixture.dialect);
            qa::TriggerRegistry registry = qa::TriggerRegistry::standard();

            std::unique_ptr<qa::LlmClient> llm;
            if (llm_kind == "http") {
                llm = std::make_unique<qa::HttpChatClient>(qa::HttpClientConfig::from_env());
            } else {
                llm = std::make_unique<qa::ScriptedClient>(
                    qa::ScriptedClient::load_file(fixture.transcript_path));
            }

            qa::EpisodeTrace trace = qa::run_episode(config, fixture.question,
                                                     fixture.entities, env, *llm, registry);
            std::string serialized = qa::serialize_trace(trace);
            if (!trace_out.empty()) write_file(trace_out, serialized);
            std::cout << serialized;
            std::cout << "f1: "
                      << qa::f1_score(trace.final_answer.value_or(qa::AnswerSet{}),
                                      fixture.gold_answer)
                      << "\n";
            return 0;
        }

        qa::BenchmarkOptions options;
        options.strategy = qa::parse_correction_strategy(strategy);
        options.max_steps = max_steps;
        options.seed = seed;
        options.workers = workers;

        if (bench->parsed()) {
            auto fixtures = qa::load_fixture_suite(fixtures_path);
            qa::BenchmarkReport report = qa::run_benchmark(options, fixtures, env);
            if (!metrics_out.empty()) write_file(metrics_out, report.to_json());
            std::cout << report.render_text();
            return 0;
        }

        // replay
        qa::QuestionFixture fixture = qa::QuestionFixture::load_file(question_file);
        std::string problem = qa::replay_trace(trace_path, fixture, env, options);
        if (problem.empty()) {
            std::cout << "replay ok\n";
            return 0;
        }
        std::cerr << problem << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
