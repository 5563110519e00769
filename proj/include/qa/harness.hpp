#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qa/agent.hpp"

namespace qa {

/// One benchmark item: desk-scale stand-in for a dataset question, with gold
/// entities supplied (no entity linker) and an optional scripted transcript.
struct QuestionFixture {
    std::string id;
    std::string question;
    std::vector<std::string> entities;
    AnswerSet gold_answer;
    Dialect dialect = Dialect::Triple;
    std::string transcript_path;  // relative to the fixture file

    static QuestionFixture load_file(const std::string& path);
};

/// Loads a JSON array of fixtures; transcript paths resolve relative to the
/// fixture file's directory.
std::vector<QuestionFixture> load_fixture_suite(const std::string& path);

struct QuestionReport {
    std::string id;
    double f1 = 0;
    int denotation = 0;
    long steps = 0;
    long corrections = 0;
    long store_queries = 0;
    long llm_calls = 0;
    double cost = 0;
    long wall_ms = 0;
    std::string error;  // per-question failure; the batch keeps going
};

struct BenchmarkReport {
    std::vector<QuestionReport> questions;
    double macro_f1 = 0;
    double denotation_accuracy = 0;  // TABLE questions only; -1 when none
    double mean_tpq_ms = 0;
    double mean_qpq = 0;
    double mean_cpq = 0;
    long total_store_queries = 0;
    long total_llm_calls = 0;

    std::string to_json() const;
    std::string render_text() const;
};

struct BenchmarkOptions {
    CorrectionStrategy strategy = CorrectionStrategy::Eraser;
    int max_steps = 10;
    unsigned seed = 0;
    int workers = 1;
};

/// Runs every fixture with its scripted transcript and aggregates the
/// metrics. Episode failures are recorded per question, never fatal.
BenchmarkReport run_benchmark(const BenchmarkOptions& options,
                              const std::vector<QuestionFixture>& fixtures,
                              const Environment& env);

/// Re-runs the episode recorded in a trace file and checks the serialized
/// result is byte-identical. Returns an empty string on success, a message
/// otherwise.
std::string replay_trace(const std::string& trace_path, const QuestionFixture& fixture,
                         const Environment& env, const BenchmarkOptions& options);

}  // namespace qa
