#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qa/action.hpp"
#include "qa/eraser.hpp"
#include "qa/kb_store.hpp"
#include "qa/llm.hpp"
#include "qa/ranker.hpp"
#include "qa/table_store.hpp"

namespace qa {

enum class CorrectionStrategy { Eraser, ZeroShotSC, FewShotSC, Off };

const char* correction_strategy_name(CorrectionStrategy s);
CorrectionStrategy parse_correction_strategy(const std::string& name);

struct StepRecord {
    int index = 0;
    std::string thought;
    std::string action_raw;
    std::optional<ParsedAction> action;
    std::string observation;
    bool was_correction = false;  // observation is a rendered guideline
};

struct Counters {
    long store_queries = 0;
    long llm_calls = 0;
    CostLedger ledger;
    long wall_ms = 0;
};

struct EpisodeTrace {
    std::string question;
    std::vector<std::string> entities;
    std::vector<StepRecord> steps;
    std::optional<AnswerSet> final_answer;
    Counters counters;
    std::string abort_reason;  // set when the gateway failed mid-episode
};

struct AgentConfig {
    int max_steps = 10;
    std::string instruction;        // task description + tool document
    std::string one_shot_example;
    CorrectionStrategy strategy = CorrectionStrategy::Eraser;
    unsigned seed = 0;
    size_t relation_threshold = 40;

    /// Test hook: called after every step with the committed state.
    std::function<void(const StepRecord&, const QueryProgram&, const MemorySnapshot&)>
        on_step;
};

/// One bound store; exactly one of kb/table is set.
struct Environment {
    const TripleStore* kb = nullptr;
    const Table* table = nullptr;

    Dialect dialect() const { return kb != nullptr ? Dialect::Triple : Dialect::Table; }
};

std::string default_instruction(Dialect dialect);
std::string default_one_shot_example(Dialect dialect);
std::string zero_shot_correction_text();
std::string few_shot_correction_text();

/// Task description + tool document + running example + question + entity
/// linking result, then one (thought, action, observation) block per prior
/// step, in that fixed order.
std::string assemble_prompt(const AgentConfig& config, const std::string& question,
                            const std::vector<std::string>& entities,
                            const std::vector<StepRecord>& steps_so_far);

/// The episode loop: generate, parse, execute against a tentative copy of
/// (program, memory), detect, then either inject a guideline and discard the
/// tentative state or commit it. Terminates on a successful execute() or
/// when the step budget runs out.
EpisodeTrace run_episode(const AgentConfig& config, const std::string& question,
                         const std::vector<std::string>& entities, const Environment& env,
                         LlmClient& llm, const TriggerRegistry& registry);

/// Stable text rendering of a trace for golden-file comparison; wall time is
/// deliberately not included.
std::string serialize_trace(const EpisodeTrace& trace);

}  // namespace qa
