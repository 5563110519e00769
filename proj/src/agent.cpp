#include "qa/agent.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace qa {

const char* correction_strategy_name(CorrectionStrategy s) {
    switch (s) {
        case CorrectionStrategy::Eraser: return "eraser";
        case CorrectionStrategy::ZeroShotSC: return "zeroshot";
        case CorrectionStrategy::FewShotSC: return "fewshot";
        case CorrectionStrategy::Off: return "off";
    }
    return "off";
}

CorrectionStrategy parse_correction_strategy(const std::string& name) {
    if (name == "eraser") return CorrectionStrategy::Eraser;
    if (name == "zeroshot") return CorrectionStrategy::ZeroShotSC;
    if (name == "fewshot") return CorrectionStrategy::FewShotSC;
    if (name == "off") return CorrectionStrategy::Off;
    throw QueryError(ErrorCode::BadFixture, "unknown strategy '" + name + "'");
}

std::string default_instruction(Dialect dialect) {
    if (dialect == Dialect::Triple) {
        return "You are answering a question over a knowledge base by building a query "
               "step by step.\n"
               "At each step write one Thought line and one Action line.\n"
               "Available functions:\n"
               "get_relation(entity_or_variable): get the one-hop relations of an entity "
               "or a variable.\n"
               "add_fact(head, relation, tail): add a triple pattern of (head, relation, "
               "tail).\n"
               "add_max(max_var): calculate the maximum value of a given variable.\n"
               "add_min(min_var): calculate the minimum value of a given variable.\n"
               "add_count(count_var): count the occurrences of a given variable.\n"
               "add_filter(ob1, op, ob2): add a comparative constraint; op can be one of "
               ">, <, =, >=, <=, !=.\n"
               "set_answer(ans_var): set ans_var as the variable that this query "
               "returns.\n"
               "execute(): execute the current query and return the result.\n";
    }
    return "You are answering a question over a single database table by building a "
           "query step by step.\n"
           "At each step write one Thought line and one Action line.\n"
           "Available functions:\n"
           "get_column(column): get the values stored in the given column.\n"
           "add_condition(column, op, value): require rows to satisfy column op value; "
           "op can be one of =, >, <.\n"
           "set_answer(column, aggregation_type): choose the answer column and an "
           "aggregation, one of None, MAX, MIN, COUNT, SUM, AVG.\n"
           "execute(): execute the current query and return the result.\n";
}

std::string default_one_shot_example(Dialect dialect) {
    if (dialect == Dialect::Triple) {
        return "Example:\n"
               "Question: which computers were designed by tom kilburn?\n"
               "Entities: m.tom_kilburn\n"
               "Thought 1: I should look at the relations around tom kilburn first.\n"
               "Action 1: get_relation(m.tom_kilburn)\n"
               "Observation 1: [computer.computer_designer.computers_designed]\n"
               "Thought 2: The relation computer.computer_designer.computers_designed "
               "links him to the computers.\n"
               "Action 2: add_fact(m.tom_kilburn, "
               "computer.computer_designer.computers_designed, ?computer)\n"
               "Observation 2: result: 2 row(s); ?computer = {m.a, m.b}\n"
               "Thought 3: ?computer holds the answer.\n"
               "Action 3: set_answer(?computer)\n"
               "Observation 3: answer set to ?computer; denotation: {m.a, m.b}\n"
               "Thought 4: The query is complete.\n"
               "Action 4: execute()\n"
               "Observation 4: final answer: {m.a, m.b}\n";
    }
    return "Example:\n"
           "Question: how many players scored more than 10?\n"
           "Thought 1: I need the rows where Score is greater than 10.\n"
           "Action 1: add_condition(Score, >, 10)\n"
           "Observation 1: result: 3 row(s)\n"
           "Thought 2: The question asks for a count of players.\n"
           "Action 2: set_answer(Player, COUNT)\n"
           "Observation 2: answer set to COUNT(Player)\n"
           "Thought 3: The query is complete.\n"
           "Action 3: execute()\n"
           "Observation 3: final answer: {3}\n";
}

std::string zero_shot_correction_text() {
    return "Examine your previous thought and action for mistakes and correct them in "
           "the next step if anything looks wrong.";
}

std::string few_shot_correction_text() {
    return "Here are examples of corrected mistakes for reference.\n"
           "Example A: The action add_fact(?x, ?y) failed because add_fact takes three "
           "parameters (head, relation, tail); the corrected action was "
           "add_fact(m.0x1, music.artist.genre, ?genre).\n"
           "Example B: The action add_filter(?h, people.person.height_meters, 2.0) "
           "failed because the second argument must be a comparison operator; the "
           "corrected action was add_filter(?height, >, 2.0).\n"
           "Example C: The action set_answer(?city) failed because ?city was never "
           "created; the corrected action was set_answer(?location) since ?location "
           "already held the candidate answers.\n"
           "Example D: An add_fact call returned an empty result because the chosen "
           "relation did not come from a previous get_relation observation; the "
           "corrected step queried get_relation(?movie) first and then used one of the "
           "listed relations.\n"
           "Example E: An add_filter call produced an empty result because the "
           "comparison was unnecessary; the corrected step skipped the filter and set "
           "the answer variable directly.\n"
           "Check your previous step against these patterns before continuing.";
}

std::string assemble_prompt(const AgentConfig& config, const std::string& question,
                            const std::vector<std::string>& entities,
                            const std::vector<StepRecord>& steps_so_far) {
    std::ostringstream out;
    out << config.instruction << "\n" << config.one_shot_example << "\n";
    out << "Question: " << question << "\n";
    out << "Entities: ";
    for (size_t i = 0; i < entities.size(); ++i) {
        if (i) out << ", ";
        out << entities[i];
    }
    out << "\n";
    for (const auto& step : steps_so_far) {
        out << "Thought " << step.index << ": " << step.thought << "\n";
        out << step.action_raw << "\n";
        out << "Observation " << step.index << ": " << step.observation << "\n";
    }
    return out.str();
}

namespace {

struct EpisodeState {
    QueryProgram program{Dialect::Triple};
    MemorySnapshot memory;
    BindingTable bindings;  // from the last committed evaluation
};

struct StepOutcome {
    EnvFeedback feedback;
    std::string observation;
    EpisodeState next;
    long store_queries = 0;
    bool terminal = false;
    AnswerSet answer;
};

Term classify_term(const std::string& arg) {
    if (!arg.empty() && arg[0] == '?') return Term::variable(arg);
    double unused;
    if (parse_number(arg, unused)) return Term::literal(arg);
    if (arg.find_first_of(" \t") != std::string::npos) return Term::literal(arg);
    return Term::entity(arg);
}

std::string join_list(const std::vector<std::string>& values) {
    std::string out = "[";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i];
    }
    out += "]";
    return out;
}

std::string summarize_result(const EvalResult& result) {
    if (result.empty) return "result: empty";
    std::ostringstream out;
    out << "result: " << result.bindings.rows.size() << " row(s)";
    for (size_t c = 0; c < result.bindings.columns.size(); ++c) {
        std::set<std::string> values;
        for (const auto& row : result.bindings.rows) values.insert(row[c]);
        out << "; " << result.bindings.columns[c] << " = {";
        size_t shown = 0;
        for (const auto& v : values) {
            if (shown) out << ", ";
            if (shown == 8) {
                out << "...";
                break;
            }
            out << v;
            ++shown;
        }
        out << "}";
    }
    return out.str();
}

bool is_known_term(const MemorySnapshot& memory, const std::string& arg) {
    if (!arg.empty() && arg[0] == '?') return memory.has_variable(arg);
    return std::find(memory.linked_entities.begin(), memory.linked_entities.end(), arg) !=
           memory.linked_entities.end();
}

StepOutcome execute_triple_action(const EpisodeState& state, const ParsedAction& action,
                                  const TripleStore& kb, const std::string& question,
                                  const AgentConfig& config, const Embedder& embedder) {
    StepOutcome out;
    out.next = state;
    out.feedback.memory = state.memory;

    auto interpreter_error = [&](const std::string& message) {
        out.next = state;
        out.feedback.store = {};
        out.feedback.interpreter = {false, message};
        out.observation = message;
    };

    if (!action.parsed) {
        interpreter_error("invalid action");
        return out;
    }
    const auto& names = action_names(Dialect::Triple);
    if (std::find(names.begin(), names.end(), action.name) == names.end()) {
        interpreter_error("unknown action '" + action.name + "'");
        return out;
    }
    int expected = action_arity(Dialect::Triple, action.name);
    if (expected >= 0 && static_cast<size_t>(expected) != action.arity()) {
        interpreter_error(action_signature(Dialect::Triple, action.name) + " expects " +
                          std::to_string(expected) + " parameters, got " +
                          std::to_string(action.arity()));
        return out;
    }

    try {
        if (action.name == "get_relation") {
            const std::string& arg = action.args[0];
            if (!is_known_term(state.memory, arg)) {
                interpreter_error("'" + arg + "' is not a linked entity or created variable");
                return out;
            }
            auto relations = kb.get_relation(classify_term(arg), state.bindings);
            out.store_queries = 1;
            auto ranked = rank_relations(question, relations, embedder,
                                         config.relation_threshold, config.seed);
            out.next.memory.relations_seen[arg] = ranked;
            out.observation = join_list(ranked);
            return out;
        }
        if (action.name == "add_fact") {
            out.next.program.add_fact(classify_term(action.args[0]), action.args[1],
                                      classify_term(action.args[2]));
        } else if (action.name == "add_filter") {
            out.next.program.add_filter(classify_term(action.args[0]), action.args[1],
                                        classify_term(action.args[2]));
        } else if (action.name == "add_max") {
            out.next.program.add_max(action.args[0]);
        } else if (action.name == "add_min") {
            out.next.program.add_min(action.args[0]);
        } else if (action.name == "add_count") {
            out.next.program.add_count(action.args[0]);
        } else if (action.name == "set_answer") {
            out.next.program.set_answer(action.args[0]);
        } else if (action.name == "execute") {
            if (!out.next.program.answer()) {
                interpreter_error("NoAnswerSet: call set_answer() before execute()");
                return out;
            }
        }

        auto result = kb.evaluate(out.next.program);
        out.store_queries = 1;
        out.feedback.store.executed = true;
        out.feedback.store.empty = result.empty;
        out.feedback.store.row_count = result.bindings.rows.size();
        out.feedback.store.result_text = summarize_result(result);
        out.next.bindings = result.bindings;

        if (action.name == "set_answer") {
            out.feedback.store.cvt_answer =
                kb.is_cvt_only(action.args[0], result.bindings);
            out.observation = "answer set to " + action.args[0] +
                              "; denotation: " + result.answer.render();
        } else if (action.name == "execute") {
            out.terminal = true;
            out.answer = result.answer;
            out.observation = "final answer: " + result.answer.render();
        } else if (action.name == "add_max" || action.name == "add_min" ||
                   action.name == "add_count") {
            const auto& agg = out.next.program.aggregation();
            out.observation = std::string("aggregation ") + aggregation_name(agg->kind) +
                              "(" + agg->target + ") recorded";
            if (result.has_answer) {
                out.observation += "; denotation: " + result.answer.render();
            }
        } else {
            out.observation = out.feedback.store.result_text;
        }
    } catch (const QueryError& e) {
        if (e.code() == ErrorCode::EngineError) {
            // Malformed program rejected by the engine itself; surfaced
            // verbatim as store feedback.
            out.next = state;
            out.feedback.store = {};
            out.feedback.store.engine_error = e.what();
            out.feedback.interpreter = {};
            out.observation = e.what();
        } else {
            interpreter_error(e.what());
        }
    }
    return out;
}

StepOutcome execute_table_action(const EpisodeState& state, const ParsedAction& action,
                                 const Table& table) {
    StepOutcome out;
    out.next = state;
    out.feedback.memory = state.memory;

    auto interpreter_error = [&](const std::string& message) {
        out.next = state;
        out.feedback.store = {};
        out.feedback.interpreter = {false, message};
        out.observation = message;
    };

    if (!action.parsed) {
        interpreter_error("invalid action");
        return out;
    }
    const auto& names = action_names(Dialect::Table);
    if (std::find(names.begin(), names.end(), action.name) == names.end()) {
        interpreter_error("unknown action '" + action.name + "'");
        return out;
    }
    int expected = action_arity(Dialect::Table, action.name);
    if (expected >= 0 && static_cast<size_t>(expected) != action.arity()) {
        interpreter_error(action_signature(Dialect::Table, action.name) + " expects " +
                          std::to_string(expected) + " parameters, got " +
                          std::to_string(action.arity()));
        return out;
    }

    try {
        if (action.name == "get_column") {
            auto values = table.get_column(action.args[0]);
            out.store_queries = 1;
            out.observation = join_list(values);
            return out;
        }
        if (action.name == "add_condition") {
            out.next.program.add_condition(action.args[0], action.args[1], action.args[2]);
            size_t matched = table.count_matching(out.next.program.conditions());
            out.store_queries = 1;
            out.feedback.store.executed = true;
            out.feedback.store.row_count = matched;
            out.feedback.store.empty = matched == 0;
            out.observation = matched == 0
                                  ? "result: empty"
                                  : "result: " + std::to_string(matched) + " row(s)";
            return out;
        }
        if (action.name == "set_answer") {
            out.next.program.set_answer(action.args[0], parse_aggregation(action.args[1]));
            auto answer = table.evaluate(out.next.program);
            out.store_queries = 1;
            out.feedback.store.executed = true;
            out.feedback.store.row_count = answer.values.size();
            out.feedback.store.empty = answer.empty();
            out.observation = "answer set to " +
                              std::string(aggregation_name(
                                  out.next.program.aggregation()->kind)) +
                              "(" + action.args[0] + "); denotation: " + answer.render();
            return out;
        }
        // execute()
        if (!out.next.program.answer()) {
            interpreter_error("NoAnswerSet: call set_answer() before execute()");
            return out;
        }
        auto answer = table.evaluate(out.next.program);
        out.store_queries = 1;
        out.feedback.store.executed = true;
        out.feedback.store.row_count = answer.values.size();
        out.feedback.store.empty = answer.empty();
        out.terminal = true;
        out.answer = answer;
        out.observation = "final answer: " + answer.render();
    } catch (const QueryError& e) {
        interpreter_error(e.what());
    }
    return out;
}

std::string trim_text(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

EpisodeTrace run_episode(const AgentConfig& config, const std::string& question,
                         const std::vector<std::string>& entities, const Environment& env,
                         LlmClient& llm, const TriggerRegistry& registry) {
    auto started = std::chrono::steady_clock::now();
    EpisodeTrace trace;
    trace.question = question;
    trace.entities = entities;

    EpisodeState state;
    state.program = QueryProgram(env.dialect());
    state.memory.dialect = env.dialect();
    state.memory.linked_entities = entities;
    if (env.dialect() == Dialect::Table) {
        state.memory.columns = env.table->column_names();
        state.program.bind_schema(env.table->column_names());
        state.program.set_table_name(env.table->name());
    }
    Embedder embedder = hashed_ngram_embedder();

    for (int t = 1; t <= config.max_steps; ++t) {
        GenerationResult gen;
        try {
            gen = llm.complete({assemble_prompt(config, question, entities, trace.steps)});
        } catch (const QueryError& e) {
            trace.abort_reason = e.what();
            break;
        }
        ++trace.counters.llm_calls;
        trace.counters.ledger.add(gen.input_tokens, gen.output_tokens);

        ParsedAction action = parse_action(gen.text);
        StepOutcome outcome =
            env.dialect() == Dialect::Triple
                ? execute_triple_action(state, action, *env.kb, question, config, embedder)
                : execute_table_action(state, action, *env.table);
        trace.counters.store_queries += outcome.store_queries;

        StepRecord record;
        record.index = t;
        record.thought = parse_thought(gen.text);
        record.action_raw = action.parsed ? action.raw : trim_text(gen.text);
        record.action = action;

        bool committed = true;
        if (config.strategy == CorrectionStrategy::Eraser) {
            ErrorDiagnosis diagnosis = registry.detect(outcome.feedback, action);
            if (diagnosis.kind != ErrorKind::None) {
                record.observation = registry.render_guideline(diagnosis, t);
                record.was_correction = true;
                committed = false;  // RM and program keep their pre-step values
            }
        }
        if (committed) {
            record.observation = outcome.observation;
            if (config.strategy == CorrectionStrategy::ZeroShotSC) {
                record.observation += "\n" + zero_shot_correction_text();
            } else if (config.strategy == CorrectionStrategy::FewShotSC) {
                record.observation += "\n" + few_shot_correction_text();
            }
            state = outcome.next;
            state.memory.steps_taken.push_back(action);
            state.memory.created_variables = state.program.created_variables();
            state.memory.prior_results.push_back(outcome.observation);
            if (outcome.feedback.store.executed) {
                state.memory.prior_nonempty = !outcome.feedback.store.empty;
            }
        }
        trace.steps.push_back(record);
        if (config.on_step) config.on_step(record, state.program, state.memory);
        if (committed && outcome.terminal) {
            trace.final_answer = outcome.answer;
            break;
        }
    }

    trace.counters.wall_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started)
            .count());
    return trace;
}

namespace {

std::string escape_newlines(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
        } else if (c != '\r') {
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string serialize_trace(const EpisodeTrace& trace) {
    std::ostringstream out;
    out << "question: " << trace.question << "\n";
    out << "entities: ";
    for (size_t i = 0; i < trace.entities.size(); ++i) {
        if (i) out << ", ";
        out << trace.entities[i];
    }
    out << "\n";
    for (const auto& step : trace.steps) {
        out << "step: " << step.index << "\n";
        out << "thought: " << escape_newlines(step.thought) << "\n";
        out << "action: " << escape_newlines(step.action_raw) << "\n";
        out << "observation: " << escape_newlines(step.observation) << "\n";
        out << "correction: " << (step.was_correction ? 1 : 0) << "\n";
    }
    out << "final_answer: "
        << (trace.final_answer ? trace.final_answer->render() : std::string("none")) << "\n";
    if (!trace.abort_reason.empty()) {
        out << "aborted: " << escape_newlines(trace.abort_reason) << "\n";
    }
    out << "counters: store_queries=" << trace.counters.store_queries
        << " llm_calls=" << trace.counters.llm_calls
        << " input_tokens=" << trace.counters.ledger.input_tokens
        << " output_tokens=" << trace.counters.ledger.output_tokens << "\n";
    return out.str();
}

}  // namespace qa
