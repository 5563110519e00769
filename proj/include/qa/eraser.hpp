#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qa/action.hpp"

namespace qa {

/// Structured record of prior committed steps; the error classifier reads it
/// instead of re-deriving state from the prompt. Excludes the in-flight step.
struct MemorySnapshot {
    Dialect dialect = Dialect::Triple;
    std::vector<ParsedAction> steps_taken;
    std::vector<std::string> created_variables;
    std::map<std::string, std::vector<std::string>> relations_seen;
    std::vector<std::string> prior_results;
    std::vector<std::string> linked_entities;
    std::vector<std::string> columns;       // TABLE dialect schema
    bool prior_nonempty = true;             // last committed result had rows

    bool has_variable(const std::string& name) const;

    bool operator==(const MemorySnapshot&) const = default;
};

struct StoreFeedback {
    bool executed = false;
    bool empty = false;
    bool cvt_answer = false;
    size_t row_count = 0;
    std::string result_text;
    std::string engine_error;

    bool operator==(const StoreFeedback&) const = default;
};

struct InterpreterFeedback {
    bool ok = true;
    std::string message;

    bool operator==(const InterpreterFeedback&) const = default;
};

/// Everything the environment reports about one step: store execution
/// status, interpreter status, and the reasoning-memory snapshot taken
/// before the step.
struct EnvFeedback {
    StoreFeedback store;
    InterpreterFeedback interpreter;
    MemorySnapshot memory;
};

enum class ErrorKind {
    None,
    UnknownAction,
    ArityMismatch,
    InvalidFilterOperator,
    GetRelationOnUnknownTerm,
    FactBeforeGetRelation,
    TwoNewVariablesInFact,
    SetAnswerUnknownVariable,
    CvtAnswer,
    EmptyFactResult,
    EmptyFilterResult,
    EmptyConditionResult,  // TABLE-dialect extension
};

const char* error_kind_name(ErrorKind kind);
ErrorKind error_kind_from_name(const std::string& name);

struct ErrorDiagnosis {
    ErrorKind kind = ErrorKind::None;
    std::map<std::string, std::string> context;
};

using TriggerMatcher =
    std::function<bool(const EnvFeedback&, const ParsedAction&, std::map<std::string, std::string>&)>;

struct Trigger {
    ErrorKind kind;
    bool enabled = true;
    TriggerMatcher matcher;
    std::string template_text;
};

/// Ordered trigger list; registration order is detection priority. Immutable
/// once the agent starts using it.
class TriggerRegistry {
public:
    void register_trigger(ErrorKind kind, TriggerMatcher matcher, std::string template_text);
    void set_enabled(ErrorKind kind, bool enabled);
    bool is_registered(ErrorKind kind) const;
    size_t size() const { return triggers_.size(); }

    /// First enabled trigger that matches, in priority order; total function.
    ErrorDiagnosis detect(const EnvFeedback& feedback, const ParsedAction& action) const;

    /// Substitutes context values and the literal step number into the
    /// trigger's template.
    std::string render_guideline(const ErrorDiagnosis& diagnosis, int step_index) const;

    /// Config round-trip: kind name, enabled flag, template text per entry.
    /// Loading overrides flags/templates of already-registered kinds.
    std::string to_config() const;
    void apply_config(const std::string& config_text);
    void save_config(const std::string& path) const;
    void load_config(const std::string& path);

    /// All ten built-in triggers plus the TABLE-dialect extension, in
    /// detection priority order.
    static TriggerRegistry standard();

private:
    const Trigger* find(ErrorKind kind) const;
    std::vector<Trigger> triggers_;
};

}  // namespace qa
