#include "qa/eraser.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qa {

bool MemorySnapshot::has_variable(const std::string& name) const {
    return std::find(created_variables.begin(), created_variables.end(), name) !=
           created_variables.end();
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::None: return "None";
        case ErrorKind::UnknownAction: return "UnknownAction";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::InvalidFilterOperator: return "InvalidFilterOperator";
        case ErrorKind::GetRelationOnUnknownTerm: return "GetRelationOnUnknownTerm";
        case ErrorKind::FactBeforeGetRelation: return "FactBeforeGetRelation";
        case ErrorKind::TwoNewVariablesInFact: return "TwoNewVariablesInFact";
        case ErrorKind::SetAnswerUnknownVariable: return "SetAnswerUnknownVariable";
        case ErrorKind::CvtAnswer: return "CvtAnswer";
        case ErrorKind::EmptyFactResult: return "EmptyFactResult";
        case ErrorKind::EmptyFilterResult: return "EmptyFilterResult";
        case ErrorKind::EmptyConditionResult: return "EmptyConditionResult";
    }
    return "None";
}

ErrorKind error_kind_from_name(const std::string& name) {
    static const std::vector<ErrorKind> all = {
        ErrorKind::UnknownAction,        ErrorKind::ArityMismatch,
        ErrorKind::InvalidFilterOperator, ErrorKind::GetRelationOnUnknownTerm,
        ErrorKind::FactBeforeGetRelation, ErrorKind::TwoNewVariablesInFact,
        ErrorKind::SetAnswerUnknownVariable, ErrorKind::CvtAnswer,
        ErrorKind::EmptyFactResult,      ErrorKind::EmptyFilterResult,
        ErrorKind::EmptyConditionResult};
    for (ErrorKind k : all) {
        if (name == error_kind_name(k)) return k;
    }
    return ErrorKind::None;
}

void TriggerRegistry::register_trigger(ErrorKind kind, TriggerMatcher matcher,
                                       std::string template_text) {
    if (is_registered(kind)) {
        throw QueryError(ErrorCode::DuplicateKind, error_kind_name(kind));
    }
    triggers_.push_back({kind, true, std::move(matcher), std::move(template_text)});
}

void TriggerRegistry::set_enabled(ErrorKind kind, bool enabled) {
    for (auto& t : triggers_) {
        if (t.kind == kind) t.enabled = enabled;
    }
}

bool TriggerRegistry::is_registered(ErrorKind kind) const {
    return find(kind) != nullptr;
}

const Trigger* TriggerRegistry::find(ErrorKind kind) const {
    for (const auto& t : triggers_) {
        if (t.kind == kind) return &t;
    }
    return nullptr;
}

ErrorDiagnosis TriggerRegistry::detect(const EnvFeedback& feedback,
                                       const ParsedAction& action) const {
    for (const auto& trigger : triggers_) {
        if (!trigger.enabled) continue;
        std::map<std::string, std::string> context;
        if (trigger.matcher(feedback, action, context)) {
            return {trigger.kind, std::move(context)};
        }
    }
    return {};
}

std::string TriggerRegistry::render_guideline(const ErrorDiagnosis& diagnosis,
                                              int step_index) const {
    const Trigger* trigger = find(diagnosis.kind);
    if (trigger == nullptr) {
        throw QueryError(ErrorCode::EngineError,
                         std::string("no trigger registered for ") +
                             error_kind_name(diagnosis.kind));
    }
    std::string text = trigger->template_text;
    auto substitute = [&text](const std::string& key, const std::string& value) {
        const std::string token = "{" + key + "}";
        size_t pos = 0;
        while ((pos = text.find(token, pos)) != std::string::npos) {
            text.replace(pos, token.size(), value);
            pos += value.size();
        }
    };
    substitute("step", std::to_string(step_index));
    for (const auto& [key, value] : diagnosis.context) {
        substitute(key, value);
    }
    return text;
}

std::string TriggerRegistry::to_config() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& t : triggers_) {
        entries.push_back({{"kind", error_kind_name(t.kind)},
                           {"enabled", t.enabled},
                           {"template", t.template_text}});
    }
    return entries.dump(2) + "\n";
}

void TriggerRegistry::apply_config(const std::string& config_text) {
    auto entries = nlohmann::json::parse(config_text);
    for (const auto& entry : entries) {
        ErrorKind kind = error_kind_from_name(entry.at("kind").get<std::string>());
        for (auto& t : triggers_) {
            if (t.kind != kind) continue;
            if (entry.contains("enabled")) t.enabled = entry["enabled"].get<bool>();
            if (entry.contains("template")) t.template_text = entry["template"].get<std::string>();
        }
    }
}

void TriggerRegistry::save_config(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw QueryError(ErrorCode::BadFixture, "cannot write " + path);
    out << to_config();
}

void TriggerRegistry::load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QueryError(ErrorCode::BadFixture, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config(buf.str());
}

namespace {

bool is_variable_arg(const std::string& arg) {
    return !arg.empty() && arg[0] == '?';
}

bool known_action(const MemorySnapshot& memory, const ParsedAction& action) {
    const auto& names = action_names(memory.dialect);
    return action.parsed &&
           std::find(names.begin(), names.end(), action.name) != names.end();
}

bool is_linked_entity(const MemorySnapshot& memory, const std::string& arg) {
    return std::find(memory.linked_entities.begin(), memory.linked_entities.end(), arg) !=
           memory.linked_entities.end();
}

bool valid_filter_op(const std::string& op) {
    return op == ">" || op == "<" || op == "=" || op == ">=" || op == "<=" || op == "!=";
}

std::string variable_list(const MemorySnapshot& memory) {
    std::string out = "{";
    for (size_t i = 0; i < memory.created_variables.size(); ++i) {
        if (i) out += ", ";
        out += memory.created_variables[i];
    }
    out += "}";
    return out;
}

std::string get_relation_options(const MemorySnapshot& memory) {
    std::vector<std::string> opts = memory.created_variables;
    opts.insert(opts.end(), memory.linked_entities.begin(), memory.linked_entities.end());
    std::string out;
    for (size_t i = 0; i < opts.size(); ++i) {
        if (i) out += ", ";
        out += "get_relation(" + opts[i] + ")";
    }
    return out;
}

bool relation_previously_seen(const MemorySnapshot& memory, const std::string& relation) {
    for (const auto& [term, relations] : memory.relations_seen) {
        if (std::find(relations.begin(), relations.end(), relation) != relations.end()) {
            return true;
        }
    }
    return false;
}

}  // namespace

TriggerRegistry TriggerRegistry::standard() {
    TriggerRegistry registry;

    registry.register_trigger(
        ErrorKind::UnknownAction,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>&) {
            return !known_action(fb.memory, action);
        },
        "Invalid action, next time you must choose an action from get_relation(), "
        "add_fact(), add_max(), add_min(), add_count(), add_filter(), set_answer(), "
        "execute(). Please re-generate only Thought {step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::ArityMismatch,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (!known_action(fb.memory, action)) return false;
            int expected = action_arity(fb.memory.dialect, action.name);
            if (expected < 0 || static_cast<size_t>(expected) == action.arity()) return false;
            ctx["signature"] = action_signature(fb.memory.dialect, action.name);
            ctx["expected"] = std::to_string(expected);
            ctx["got"] = std::to_string(action.arity());
            return true;
        },
        "{signature} should have {expected} parameters. You have {got} parameters. "
        "Please check again. Please re-generate only Thought {step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::InvalidFilterOperator,
        [](const EnvFeedback&, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (action.name != "add_filter" || action.arity() != 3) return false;
            if (valid_filter_op(action.args[1])) return false;
            ctx["op"] = action.args[1];
            return true;
        },
        "You used {op} as operator in add_filter, which is invalid. I strongly suggest "
        "you carefully check whether a comparison step and add_filter() is needed. If "
        "not needed and the result already meets our expectation, use set_answer() to "
        "determine which variable to return as the answer. If a comparison step is "
        "indeed needed, make sure the second argument is one of [>, <, >=, <=, =, !=]. "
        "Please re-generate only Thought {step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::GetRelationOnUnknownTerm,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (action.name != "get_relation" || action.arity() != 1) return false;
            const std::string& arg = action.args[0];
            if (is_linked_entity(fb.memory, arg)) return false;
            if (is_variable_arg(arg) && fb.memory.has_variable(arg)) return false;
            ctx["term"] = arg;
            ctx["options"] = get_relation_options(fb.memory);
            return true;
        },
        "The parameter of \"{term}\" is not a linked entity or created variable.  "
        "Suggestion: choose from: {options} for next Action. Please check again and "
        "re-generate.");

    registry.register_trigger(
        ErrorKind::FactBeforeGetRelation,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (action.name != "add_fact" || action.arity() != 3) return false;
            if (!fb.memory.relations_seen.empty()) return false;
            std::string suggest = action.args[0];
            if (is_variable_arg(suggest) && !fb.memory.linked_entities.empty()) {
                suggest = fb.memory.linked_entities.front();
            }
            ctx["suggest"] = suggest;
            return true;
        },
        "You should use get_relation() first. Suggestion: choose valid options from "
        "get_relation({suggest}). Please check again and re-generate only Thought "
        "{step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::TwoNewVariablesInFact,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>&) {
            if (action.name != "add_fact" || action.arity() != 3) return false;
            const std::string& head = action.args[0];
            const std::string& tail = action.args[2];
            return is_variable_arg(head) && is_variable_arg(tail) &&
                   !fb.memory.has_variable(head) && !fb.memory.has_variable(tail);
        },
        "You introduced unexisting variable in add_fact(), which is invalid. You "
        "should find another approach to solve the question. Please re-generate only "
        "Thought {step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::SetAnswerUnknownVariable,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (fb.memory.dialect != Dialect::Triple) return false;
            if (action.name != "set_answer" || action.arity() != 1) return false;
            if (fb.memory.has_variable(action.args[0])) return false;
            ctx["var"] = action.args[0];
            ctx["variables"] = variable_list(fb.memory);
            return true;
        },
        "{var} is not a created variable. You must set an existing variable as the "
        "answer. Existing variables include: {variables}. Please choose the proper "
        "variable and set it again. Please re-generate only Thought {step} and Action "
        "{step}.");

    registry.register_trigger(
        ErrorKind::CvtAnswer,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (action.name != "set_answer" || action.arity() != 1) return false;
            if (!fb.store.cvt_answer) return false;
            ctx["var"] = action.args[0];
            return true;
        },
        "You should not set {var} as the answer, because its value is "
        "\"UnName_Entity\". Please check again and re-generate only Thought {step} "
        "and Action {step}.");

    registry.register_trigger(
        ErrorKind::EmptyFactResult,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>& ctx) {
            if (action.name != "add_fact" || action.arity() != 3) return false;
            if (!fb.store.executed || !fb.store.empty) return false;
            if (!fb.memory.prior_nonempty) return false;
            ctx["relation_known"] =
                relation_previously_seen(fb.memory, action.args[1]) ? "yes" : "no";
            return true;
        },
        "Got empty result after adding this triple pattern. You should carefully "
        "check whether this triple is needed. You likely add a triple pattern that "
        "can not match any graph on KB. Please re-generate only Thought {step} and "
        "Action {step}.");

    registry.register_trigger(
        ErrorKind::EmptyFilterResult,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>&) {
            if (action.name != "add_filter" || action.arity() != 3) return false;
            return fb.store.executed && fb.store.empty && fb.memory.prior_nonempty;
        },
        "You choose add_filter as the action in this step. However, we get an empty "
        "result. I strongly suggest you carefully check if a comparison step is "
        "needed. If not needed and the result already meets our expectations, you can "
        "use set_answer() to determine which variable to return. If there is a need "
        "for a filter constraint, please carefully check the two comparison objects "
        "and the operator. Please re-generate only Thought {step} and Action {step}.");

    registry.register_trigger(
        ErrorKind::EmptyConditionResult,
        [](const EnvFeedback& fb, const ParsedAction& action,
           std::map<std::string, std::string>&) {
            if (action.name != "add_condition" || action.arity() != 3) return false;
            return fb.store.executed && fb.store.empty && fb.memory.prior_nonempty;
        },
        "You choose add_condition as the action in this step. However, we get an "
        "empty result. Please carefully check the column, the operator, and the "
        "value. Please re-generate only Thought {step} and Action {step}.");

    return registry;
}

}  // namespace qa
