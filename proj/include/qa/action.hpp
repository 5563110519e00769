#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qa/query_program.hpp"

namespace qa {

/// One "Action N: name(args)" line as generated by the model. Parsing is
/// total: malformed text yields parsed=false rather than an exception so the
/// error classifier can handle it.
struct ParsedAction {
    bool parsed = false;
    int step = 0;
    std::string name;
    std::vector<std::string> args;
    std::string raw;

    size_t arity() const { return args.size(); }

    bool operator==(const ParsedAction&) const = default;
};

/// Extracts the last `Action <n>: <name>(<args>)` line; args are split on
/// top-level commas and trimmed.
ParsedAction parse_action(const std::string& text);

/// First `Thought <n>:` line content, or empty.
std::string parse_thought(const std::string& text);

/// Known action names for a dialect, in the order the prompts document them.
const std::vector<std::string>& action_names(Dialect dialect);

/// Expected parameter count, or -1 for unknown actions.
int action_arity(Dialect dialect, const std::string& name);

/// Signature string used in arity guidelines, e.g. "add_fact(head,relation,tail)".
std::string action_signature(Dialect dialect, const std::string& name);

}  // namespace qa
