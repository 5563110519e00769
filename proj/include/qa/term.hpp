#pragma once

#include <string>

#include "qa/errors.hpp"

namespace qa {

/// A node in a triple pattern: a KB entity (m.02xlbx), a variable
/// (?computer), or a literal value.
struct Term {
    enum class Kind { Entity, Variable, Literal };

    Kind kind = Kind::Literal;
    std::string text;
    bool numeric = false;  // literals only

    static Term entity(std::string id);
    static Term variable(std::string name);
    static Term literal(std::string value);
    static Term literal_number(double value);

    bool is_entity() const { return kind == Kind::Entity; }
    bool is_variable() const { return kind == Kind::Variable; }
    bool is_literal() const { return kind == Kind::Literal; }

    bool operator==(const Term&) const = default;
};

bool is_valid_variable_name(const std::string& name);

/// True if the whole string parses as a number; on success writes the value.
bool parse_number(const std::string& text, double& out);

/// Canonical rendering for numeric strings so "3", "3.0" and 3 compare equal.
std::string canonical_value(const std::string& text);

/// Numeric when both sides parse as numbers, lexicographic otherwise.
/// Returns <0, 0, >0.
int compare_values(const std::string& lhs, const std::string& rhs);

}  // namespace qa
