#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qa/term.hpp"

namespace qa {

enum class Dialect { Triple, Table };

enum class FilterOp { Gt, Lt, Eq, Ge, Le, Ne };

/// Parses one of > < = >= <= != ; throws InvalidOperator otherwise.
FilterOp parse_filter_op(const std::string& text);
const char* filter_op_text(FilterOp op);
bool filter_op_holds(FilterOp op, const std::string& lhs, const std::string& rhs);

enum class Aggregation { None, Max, Min, Count, Sum, Avg };

const char* aggregation_name(Aggregation a);
Aggregation parse_aggregation(const std::string& text);

struct TriplePattern {
    Term head;
    std::string relation;
    Term tail;

    bool operator==(const TriplePattern&) const = default;
};

struct FilterConstraint {
    Term left;
    FilterOp op;
    Term right;

    bool operator==(const FilterConstraint&) const = default;
};

/// A TABLE-dialect condition; conditions are conjunctive.
struct Condition {
    std::string column;
    FilterOp op;
    std::string value;
    bool value_numeric = false;

    bool operator==(const Condition&) const = default;
};

struct AggregationSpec {
    Aggregation kind = Aggregation::None;
    std::string target;  // variable name (TRIPLE) or column name (TABLE)

    bool operator==(const AggregationSpec&) const = default;
};

/// Growing sequence of construction calls plus the structured state they
/// build. Emission and evaluation both read the structured state; the call
/// log is kept for traces. Value semantics throughout.
class QueryProgram {
public:
    explicit QueryProgram(Dialect dialect) : dialect_(dialect) {}

    Dialect dialect() const { return dialect_; }
    const std::vector<std::string>& calls() const { return calls_; }
    const std::vector<TriplePattern>& patterns() const { return patterns_; }
    const std::vector<FilterConstraint>& filters() const { return filters_; }
    const std::vector<Condition>& conditions() const { return conditions_; }
    const std::optional<AggregationSpec>& aggregation() const { return aggregation_; }
    const std::optional<std::string>& answer() const { return answer_; }
    const std::vector<std::string>& created_variables() const { return created_variables_; }

    bool has_variable(const std::string& name) const;

    // TRIPLE dialect
    void add_fact(const Term& head, const std::string& relation, const Term& tail);
    void add_filter(const Term& left, const std::string& op, const Term& right);
    void add_max(const std::string& var);
    void add_min(const std::string& var);
    void add_count(const std::string& var);
    void set_answer(const std::string& var);

    // TABLE dialect; column checks happen against the bound schema.
    void bind_schema(std::vector<std::string> columns);
    void add_condition(const std::string& column, const std::string& op,
                       const std::string& value);
    void set_answer(const std::string& column, Aggregation kind);
    void set_table_name(std::string name) { table_name_ = std::move(name); }

    /// Deterministic query text: SPARQL-shaped for TRIPLE, SQL-shaped for
    /// TABLE. Same program state emits byte-identical text.
    std::string emit_text() const;

    bool operator==(const QueryProgram&) const = default;

private:
    void require_dialect(Dialect d, const char* what) const;
    void note_variable(const Term& t);
    void set_aggregation(Aggregation kind, const std::string& var);

    Dialect dialect_;
    std::vector<std::string> calls_;
    std::vector<TriplePattern> patterns_;
    std::vector<FilterConstraint> filters_;
    std::vector<Condition> conditions_;
    std::optional<AggregationSpec> aggregation_;
    std::optional<std::string> answer_;
    std::vector<std::string> created_variables_;
    std::vector<std::string> schema_columns_;
    std::string table_name_ = "t";
};

}  // namespace qa
