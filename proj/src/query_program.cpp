#include "qa/query_program.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qa {

FilterOp parse_filter_op(const std::string& text) {
    if (text == ">") return FilterOp::Gt;
    if (text == "<") return FilterOp::Lt;
    if (text == "=") return FilterOp::Eq;
    if (text == ">=") return FilterOp::Ge;
    if (text == "<=") return FilterOp::Le;
    if (text == "!=") return FilterOp::Ne;
    throw QueryError(ErrorCode::InvalidOperator, text);
}

const char* filter_op_text(FilterOp op) {
    switch (op) {
        case FilterOp::Gt: return ">";
        case FilterOp::Lt: return "<";
        case FilterOp::Eq: return "=";
        case FilterOp::Ge: return ">=";
        case FilterOp::Le: return "<=";
        case FilterOp::Ne: return "!=";
    }
    return "?";
}

bool filter_op_holds(FilterOp op, const std::string& lhs, const std::string& rhs) {
    int c = compare_values(lhs, rhs);
    switch (op) {
        case FilterOp::Gt: return c > 0;
        case FilterOp::Lt: return c < 0;
        case FilterOp::Eq: return c == 0;
        case FilterOp::Ge: return c >= 0;
        case FilterOp::Le: return c <= 0;
        case FilterOp::Ne: return c != 0;
    }
    return false;
}

const char* aggregation_name(Aggregation a) {
    switch (a) {
        case Aggregation::None: return "None";
        case Aggregation::Max: return "MAX";
        case Aggregation::Min: return "MIN";
        case Aggregation::Count: return "COUNT";
        case Aggregation::Sum: return "SUM";
        case Aggregation::Avg: return "AVG";
    }
    return "?";
}

Aggregation parse_aggregation(const std::string& text) {
    std::string up;
    for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "NONE") return Aggregation::None;
    if (up == "MAX") return Aggregation::Max;
    if (up == "MIN") return Aggregation::Min;
    if (up == "COUNT") return Aggregation::Count;
    if (up == "SUM") return Aggregation::Sum;
    if (up == "AVG") return Aggregation::Avg;
    throw QueryError(ErrorCode::InvalidOperator, "unknown aggregation '" + text + "'");
}

bool QueryProgram::has_variable(const std::string& name) const {
    return std::find(created_variables_.begin(), created_variables_.end(), name) !=
           created_variables_.end();
}

void QueryProgram::require_dialect(Dialect d, const char* what) const {
    if (dialect_ != d) {
        throw QueryError(ErrorCode::WrongDialect, what);
    }
}

void QueryProgram::note_variable(const Term& t) {
    if (t.is_variable() && !has_variable(t.text)) {
        created_variables_.push_back(t.text);
    }
}

void QueryProgram::add_fact(const Term& head, const std::string& relation, const Term& tail) {
    require_dialect(Dialect::Triple, "add_fact needs a TRIPLE program");
    if (relation.empty()) {
        throw QueryError(ErrorCode::EngineError, "empty relation in add_fact");
    }
    patterns_.push_back({head, relation, tail});
    note_variable(head);
    note_variable(tail);
    calls_.push_back("add_fact(" + head.text + ", " + relation + ", " + tail.text + ")");
}

void QueryProgram::add_filter(const Term& left, const std::string& op, const Term& right) {
    require_dialect(Dialect::Triple, "add_filter needs a TRIPLE program");
    FilterOp parsed = parse_filter_op(op);
    filters_.push_back({left, parsed, right});
    note_variable(left);
    note_variable(right);
    calls_.push_back("add_filter(" + left.text + ", " + op + ", " + right.text + ")");
}

void QueryProgram::set_aggregation(Aggregation kind, const std::string& var) {
    require_dialect(Dialect::Triple, "aggregation over variables needs a TRIPLE program");
    if (!has_variable(var)) {
        throw QueryError(ErrorCode::UnknownVariable, var);
    }
    // Re-invocation replaces the prior choice.
    aggregation_ = AggregationSpec{kind, var};
    calls_.push_back(std::string("add_") +
                     (kind == Aggregation::Max ? "max" : kind == Aggregation::Min ? "min" : "count") +
                     "(" + var + ")");
}

void QueryProgram::add_max(const std::string& var) { set_aggregation(Aggregation::Max, var); }
void QueryProgram::add_min(const std::string& var) { set_aggregation(Aggregation::Min, var); }
void QueryProgram::add_count(const std::string& var) { set_aggregation(Aggregation::Count, var); }

void QueryProgram::set_answer(const std::string& var) {
    require_dialect(Dialect::Triple, "single-argument set_answer needs a TRIPLE program");
    if (!has_variable(var)) {
        throw QueryError(ErrorCode::UnknownVariable, var);
    }
    answer_ = var;
    calls_.push_back("set_answer(" + var + ")");
}

void QueryProgram::bind_schema(std::vector<std::string> columns) {
    require_dialect(Dialect::Table, "schema binding is a TABLE concept");
    schema_columns_ = std::move(columns);
}

void QueryProgram::add_condition(const std::string& column, const std::string& op,
                                 const std::string& value) {
    require_dialect(Dialect::Table, "add_condition needs a TABLE program");
    if (!schema_columns_.empty() &&
        std::find(schema_columns_.begin(), schema_columns_.end(), column) ==
            schema_columns_.end()) {
        throw QueryError(ErrorCode::UnknownColumn, column);
    }
    FilterOp parsed = parse_filter_op(op);
    if (parsed != FilterOp::Eq && parsed != FilterOp::Gt && parsed != FilterOp::Lt) {
        throw QueryError(ErrorCode::InvalidOperator, op);
    }
    double unused;
    conditions_.push_back({column, parsed, value, parse_number(value, unused)});
    calls_.push_back("add_condition(" + column + ", " + op + ", " + value + ")");
}

void QueryProgram::set_answer(const std::string& column, Aggregation kind) {
    require_dialect(Dialect::Table, "two-argument set_answer needs a TABLE program");
    if (!schema_columns_.empty() &&
        std::find(schema_columns_.begin(), schema_columns_.end(), column) ==
            schema_columns_.end()) {
        throw QueryError(ErrorCode::UnknownColumn, column);
    }
    answer_ = column;
    aggregation_ = AggregationSpec{kind, column};
    calls_.push_back("set_answer(" + column + ", " + std::string(aggregation_name(kind)) + ")");
}

namespace {

std::string render_term_sparql(const Term& t) {
    if (t.is_literal() && !t.numeric) return "\"" + t.text + "\"";
    return t.text;
}

std::string render_value_sql(const std::string& value, bool numeric) {
    if (numeric) return value;
    return "'" + value + "'";
}

}  // namespace

std::string QueryProgram::emit_text() const {
    if (!answer_) {
        throw QueryError(ErrorCode::NoAnswerSet, "set_answer has not been called");
    }
    std::ostringstream out;
    if (dialect_ == Dialect::Triple) {
        out << "SELECT ";
        if (aggregation_ && aggregation_->kind != Aggregation::None) {
            const char* alias = aggregation_->kind == Aggregation::Count ? "?cnt"
                                : aggregation_->kind == Aggregation::Max ? "?max"
                                                                        : "?min";
            out << "(" << aggregation_name(aggregation_->kind) << "(" << aggregation_->target
                << ") AS " << alias << ")";
        } else {
            out << *answer_;
        }
        out << " WHERE { ";
        for (const auto& p : patterns_) {
            out << render_term_sparql(p.head) << " " << p.relation << " "
                << render_term_sparql(p.tail) << " . ";
        }
        for (const auto& f : filters_) {
            out << "FILTER(" << render_term_sparql(f.left) << " " << filter_op_text(f.op)
                << " " << render_term_sparql(f.right) << ") . ";
        }
        out << "}";
    } else {
        out << "SELECT ";
        if (aggregation_ && aggregation_->kind != Aggregation::None) {
            out << aggregation_name(aggregation_->kind) << "(" << *answer_ << ")";
        } else {
            out << *answer_;
        }
        out << " FROM " << table_name_;
        if (!conditions_.empty()) {
            out << " WHERE ";
            for (size_t i = 0; i < conditions_.size(); ++i) {
                if (i) out << " AND ";
                const auto& c = conditions_[i];
                out << c.column << " " << filter_op_text(c.op) << " "
                    << render_value_sql(c.value, c.value_numeric);
            }
        }
    }
    return out.str();
}

}  // namespace qa
