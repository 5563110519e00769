#pragma once

#include <string>
#include <vector>

#include "qa/answer_set.hpp"
#include "qa/query_program.hpp"

namespace qa {

enum class ColumnType { Text, Number };

/// Single table for the TABLE dialect. Immutable after load.
class Table {
public:
    Table(std::string name, std::vector<std::pair<std::string, ColumnType>> columns,
          std::vector<std::vector<std::string>> rows);

    const std::string& name() const { return name_; }
    size_t row_count() const { return rows_.size(); }
    std::vector<std::string> column_names() const;
    int column_index(const std::string& column) const;
    ColumnType column_type(const std::string& column) const;

    /// Values in row order, duplicates preserved.
    std::vector<std::string> get_column(const std::string& column) const;

    /// Rows satisfying every condition.
    size_t count_matching(const std::vector<Condition>& conditions) const;

    /// Filter by the program's conjunctive conditions, then aggregate over
    /// the answer column. AVG/SUM/MAX/MIN over zero rows give an explicit
    /// empty answer.
    AnswerSet evaluate(const QueryProgram& program) const;

    /// CSV with a header row; an optional `#types text,number,...` line
    /// before the header declares column types (default: text).
    static Table load_file(const std::string& path, const std::string& name = "t");
    static Table parse(const std::string& text, const std::string& name = "t");

private:
    bool row_matches(const std::vector<std::string>& row, const Condition& c) const;

    std::string name_;
    std::vector<std::pair<std::string, ColumnType>> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace qa
