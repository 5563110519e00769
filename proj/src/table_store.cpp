#include "qa/table_store.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace qa {

Table::Table(std::string name, std::vector<std::pair<std::string, ColumnType>> columns,
             std::vector<std::vector<std::string>> rows)
    : name_(std::move(name)), columns_(std::move(columns)), rows_(std::move(rows)) {
    for (size_t i = 0; i < columns_.size(); ++i) {
        for (size_t j = i + 1; j < columns_.size(); ++j) {
            if (columns_[i].first == columns_[j].first) {
                throw QueryError(ErrorCode::BadFixture,
                                 "duplicate column " + columns_[i].first);
            }
        }
    }
    for (const auto& row : rows_) {
        if (row.size() != columns_.size()) {
            throw QueryError(ErrorCode::BadFixture, "row arity does not match header");
        }
        for (size_t i = 0; i < row.size(); ++i) {
            double unused;
            if (columns_[i].second == ColumnType::Number && !parse_number(row[i], unused)) {
                throw QueryError(ErrorCode::BadFixture,
                                 "non-numeric cell '" + row[i] + "' in number column " +
                                     columns_[i].first);
            }
        }
    }
}

std::vector<std::string> Table::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const auto& [name, type] : columns_) names.push_back(name);
    return names;
}

int Table::column_index(const std::string& column) const {
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].first == column) return static_cast<int>(i);
    }
    return -1;
}

ColumnType Table::column_type(const std::string& column) const {
    int idx = column_index(column);
    if (idx < 0) throw QueryError(ErrorCode::UnknownColumn, column);
    return columns_[static_cast<size_t>(idx)].second;
}

std::vector<std::string> Table::get_column(const std::string& column) const {
    int idx = column_index(column);
    if (idx < 0) throw QueryError(ErrorCode::UnknownColumn, column);
    std::vector<std::string> values;
    values.reserve(rows_.size());
    for (const auto& row : rows_) values.push_back(row[static_cast<size_t>(idx)]);
    return values;
}

size_t Table::count_matching(const std::vector<Condition>& conditions) const {
    size_t count = 0;
    for (const auto& row : rows_) {
        bool ok = true;
        for (const auto& c : conditions) {
            if (!row_matches(row, c)) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
    }
    return count;
}

bool Table::row_matches(const std::vector<std::string>& row, const Condition& c) const {
    int idx = column_index(c.column);
    if (idx < 0) throw QueryError(ErrorCode::UnknownColumn, c.column);
    const std::string& cell = row[static_cast<size_t>(idx)];
    int cmp;
    if (columns_[static_cast<size_t>(idx)].second == ColumnType::Number) {
        cmp = compare_values(cell, c.value);
    } else {
        cmp = cell.compare(c.value) < 0 ? -1 : (cell == c.value ? 0 : 1);
    }
    switch (c.op) {
        case FilterOp::Eq: return cmp == 0;
        case FilterOp::Gt: return cmp > 0;
        case FilterOp::Lt: return cmp < 0;
        default:
            throw QueryError(ErrorCode::InvalidOperator, filter_op_text(c.op));
    }
}

AnswerSet Table::evaluate(const QueryProgram& program) const {
    if (program.dialect() != Dialect::Table) {
        throw QueryError(ErrorCode::WrongDialect, "evaluate needs a TABLE program");
    }
    if (!program.answer()) {
        throw QueryError(ErrorCode::NoAnswerSet, "set_answer has not been called");
    }
    const std::string& column = *program.answer();
    int idx = column_index(column);
    if (idx < 0) throw QueryError(ErrorCode::UnknownColumn, column);

    std::vector<std::string> matched;
    for (const auto& row : rows_) {
        bool ok = true;
        for (const auto& c : program.conditions()) {
            if (!row_matches(row, c)) {
                ok = false;
                break;
            }
        }
        if (ok) matched.push_back(row[static_cast<size_t>(idx)]);
    }

    Aggregation kind =
        program.aggregation() ? program.aggregation()->kind : Aggregation::None;
    AnswerSet answer;
    if (kind == Aggregation::None) {
        for (const auto& v : matched) answer.insert(v);
        return answer;
    }
    answer.scalar = true;
    if (kind == Aggregation::Count) {
        answer.insert(std::to_string(matched.size()));
        return answer;
    }
    // Numeric aggregates need every matched cell to parse as a number.
    std::vector<double> nums;
    nums.reserve(matched.size());
    for (const auto& v : matched) {
        double d;
        if (!parse_number(v, d)) {
            throw QueryError(ErrorCode::TypeMismatch,
                             std::string(aggregation_name(kind)) + " over non-numeric cell '" +
                                 v + "' in column " + column);
        }
        nums.push_back(d);
    }
    if (nums.empty()) {
        return answer;  // explicit empty answer, not 0
    }
    double value = 0;
    switch (kind) {
        case Aggregation::Max: value = *std::max_element(nums.begin(), nums.end()); break;
        case Aggregation::Min: value = *std::min_element(nums.begin(), nums.end()); break;
        case Aggregation::Sum: value = std::accumulate(nums.begin(), nums.end(), 0.0); break;
        case Aggregation::Avg:
            value = std::accumulate(nums.begin(), nums.end(), 0.0) /
                    static_cast<double>(nums.size());
            break;
        default: break;
    }
    answer.insert(Term::literal_number(value).text);
    return answer;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace

Table Table::load_file(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) {
        throw QueryError(ErrorCode::BadFixture, "cannot open table fixture " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), name);
}

Table Table::parse(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    std::vector<ColumnType> types;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("#types ", 0) == 0) {
            for (const auto& t : split_csv_line(line.substr(7))) {
                if (t == "number") {
                    types.push_back(ColumnType::Number);
                } else if (t == "text") {
                    types.push_back(ColumnType::Text);
                } else {
                    throw QueryError(ErrorCode::BadFixture, "unknown column type '" + t + "'");
                }
            }
            continue;
        }
        if (!have_header) {
            header = split_csv_line(line);
            have_header = true;
            continue;
        }
        rows.push_back(split_csv_line(line));
    }
    if (!have_header) {
        throw QueryError(ErrorCode::BadFixture, "table fixture has no header row");
    }
    if (!types.empty() && types.size() != header.size()) {
        throw QueryError(ErrorCode::BadFixture, "#types arity does not match header");
    }
    std::vector<std::pair<std::string, ColumnType>> columns;
    for (size_t i = 0; i < header.size(); ++i) {
        columns.emplace_back(header[i], types.empty() ? ColumnType::Text : types[i]);
    }
    return Table(name, std::move(columns), std::move(rows));
}

}  // namespace qa
