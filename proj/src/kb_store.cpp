#include "qa/kb_store.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace qa {

int BindingTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

void TripleStore::add(std::string subject, std::string relation, std::string object) {
    Triple t{std::move(subject), std::move(relation), std::move(object)};
    out_relations_[t.subject].insert(t.relation);
    in_relations_[t.object].insert(t.relation);
    triples_.insert(std::move(t));
}

void TripleStore::mark_cvt(std::string id) { cvt_ids_.insert(std::move(id)); }

bool TripleStore::has_node(const std::string& id) const {
    return out_relations_.count(id) != 0 || in_relations_.count(id) != 0;
}

std::vector<std::string> TripleStore::value_universe() const {
    std::set<std::string> values;
    for (const auto& t : triples_) {
        values.insert(t.subject);
        values.insert(t.object);
    }
    return {values.begin(), values.end()};
}

std::vector<std::string> TripleStore::relations_of(const std::string& entity) const {
    std::set<std::string> rels;
    if (auto it = out_relations_.find(entity); it != out_relations_.end()) {
        rels.insert(it->second.begin(), it->second.end());
    }
    if (auto it = in_relations_.find(entity); it != in_relations_.end()) {
        rels.insert(it->second.begin(), it->second.end());
    }
    return {rels.begin(), rels.end()};
}

std::vector<std::string> TripleStore::get_relation(const Term& term,
                                                   const BindingTable& current) const {
    if (term.is_entity()) {
        // An entity with no triples (or an unknown id; the agent vets names
        // before the store sees them) answers with an empty list.
        return relations_of(term.text);
    }
    if (term.is_variable()) {
        int col = current.column_index(term.text);
        if (col < 0 || current.rows.empty()) {
            throw QueryError(ErrorCode::UnknownTerm,
                             "variable " + term.text + " has no bindings");
        }
        std::set<std::string> rels;
        for (const auto& row : current.rows) {
            auto per_value = relations_of(row[static_cast<size_t>(col)]);
            rels.insert(per_value.begin(), per_value.end());
        }
        return {rels.begin(), rels.end()};
    }
    throw QueryError(ErrorCode::UnknownTerm, "get_relation on a literal");
}

namespace {

using Assignment = std::map<std::string, std::string>;

// Entity/literal terms match by value; bound variables must agree; unbound
// variables extend the assignment.
bool match_slot(const Term& term, const std::string& value, Assignment& row) {
    if (term.is_variable()) {
        auto it = row.find(term.text);
        if (it == row.end()) {
            row.emplace(term.text, value);
            return true;
        }
        return it->second == value;
    }
    if (term.is_literal()) {
        return compare_values(term.text, value) == 0;
    }
    return term.text == value;
}

std::string resolve_term(const Term& term, const Assignment& row) {
    if (!term.is_variable()) return term.text;
    auto it = row.find(term.text);
    if (it == row.end()) {
        throw QueryError(ErrorCode::EngineError,
                         "unbound variable " + term.text + " in filter");
    }
    return it->second;
}

}  // namespace

EvalResult TripleStore::evaluate(const QueryProgram& program) const {
    if (program.dialect() != Dialect::Triple) {
        throw QueryError(ErrorCode::WrongDialect, "evaluate needs a TRIPLE program");
    }
    std::vector<Assignment> rows{Assignment{}};
    for (const auto& pattern : program.patterns()) {
        std::vector<Assignment> next;
        for (const auto& row : rows) {
            for (const auto& triple : triples_) {
                if (triple.relation != pattern.relation) continue;
                Assignment extended = row;
                if (!match_slot(pattern.head, triple.subject, extended)) continue;
                if (!match_slot(pattern.tail, triple.object, extended)) continue;
                next.push_back(std::move(extended));
            }
        }
        rows = std::move(next);
    }
    for (const auto& filter : program.filters()) {
        std::vector<Assignment> kept;
        for (const auto& row : rows) {
            if (filter_op_holds(filter.op, resolve_term(filter.left, row),
                                resolve_term(filter.right, row))) {
                kept.push_back(row);
            }
        }
        rows = std::move(kept);
    }

    EvalResult result;
    result.bindings.columns = program.created_variables();
    {
        std::set<std::vector<std::string>> distinct;
        for (const auto& row : rows) {
            std::vector<std::string> projected;
            projected.reserve(result.bindings.columns.size());
            for (const auto& col : result.bindings.columns) {
                auto it = row.find(col);
                projected.push_back(it == row.end() ? std::string() : it->second);
            }
            distinct.insert(std::move(projected));
        }
        result.bindings.rows.assign(distinct.begin(), distinct.end());
    }
    result.empty = result.bindings.rows.empty() && !program.patterns().empty();

    if (program.answer()) {
        const auto& spec = program.aggregation();
        const std::string& target =
            (spec && spec->kind != Aggregation::None) ? spec->target : *program.answer();
        int col = result.bindings.column_index(target);
        if (col < 0) {
            throw QueryError(ErrorCode::EngineError, "answer variable " + target +
                                                         " is not bound by any pattern");
        }
        std::set<std::string> values;
        for (const auto& row : result.bindings.rows) {
            values.insert(row[static_cast<size_t>(col)]);
        }
        result.has_answer = true;
        if (spec && spec->kind != Aggregation::None) {
            result.answer.scalar = true;
            switch (spec->kind) {
                case Aggregation::Count:
                    result.answer.insert(std::to_string(values.size()));
                    break;
                case Aggregation::Max:
                case Aggregation::Min: {
                    if (values.empty()) break;  // empty denotation
                    std::string best = *values.begin();
                    for (const auto& v : values) {
                        int c = compare_values(v, best);
                        if ((spec->kind == Aggregation::Max && c > 0) ||
                            (spec->kind == Aggregation::Min && c < 0)) {
                            best = v;
                        }
                    }
                    result.answer.insert(best);
                    break;
                }
                default:
                    throw QueryError(ErrorCode::InvalidOperator,
                                     "TRIPLE dialect supports MAX, MIN, COUNT only");
            }
        } else {
            for (const auto& v : values) result.answer.insert(v);
        }
    }
    return result;
}

bool TripleStore::is_cvt_only(const std::string& var, const BindingTable& bindings) const {
    int col = bindings.column_index(var);
    if (col < 0 || bindings.rows.empty()) return false;
    for (const auto& row : bindings.rows) {
        if (!is_cvt(row[static_cast<size_t>(col)])) return false;
    }
    return true;
}

TripleStore TripleStore::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw QueryError(ErrorCode::BadFixture, "cannot open KB fixture " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

TripleStore TripleStore::parse(const std::string& text) {
    TripleStore store;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("#cvt ", 0) == 0) {
            store.mark_cvt(line.substr(5));
            continue;
        }
        if (line[0] == '#') continue;
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 3) {
            throw QueryError(ErrorCode::BadFixture,
                             "line " + std::to_string(lineno) + ": expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()));
        }
        store.add(fields[0], fields[1], fields[2]);
    }
    return store;
}

}  // namespace qa
