#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qa/answer_set.hpp"
#include "qa/query_program.hpp"

namespace qa {

struct Triple {
    std::string subject;
    std::string relation;
    std::string object;

    auto operator<=>(const Triple&) const = default;
};

/// Column-per-variable join result. Rows are distinct; one value per column.
struct BindingTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;
    bool operator==(const BindingTable&) const = default;
};

struct EvalResult {
    BindingTable bindings;
    AnswerSet answer;      // meaningful only when has_answer
    bool has_answer = false;
    bool empty = false;    // zero rows with at least one pattern present
};

/// Immutable in-memory triple store. Loaded once, then shared read-only
/// across episodes.
class TripleStore {
public:
    void add(std::string subject, std::string relation, std::string object);
    void mark_cvt(std::string id);

    size_t size() const { return triples_.size(); }
    const std::set<Triple>& triples() const { return triples_; }
    const std::set<std::string>& cvt_ids() const { return cvt_ids_; }
    bool is_cvt(const std::string& id) const { return cvt_ids_.count(id) != 0; }
    bool has_node(const std::string& id) const;

    /// All distinct node values (subjects and objects); the assignment
    /// universe for join variables.
    std::vector<std::string> value_universe() const;

    /// Sorted, de-duplicated one-hop relations of an entity, both directions.
    std::vector<std::string> relations_of(const std::string& entity) const;

    /// One-hop relations of an entity, or the union over every value a
    /// variable is bound to. Throws UnknownTerm for an absent entity or an
    /// unbound variable.
    std::vector<std::string> get_relation(const Term& term,
                                          const BindingTable& current) const;

    /// Conjunctive evaluation of a TRIPLE program: nested-loop join over
    /// patterns in insertion order, then filters, then projection or
    /// aggregation when the answer is set.
    EvalResult evaluate(const QueryProgram& program) const;

    /// True iff var has bindings and every one of them is a CVT node.
    /// Empty binding sets report false.
    bool is_cvt_only(const std::string& var, const BindingTable& bindings) const;

    /// Loads the tab-separated fixture format; `#cvt <id>` lines declare
    /// CVT nodes. Lines with a field count other than 3 are rejected.
    static TripleStore load_file(const std::string& path);
    static TripleStore parse(const std::string& text);

private:
    std::set<Triple> triples_;
    std::set<std::string> cvt_ids_;
    // subject -> relations, object -> relations
    std::map<std::string, std::set<std::string>> out_relations_;
    std::map<std::string, std::set<std::string>> in_relations_;
};

}  // namespace qa
