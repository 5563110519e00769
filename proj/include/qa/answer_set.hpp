#pragma once

#include <set>
#include <string>

namespace qa {

/// Denotation of a finished query: a set of entities/literals, or a single
/// aggregate value (scalar=true). Values are stored in canonical numeric
/// form so "3" and "3.0" compare equal.
struct AnswerSet {
    std::set<std::string> values;
    bool scalar = false;

    static AnswerSet of(std::initializer_list<std::string> vals);
    static AnswerSet single(std::string value);

    void insert(const std::string& value);
    bool empty() const { return values.empty(); }

    std::string render() const;

    bool operator==(const AnswerSet& other) const { return values == other.values; }
};

double f1_score(const AnswerSet& predicted, const AnswerSet& gold);
int denotation_accuracy(const AnswerSet& predicted, const AnswerSet& gold);

}  // namespace qa
