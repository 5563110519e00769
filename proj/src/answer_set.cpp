#include "qa/answer_set.hpp"

#include "qa/term.hpp"

namespace qa {

AnswerSet AnswerSet::of(std::initializer_list<std::string> vals) {
    AnswerSet a;
    for (const auto& v : vals) a.insert(v);
    return a;
}

AnswerSet AnswerSet::single(std::string value) {
    AnswerSet a;
    a.scalar = true;
    a.insert(value);
    return a;
}

void AnswerSet::insert(const std::string& value) {
    values.insert(canonical_value(value));
}

std::string AnswerSet::render() const {
    std::string out = "{";
    bool first = true;
    for (const auto& v : values) {
        if (!first) out += ", ";
        out += v;
        first = false;
    }
    out += "}";
    return out;
}

double f1_score(const AnswerSet& predicted, const AnswerSet& gold) {
    if (predicted.empty() && gold.empty()) return 1.0;
    if (predicted.empty() || gold.empty()) return 0.0;
    size_t hits = 0;
    for (const auto& v : predicted.values) {
        if (gold.values.count(v)) ++hits;
    }
    if (hits == 0) return 0.0;
    double p = static_cast<double>(hits) / predicted.values.size();
    double r = static_cast<double>(hits) / gold.values.size();
    return 2.0 * p * r / (p + r);
}

int denotation_accuracy(const AnswerSet& predicted, const AnswerSet& gold) {
    return predicted.values == gold.values ? 1 : 0;
}

}  // namespace qa
