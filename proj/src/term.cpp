#include "qa/term.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace qa {

Term Term::entity(std::string id) {
    if (id.empty() || id.find_first_of(" \t\n") != std::string::npos) {
        throw QueryError(ErrorCode::UnknownTerm, "bad entity identifier '" + id + "'");
    }
    Term t;
    t.kind = Kind::Entity;
    t.text = std::move(id);
    return t;
}

Term Term::variable(std::string name) {
    if (!is_valid_variable_name(name)) {
        throw QueryError(ErrorCode::UnknownVariable, "bad variable name '" + name + "'");
    }
    Term t;
    t.kind = Kind::Variable;
    t.text = std::move(name);
    return t;
}

Term Term::literal(std::string value) {
    Term t;
    t.kind = Kind::Literal;
    double unused;
    t.numeric = parse_number(value, unused);
    t.text = std::move(value);
    return t;
}

Term Term::literal_number(double value) {
    Term t;
    t.kind = Kind::Literal;
    t.numeric = true;
    char buf[64];
    if (value == std::floor(value) && std::fabs(value) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
    } else {
        std::snprintf(buf, sizeof(buf), "%.12g", value);
    }
    t.text = buf;
    return t;
}

bool is_valid_variable_name(const std::string& name) {
    if (name.size() < 2 || name[0] != '?') return false;
    char c0 = name[1];
    if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
    for (size_t i = 2; i < name.size(); ++i) {
        char c = name[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string canonical_value(const std::string& text) {
    double d;
    if (!parse_number(text, d)) return text;
    return Term::literal_number(d).text;
}

int compare_values(const std::string& lhs, const std::string& rhs) {
    double a, b;
    if (parse_number(lhs, a) && parse_number(rhs, b)) {
        if (a < b) return -1;
        if (a > b) return 1;
        return 0;
    }
    return lhs.compare(rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

}  // namespace qa
