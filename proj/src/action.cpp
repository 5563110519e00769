#include "qa/action.hpp"

#include <regex>

namespace qa {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_args(const std::string& text) {
    std::vector<std::string> args;
    if (trim(text).empty()) return args;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            args.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    args.push_back(trim(cur));
    return args;
}

}  // namespace

ParsedAction parse_action(const std::string& text) {
    static const std::regex line_re(R"(Action\s*(\d+)\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*)");
    ParsedAction action;
    action.raw = text;
    std::string last_line;
    std::smatch last_match;
    auto begin = std::sregex_iterator(text.begin(), text.end(), line_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        last_match = *it;
        action.parsed = true;
    }
    if (!action.parsed) return action;
    action.step = std::stoi(last_match[1].str());
    action.name = last_match[2].str();
    action.args = split_args(last_match[3].str());
    action.raw = last_match[0].str();
    return action;
}

std::string parse_thought(const std::string& text) {
    static const std::regex thought_re(R"(Thought\s*\d+\s*:\s*(.*))");
    std::smatch m;
    if (std::regex_search(text, m, thought_re)) {
        std::string t = m[1].str();
        while (!t.empty() && (t.back() == '\r' || t.back() == '\n')) t.pop_back();
        return t;
    }
    return "";
}

const std::vector<std::string>& action_names(Dialect dialect) {
    static const std::vector<std::string> triple = {
        "get_relation", "add_fact", "add_max",    "add_min",
        "add_count",    "add_filter", "set_answer", "execute"};
    static const std::vector<std::string> table = {"get_column", "add_condition",
                                                   "set_answer", "execute"};
    return dialect == Dialect::Triple ? triple : table;
}

int action_arity(Dialect dialect, const std::string& name) {
    if (name == "execute") return 0;
    if (dialect == Dialect::Triple) {
        if (name == "get_relation" || name == "add_max" || name == "add_min" ||
            name == "add_count" || name == "set_answer") {
            return 1;
        }
        if (name == "add_fact" || name == "add_filter") return 3;
    } else {
        if (name == "get_column") return 1;
        if (name == "set_answer") return 2;
        if (name == "add_condition") return 3;
    }
    return -1;
}

std::string action_signature(Dialect dialect, const std::string& name) {
    if (dialect == Dialect::Triple) {
        if (name == "get_relation") return "get_relation(entity_or_variable)";
        if (name == "add_fact") return "add_fact(head,relation,tail)";
        if (name == "add_max") return "add_max(max_var)";
        if (name == "add_min") return "add_min(min_var)";
        if (name == "add_count") return "add_count(count_var)";
        if (name == "add_filter") return "add_filter(ob1,op,ob2)";
        if (name == "set_answer") return "set_answer(ans_var)";
    } else {
        if (name == "get_column") return "get_column(column)";
        if (name == "add_condition") return "add_condition(column,op,value)";
        if (name == "set_answer") return "set_answer(column,aggregation_type)";
    }
    if (name == "execute") return "execute()";
    return name + "(...)";
}

}  // namespace qa
