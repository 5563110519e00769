#include <doctest.h>

#include <random>

#include "qa/kb_store.hpp"
#include "test_util.hpp"

using namespace qa;

static TripleStore main_kb() {
    return TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
}

TEST_CASE("loader reads the tab-separated format and cvt declarations") {
    auto kb = main_kb();
    CHECK(kb.size() == 13);
    CHECK(kb.is_cvt("cvt.award_1"));
    CHECK(kb.is_cvt("cvt.award_2"));
    CHECK_FALSE(kb.is_cvt("m.tom_kilburn"));
    CHECK(kb.has_node("1024"));
}

TEST_CASE("loader rejects malformed lines") {
    CHECK_THROWS_AS(TripleStore::parse("a\tb\n"), QueryError);
    CHECK_THROWS_AS(TripleStore::parse("a\tb\tc\td\n"), QueryError);
    CHECK_NOTHROW(TripleStore::parse("a\tb\tc\n\n#cvt x\n"));
}

TEST_CASE("relations_of merges both directions, sorted and de-duplicated") {
    auto kb = main_kb();
    auto rels = kb.relations_of("m.tom_kilburn");
    CHECK(rels == std::vector<std::string>{"award.award_winner.awards_won",
                                           "computer.computer_designer.computers_designed",
                                           "people.person.nationality"});
    // m.manchester_baby appears only as an object for the design relation and
    // as a subject for its attributes.
    auto baby = kb.relations_of("m.manchester_baby");
    CHECK(std::count(baby.begin(), baby.end(),
                     "computer.computer_designer.computers_designed") == 1);
    CHECK(std::count(baby.begin(), baby.end(), "computer.computer.memory_size") == 1);
    CHECK(std::is_sorted(baby.begin(), baby.end()));
}

TEST_CASE("get_relation on a variable unions over its bindings") {
    auto kb = main_kb();
    BindingTable bindings;
    bindings.columns = {"?computer"};
    bindings.rows = {{"m.manchester_baby"}, {"m.manchester_mark_1"}};
    auto rels = kb.get_relation(Term::variable("?computer"), bindings);
    CHECK(std::find(rels.begin(), rels.end(), "computer.computer.memory_size") != rels.end());
    CHECK(std::find(rels.begin(), rels.end(), "computer.computer.introduction_year") !=
          rels.end());
    CHECK(std::is_sorted(rels.begin(), rels.end()));
    CHECK(std::adjacent_find(rels.begin(), rels.end()) == rels.end());

    // Unbound variables and literals are hard errors; an unknown entity just
    // has no relations (the agent vets entity names before the store sees them).
    BindingTable none;
    CHECK_THROWS_AS(kb.get_relation(Term::variable("?ghost"), none), QueryError);
    CHECK_THROWS_AS(kb.get_relation(Term::literal("42"), none), QueryError);
    CHECK(kb.get_relation(Term::entity("m.nobody"), none).empty());
    // A linked entity with no edges gives an empty list, not an error.
    auto kb2 = TripleStore::parse("a\tr\tb\n");
    CHECK(kb2.get_relation(Term::entity("b"), none) ==
          std::vector<std::string>{"r"});
}

TEST_CASE("evaluate matches the brute-force oracle on the main fixture") {
    auto kb = main_kb();

    QueryProgram p(Dialect::Triple);
    p.add_fact(Term::entity("m.tom_kilburn"),
               "computer.computer_designer.computers_designed", Term::variable("?computer"));
    p.add_fact(Term::variable("?computer"), "computer.computer.memory_size",
               Term::variable("?mem"));
    p.add_filter(Term::variable("?mem"), ">", Term::literal("2000"));
    p.set_answer("?computer");

    auto got = kb.evaluate(p);
    auto want = qa::test::oracle_evaluate(kb, p);
    CHECK(got.bindings == want.bindings);
    CHECK(got.answer == want.answer);
    CHECK(got.answer == AnswerSet::of({"m.manchester_mark_1"}));
}

TEST_CASE("aggregations agree with the oracle") {
    auto kb = main_kb();

    QueryProgram count_p(Dialect::Triple);
    count_p.add_fact(Term::entity("m.tom_kilburn"),
                     "computer.computer_designer.computers_designed",
                     Term::variable("?computer"));
    count_p.add_count("?computer");
    count_p.set_answer("?computer");
    CHECK(kb.evaluate(count_p).answer == AnswerSet::single("2"));
    CHECK(kb.evaluate(count_p).answer == qa::test::oracle_evaluate(kb, count_p).answer);

    QueryProgram max_p(Dialect::Triple);
    max_p.add_fact(Term::entity("m.tom_kilburn"),
                   "computer.computer_designer.computers_designed",
                   Term::variable("?computer"));
    max_p.add_fact(Term::variable("?computer"), "computer.computer.introduction_year",
                   Term::variable("?year"));
    max_p.add_max("?year");
    max_p.set_answer("?year");
    CHECK(kb.evaluate(max_p).answer == AnswerSet::single("1949"));
    CHECK(kb.evaluate(max_p).answer == qa::test::oracle_evaluate(kb, max_p).answer);
}

TEST_CASE("randomized evaluate vs oracle") {
    std::mt19937 rng(20240817);
    auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };

    for (int iter = 0; iter < 200; ++iter) {
        // Random small store.
        std::vector<std::string> nodes = {"a", "b", "c", "d", "7", "12", "30"};
        std::vector<std::string> rels = {"r0", "r1", "r2"};
        TripleStore store;
        size_t ntriples = 3 + pick(20);
        for (size_t i = 0; i < ntriples; ++i) {
            store.add(nodes[pick(nodes.size())], rels[pick(rels.size())],
                      nodes[pick(nodes.size())]);
        }

        // Random program: up to 3 patterns chained through up to 3 variables.
        QueryProgram p(Dialect::Triple);
        std::vector<std::string> vars;
        size_t npatterns = 1 + pick(3);
        for (size_t i = 0; i < npatterns; ++i) {
            Term head = Term::entity(nodes[pick(nodes.size())]);
            if (!vars.empty() && pick(2) == 0) {
                head = Term::variable(vars[pick(vars.size())]);
            }
            Term tail = Term::entity(nodes[pick(nodes.size())]);
            size_t roll = pick(3);
            if (roll == 0 && vars.size() < 3) {
                std::string v = "?v" + std::to_string(vars.size());
                vars.push_back(v);
                tail = Term::variable(v);
            } else if (roll == 1 && !vars.empty()) {
                tail = Term::variable(vars[pick(vars.size())]);
            }
            p.add_fact(head, rels[pick(rels.size())], tail);
        }
        if (!vars.empty() && pick(2) == 0) {
            static const char* ops[] = {">", "<", "=", ">=", "<=", "!="};
            p.add_filter(Term::variable(vars[pick(vars.size())]), ops[pick(6)],
                         Term::literal(nodes[pick(nodes.size())]));
        }
        if (!vars.empty()) {
            std::string target = vars[pick(vars.size())];
            size_t agg = pick(4);
            if (agg == 1) p.add_count(target);
            if (agg == 2) p.add_max(target);
            if (agg == 3) p.add_min(target);
            p.set_answer(vars[pick(vars.size())]);
        }

        auto got = store.evaluate(p);
        auto want = qa::test::oracle_evaluate(store, p);
        REQUIRE(got.bindings == want.bindings);
        REQUIRE(got.empty == want.empty);
        REQUIRE(got.has_answer == want.has_answer);
        if (got.has_answer) REQUIRE(got.answer == want.answer);
    }
}

TEST_CASE("adding constraints never grows the result") {
    auto kb = main_kb();
    QueryProgram base(Dialect::Triple);
    base.add_fact(Term::entity("m.tom_kilburn"),
                  "computer.computer_designer.computers_designed",
                  Term::variable("?computer"));
    size_t before = kb.evaluate(base).bindings.rows.size();

    QueryProgram filtered = base;
    filtered.add_filter(Term::variable("?computer"), "!=",
                        Term::entity("m.manchester_baby"));
    CHECK(kb.evaluate(filtered).bindings.rows.size() <= before);

    QueryProgram joined = base;
    joined.add_fact(Term::variable("?computer"), "computer.computer.introduction_year",
                    Term::literal("1948"));
    CHECK(kb.evaluate(joined).bindings.rows.size() <= before);
}

TEST_CASE("evaluate is side-effect free and repeatable") {
    auto kb = main_kb();
    QueryProgram p(Dialect::Triple);
    p.add_fact(Term::entity("m.tom_kilburn"), "people.person.nationality",
               Term::variable("?n"));
    auto triples_before = kb.triples();
    auto calls_before = p.calls().size();
    auto first = kb.evaluate(p);
    auto second = kb.evaluate(p);
    CHECK(first.bindings == second.bindings);
    CHECK(kb.triples() == triples_before);
    CHECK(p.calls().size() == calls_before);
}

TEST_CASE("filter on a variable no pattern binds is an engine error") {
    auto kb = main_kb();
    QueryProgram p(Dialect::Triple);
    p.add_fact(Term::entity("m.tom_kilburn"), "people.person.nationality",
               Term::variable("?n"));
    p.add_filter(Term::variable("?loose"), ">", Term::literal("1"));
    try {
        kb.evaluate(p);
        FAIL("expected an engine error");
    } catch (const QueryError& e) {
        CHECK(e.code() == ErrorCode::EngineError);
    }
}

TEST_CASE("is_cvt_only") {
    auto kb = main_kb();
    BindingTable bindings;
    bindings.columns = {"?a"};

    SUBCASE("empty binding set is not a cvt answer") {
        CHECK_FALSE(kb.is_cvt_only("?a", bindings));
    }
    SUBCASE("all-cvt bindings") {
        bindings.rows = {{"cvt.award_1"}, {"cvt.award_2"}};
        CHECK(kb.is_cvt_only("?a", bindings));
    }
    SUBCASE("mixed bindings") {
        bindings.rows = {{"cvt.award_1"}, {"m.royal_medal"}};
        CHECK_FALSE(kb.is_cvt_only("?a", bindings));
    }
    SUBCASE("variable absent from the table") {
        bindings.rows = {{"cvt.award_1"}};
        CHECK_FALSE(kb.is_cvt_only("?other", bindings));
    }
}
