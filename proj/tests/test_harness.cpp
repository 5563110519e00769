#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "qa/harness.hpp"
#include "test_util.hpp"

using namespace qa;

TEST_CASE("set-based f1") {
    CHECK(f1_score(AnswerSet::of({"a", "b"}), AnswerSet::of({"b", "c"})) ==
          doctest::Approx(0.5));
    CHECK(f1_score(AnswerSet::of({"a", "b"}), AnswerSet::of({"a", "b"})) ==
          doctest::Approx(1.0));
    CHECK(f1_score(AnswerSet{}, AnswerSet{}) == doctest::Approx(1.0));
    CHECK(f1_score(AnswerSet{}, AnswerSet::of({"a"})) == doctest::Approx(0.0));
    CHECK(f1_score(AnswerSet::of({"a"}), AnswerSet{}) == doctest::Approx(0.0));
    // precision 1/3, recall 1/1 -> 0.5
    CHECK(f1_score(AnswerSet::of({"a", "b", "c"}), AnswerSet::of({"a"})) ==
          doctest::Approx(0.5));
}

TEST_CASE("denotation accuracy is exact set equality after canonicalization") {
    CHECK(denotation_accuracy(AnswerSet::of({"a", "b"}), AnswerSet::of({"b", "a"})) == 1);
    CHECK(denotation_accuracy(AnswerSet::of({"a"}), AnswerSet::of({"a", "b"})) == 0);
    CHECK(denotation_accuracy(AnswerSet::single("3.0"), AnswerSet::single("3")) == 1);
    CHECK(denotation_accuracy(AnswerSet{}, AnswerSet{}) == 1);
}

TEST_CASE("fixture suites load with resolved transcript paths") {
    auto fixtures =
        load_fixture_suite(qa::test::fixture_path("questions/triple_suite.json"));
    REQUIRE(fixtures.size() == 10);
    CHECK(fixtures[0].id == "q01");
    CHECK(fixtures[0].dialect == Dialect::Triple);
    CHECK(fixtures[0].entities == std::vector<std::string>{"m.tom_kilburn"});
    CHECK(fixtures[0].gold_answer ==
          AnswerSet::of({"m.manchester_baby", "m.manchester_mark_1"}));
    CHECK_FALSE(fixtures[0].gold_answer.scalar);
    // Scalar golds come from JSON strings.
    CHECK(fixtures[1].gold_answer == AnswerSet::single("2"));
    CHECK(fixtures[1].gold_answer.scalar);
    // The transcript opens from the resolved path.
    CHECK(ScriptedClient::load_file(fixtures[0].transcript_path).entries_total() == 4);

    auto single =
        QuestionFixture::load_file(qa::test::fixture_path("questions/figure2.json"));
    CHECK(single.question == "which computers did tom kilburn design?");
}

TEST_CASE("benchmark on the clean suite is perfect and cheap") {
    auto kb = TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
    Environment env;
    env.kb = &kb;
    auto fixtures =
        load_fixture_suite(qa::test::fixture_path("questions/triple_suite.json"));

    auto report = run_benchmark({}, fixtures, env);
    REQUIRE(report.questions.size() == 10);
    CHECK(report.macro_f1 == doctest::Approx(1.0));
    CHECK(report.mean_qpq == doctest::Approx(5.5));  // 55 store queries over 10 questions
    CHECK(report.total_store_queries == 55);
    CHECK(report.denotation_accuracy == -1.0);  // no TABLE questions in this suite
    CHECK(report.mean_cpq > 0);
    for (const auto& q : report.questions) {
        CHECK(q.error.empty());
        CHECK(q.corrections == 0);
    }

    auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["aggregate"]["macro_f1"] == doctest::Approx(1.0));
    CHECK(j["questions"].size() == 10);
    CHECK(report.render_text().find("macro_f1=1") != std::string::npos);
}

TEST_CASE("parallel and sequential benchmarks agree") {
    auto kb = TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
    Environment env;
    env.kb = &kb;
    auto fixtures =
        load_fixture_suite(qa::test::fixture_path("questions/triple_suite.json"));

    BenchmarkOptions sequential;
    BenchmarkOptions parallel;
    parallel.workers = 4;
    auto a = run_benchmark(sequential, fixtures, env);
    auto b = run_benchmark(parallel, fixtures, env);
    REQUIRE(a.questions.size() == b.questions.size());
    for (size_t i = 0; i < a.questions.size(); ++i) {
        CHECK(a.questions[i].id == b.questions[i].id);
        CHECK(a.questions[i].f1 == b.questions[i].f1);
        CHECK(a.questions[i].store_queries == b.questions[i].store_queries);
    }
    CHECK(a.macro_f1 == b.macro_f1);
    CHECK(a.total_store_queries == b.total_store_queries);
}

TEST_CASE("table suites report denotation accuracy") {
    auto table = Table::load_file(qa::test::fixture_path("tables/games.csv"), "games");
    Environment env;
    env.table = &table;
    auto fixtures =
        load_fixture_suite(qa::test::fixture_path("questions/table_suite.json"));

    auto report = run_benchmark({}, fixtures, env);
    REQUIRE(report.questions.size() == 3);
    CHECK(report.macro_f1 == doctest::Approx(1.0));
    CHECK(report.denotation_accuracy == doctest::Approx(1.0));
}

TEST_CASE("a broken fixture is reported, not fatal") {
    auto kb = TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
    Environment env;
    env.kb = &kb;
    auto fixtures =
        load_fixture_suite(qa::test::fixture_path("questions/triple_suite.json"));
    fixtures[4].transcript_path = "/no/such/file.txt";

    auto report = run_benchmark({}, fixtures, env);
    CHECK_FALSE(report.questions[4].error.empty());
    CHECK(report.questions[4].f1 == 0);
    for (size_t i = 0; i < report.questions.size(); ++i) {
        if (i != 4) CHECK(report.questions[i].error.empty());
    }
    CHECK(report.macro_f1 == doctest::Approx(0.9));
}

TEST_CASE("error-recovery suite: the guideline observation is shorter than few-shot text") {
    auto kb = TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
    Environment env;
    env.kb = &kb;
    auto fixtures = load_fixture_suite(qa::test::fixture_path("questions/error_suite.json"));

    BenchmarkOptions eraser;
    BenchmarkOptions fewshot;
    fewshot.strategy = CorrectionStrategy::FewShotSC;
    auto report_eraser = run_benchmark(eraser, fixtures, env);
    auto report_fewshot = run_benchmark(fewshot, fixtures, env);

    // Targeted guidelines recover every question; the fixed long appendix does
    // not, and it inflates the prompt (and therefore the cost) besides.
    CHECK(report_eraser.macro_f1 == doctest::Approx(1.0));
    CHECK(report_fewshot.macro_f1 < report_eraser.macro_f1);
    CHECK(report_fewshot.mean_cpq > report_eraser.mean_cpq);
}

TEST_CASE("golden trace replays byte-identically and tampering is caught") {
    auto kb = TripleStore::load_file(qa::test::fixture_path("kb/main.kb"));
    Environment env;
    env.kb = &kb;
    auto fixture =
        QuestionFixture::load_file(qa::test::fixture_path("questions/figure2.json"));

    CHECK(replay_trace(qa::test::fixture_path("golden/figure2.trace"), fixture, env, {}) ==
          "");

    // A modified stored trace must be flagged.
    std::string tampered = "tampered_trace_test.txt";
    {
        std::ifstream in(qa::test::fixture_path("golden/figure2.trace"));
        std::ofstream out(tampered);
        out << in.rdbuf() << "extra line\n";
    }
    CHECK_FALSE(replay_trace(tampered, fixture, env, {}).empty());
    std::remove(tampered.c_str());
}
