#include "qa/harness.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qa {

namespace {

AnswerSet answer_from_json(const nlohmann::json& j) {
    AnswerSet a;
    if (j.is_array()) {
        for (const auto& v : j) {
            a.insert(v.is_string() ? v.get<std::string>() : v.dump());
        }
    } else {
        a.scalar = true;
        a.insert(j.is_string() ? j.get<std::string>() : j.dump());
    }
    return a;
}

QuestionFixture fixture_from_json(const nlohmann::json& j, const std::string& base_dir) {
    QuestionFixture f;
    f.id = j.at("id").get<std::string>();
    f.question = j.at("question").get<std::string>();
    if (j.contains("entities")) {
        for (const auto& e : j["entities"]) f.entities.push_back(e.get<std::string>());
    }
    f.gold_answer = answer_from_json(j.at("gold_answer"));
    f.dialect = j.value("dialect", std::string("triple")) == "table" ? Dialect::Table
                                                                    : Dialect::Triple;
    if (j.contains("transcript")) {
        f.transcript_path =
            (std::filesystem::path(base_dir) / j["transcript"].get<std::string>()).string();
    }
    return f;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QueryError(ErrorCode::BadFixture, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

QuestionFixture QuestionFixture::load_file(const std::string& path) {
    auto j = nlohmann::json::parse(read_file(path));
    return fixture_from_json(j, std::filesystem::path(path).parent_path().string());
}

std::vector<QuestionFixture> load_fixture_suite(const std::string& path) {
    auto j = nlohmann::json::parse(read_file(path));
    std::string base = std::filesystem::path(path).parent_path().string();
    std::vector<QuestionFixture> fixtures;
    for (const auto& item : j) fixtures.push_back(fixture_from_json(item, base));
    return fixtures;
}

namespace {

QuestionReport run_one(const QuestionFixture& fixture, const Environment& env,
                       const BenchmarkOptions& options) {
    QuestionReport report;
    report.id = fixture.id;
    try {
        ScriptedClient llm = ScriptedClient::load_file(fixture.transcript_path);
        AgentConfig config;
        config.max_steps = options.max_steps;
        config.strategy = options.strategy;
        config.seed = options.seed;
        config.instruction = default_instruction(fixture.dialect);
        config.one_shot_example = default_one_shot_example(fixture.dialect);
        TriggerRegistry registry = TriggerRegistry::standard();

        EpisodeTrace trace =
            run_episode(config, fixture.question, fixture.entities, env, llm, registry);

        AnswerSet predicted = trace.final_answer.value_or(AnswerSet{});
        report.f1 = f1_score(predicted, fixture.gold_answer);
        report.denotation = denotation_accuracy(predicted, fixture.gold_answer);
        report.steps = static_cast<long>(trace.steps.size());
        for (const auto& s : trace.steps) {
            if (s.was_correction) ++report.corrections;
        }
        report.store_queries = trace.counters.store_queries;
        report.llm_calls = trace.counters.llm_calls;
        report.cost = trace.counters.ledger.dollars();
        report.wall_ms = trace.counters.wall_ms;
        if (!trace.abort_reason.empty()) report.error = trace.abort_reason;
    } catch (const std::exception& e) {
        report.error = e.what();
    }
    return report;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkOptions& options,
                              const std::vector<QuestionFixture>& fixtures,
                              const Environment& env) {
    BenchmarkReport report;
    report.questions.resize(fixtures.size());

    int workers = std::max(1, options.workers);
    if (workers == 1) {
        for (size_t i = 0; i < fixtures.size(); ++i) {
            report.questions[i] = run_one(fixtures[i], env, options);
        }
    } else {
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        for (int w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&]() {
                while (true) {
                    size_t i = next.fetch_add(1);
                    if (i >= fixtures.size()) break;
                    report.questions[i] = run_one(fixtures[i], env, options);
                }
            }));
        }
        for (auto& f : futures) f.get();
    }

    double f1_sum = 0, tpq_sum = 0, qpq_sum = 0, cpq_sum = 0;
    long table_total = 0, table_hits = 0;
    for (size_t i = 0; i < fixtures.size(); ++i) {
        const auto& q = report.questions[i];
        f1_sum += q.f1;
        tpq_sum += static_cast<double>(q.wall_ms);
        qpq_sum += static_cast<double>(q.store_queries);
        cpq_sum += q.cost;
        report.total_store_queries += q.store_queries;
        report.total_llm_calls += q.llm_calls;
        if (fixtures[i].dialect == Dialect::Table) {
            ++table_total;
            table_hits += q.denotation;
        }
    }
    size_t n = fixtures.size();
    report.macro_f1 = n ? f1_sum / n : 0;
    report.mean_tpq_ms = n ? tpq_sum / n : 0;
    report.mean_qpq = n ? qpq_sum / n : 0;
    report.mean_cpq = n ? cpq_sum / n : 0;
    report.denotation_accuracy =
        table_total ? static_cast<double>(table_hits) / table_total : -1.0;
    return report;
}

std::string BenchmarkReport::to_json() const {
    nlohmann::json j;
    j["questions"] = nlohmann::json::array();
    for (const auto& q : questions) {
        j["questions"].push_back({{"id", q.id},
                                  {"f1", q.f1},
                                  {"denotation", q.denotation},
                                  {"steps", q.steps},
                                  {"corrections", q.corrections},
                                  {"store_queries", q.store_queries},
                                  {"llm_calls", q.llm_calls},
                                  {"cost", q.cost},
                                  {"wall_ms", q.wall_ms},
                                  {"error", q.error}});
    }
    j["aggregate"] = {{"macro_f1", macro_f1},
                      {"denotation_accuracy", denotation_accuracy},
                      {"mean_tpq_ms", mean_tpq_ms},
                      {"mean_qpq", mean_qpq},
                      {"mean_cpq", mean_cpq},
                      {"total_store_queries", total_store_queries},
                      {"total_llm_calls", total_llm_calls}};
    return j.dump(2) + "\n";
}

std::string BenchmarkReport::render_text() const {
    std::ostringstream out;
    out << "id\tf1\tsteps\tcorr\tqpq\tcost\twall_ms\terror\n";
    for (const auto& q : questions) {
        out << q.id << "\t" << q.f1 << "\t" << q.steps << "\t" << q.corrections << "\t"
            << q.store_queries << "\t" << q.cost << "\t" << q.wall_ms << "\t" << q.error
            << "\n";
    }
    out << "macro_f1=" << macro_f1;
    if (denotation_accuracy >= 0) out << " denotation_accuracy=" << denotation_accuracy;
    out << " mean_tpq_ms=" << mean_tpq_ms << " mean_qpq=" << mean_qpq
        << " mean_cpq=" << mean_cpq << "\n";
    return out.str();
}

std::string replay_trace(const std::string& trace_path, const QuestionFixture& fixture,
                         const Environment& env, const BenchmarkOptions& options) {
    std::string stored = read_file(trace_path);

    ScriptedClient llm = ScriptedClient::load_file(fixture.transcript_path);
    AgentConfig config;
    config.max_steps = options.max_steps;
    config.strategy = options.strategy;
    config.seed = options.seed;
    config.instruction = default_instruction(fixture.dialect);
    config.one_shot_example = default_one_shot_example(fixture.dialect);
    TriggerRegistry registry = TriggerRegistry::standard();

    EpisodeTrace trace =
        run_episode(config, fixture.question, fixture.entities, env, llm, registry);
    std::string fresh = serialize_trace(trace);
    if (fresh != stored) {
        return "trace mismatch: stored " + std::to_string(stored.size()) +
               " bytes, replay produced " + std::to_string(fresh.size()) + " bytes";
    }
    return "";
}

}  // namespace qa
