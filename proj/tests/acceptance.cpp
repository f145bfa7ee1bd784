// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. argv[1] is the benchmark scenario directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crashrepro/behmodel/transition_system.hpp"
#include "crashrepro/harness/bundle.hpp"
#include "crashrepro/harness/experiment.hpp"
#include "crashrepro/harness/stats.hpp"
#include "crashrepro/search/fitness.hpp"
#include "crashrepro/seeding/dissimilarity.hpp"
#include "crashrepro/sutlang/interpreter.hpp"

namespace fs = std::filesystem;
using namespace crashrepro;
using behmodel::Rng;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d %s: %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++failures;
}

double now_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

sut::Literal random_scalar(sut::Kind kind, Rng& rng) {
    switch (kind) {
        case sut::Kind::Int: return sut::Literal::of_int((long long)(rng() % 201) - 100);
        case sut::Kind::Bool: return sut::Literal::of_bool(rng() % 2 == 0);
        case sut::Kind::String: {
            static const char* pool[] = {"", "a", "admin", "foo", "x"};
            return sut::Literal::of_string(pool[rng() % 5]);
        }
        default: return sut::Literal::null();
    }
}

// Random straight-line test over the program's classes; roughly half get a
// call to the target method appended so both fitness regimes are exercised.
sut::TestCase random_test(const sut::Program& program, const search::CrashTarget& target,
                          Rng& rng) {
    std::vector<std::string> class_names;
    for (const auto& [name, cls] : program.classes) class_names.push_back(name);

    sut::TestCase test;
    test.name = "gen";
    std::map<std::string, std::string> var_class;
    int next_var = 0;
    auto fresh = [&] { return "v" + std::to_string(next_var++); };
    auto make_args = [&](const sut::MethodDef& m) {
        std::vector<sut::Arg> args;
        for (const auto& [pname, type] : m.params) {
            if (type.kind != sut::Kind::Object) {
                args.push_back(sut::Arg::of_lit(random_scalar(type.kind, rng)));
                continue;
            }
            std::vector<std::string> vars;
            for (const auto& [v, c] : var_class)
                if (c == type.class_name) vars.push_back(v);
            if (!vars.empty() && rng() % 2 == 0)
                args.push_back(sut::Arg::of_var(vars[rng() % vars.size()]));
            else
                args.push_back(sut::Arg::of_lit(sut::Literal::null()));
        }
        return args;
    };

    size_t len = 1 + rng() % 12;
    for (size_t i = 0; i < len; ++i) {
        if (var_class.empty() || rng() % 3 == 0) {
            const std::string& cls_name = class_names[rng() % class_names.size()];
            const sut::ClassDef& cls = program.classes.at(cls_name);
            if (cls.constructors.empty()) continue;
            const sut::MethodDef& ctor = cls.constructors[rng() % cls.constructors.size()];
            std::string var = fresh();
            test.stmts.push_back(sut::TStmt::construct(var, cls_name, make_args(ctor)));
            var_class[var] = cls_name;
        } else {
            auto it = var_class.begin();
            std::advance(it, rng() % var_class.size());
            const sut::ClassDef& cls = program.classes.at(it->second);
            if (cls.methods.empty()) continue;
            const sut::MethodDef& m = cls.methods[rng() % cls.methods.size()];
            test.stmts.push_back(sut::TStmt::call(it->first, m.name, make_args(m), fresh()));
        }
    }
    if (rng() % 2 == 0) {
        std::vector<std::string> recvs;
        for (const auto& [v, c] : var_class)
            if (c == target.target_class) recvs.push_back(v);
        std::string recv;
        if (recvs.empty()) {
            const sut::ClassDef& cls = program.classes.at(target.target_class);
            if (!cls.constructors.empty()) {
                recv = fresh();
                test.stmts.push_back(sut::TStmt::construct(
                    recv, target.target_class,
                    make_args(cls.constructors[rng() % cls.constructors.size()])));
            }
        } else {
            recv = recvs[rng() % recvs.size()];
        }
        if (!recv.empty()) {
            auto overloads = program.classes.at(target.target_class)
                                 .methods_named(target.target_method);
            if (!overloads.empty())
                test.stmts.push_back(sut::TStmt::call(
                    recv, target.target_method,
                    make_args(*overloads[rng() % overloads.size()]), fresh()));
        }
    }
    int line = 1;
    for (auto& s : test.stmts) s.line = line++;
    return test;
}

std::string frames_string(const std::vector<sut::Frame>& frames) {
    std::string out;
    for (const auto& f : frames)
        out += f.cls + "." + f.method + "(" + f.file + ":" + std::to_string(f.line) + ")\n";
    return out;
}

void criterion1_fitness_contract(const fs::path& scenarios) {
    auto start = std::chrono::steady_clock::now();
    Rng rng(42);
    size_t tested = 0, violations = 0;
    std::string first_violation;
    for (const char* name :
         {"sc01-null-deref", "sc02-wrong-exception", "sc03-two-frame", "sc05-chain"}) {
        auto bundle = harness::load_bundle(scenarios / name);
        auto target = search::CrashTarget::from_report(bundle.crash);
        for (int i = 0; i < 3000; ++i) {
            auto test = random_test(bundle.program, target, rng);
            auto fit = search::fitness(test, bundle.program, target);
            ++tested;

            bool ok = true;
            if (fit.total < 0.0 || fit.total > 6.0) ok = false;
            if (std::abs(fit.total - (3 * fit.d_l + 2 * fit.d_e + fit.d_s)) > 1e-9) ok = false;
            if (fit.d_l > 0.0 && fit.d_e != 1.0) ok = false;
            if (fit.d_e != 0.0 && fit.d_s != 1.0) ok = false;

            // total = 0 exactly when the emitted trace matches the required
            // frames (up to the target level) with the right exception type.
            auto result = sut::execute_test(bundle.program, test);
            bool trace_match = false;
            if (result.thrown) {
                auto frames = search::program_frames(*result.thrown);
                size_t need = target.required_frames.size();
                if (frames.size() >= need && result.thrown->type == bundle.crash.exception_type) {
                    frames.resize(need);
                    trace_match =
                        frames_string(frames) == frames_string(target.required_frames);
                }
            }
            if ((fit.total == 0.0) != trace_match) ok = false;

            if (!ok) {
                ++violations;
                if (first_violation.empty())
                    first_violation = std::string(name) + ": " + sut::format_test(test);
            }
        }
    }
    double secs = now_seconds(start);
    bool ok = violations == 0 && tested >= 10000 && secs < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "fitness contract: %zu generated tests, %zu violations, %.1f s", tested,
                  violations, secs);
    report(1, ok, buf + (first_violation.empty() ? "" : " [" + first_violation + "]"));
}

void criterion2_model_inference() {
    Rng rng(7);
    size_t corpora = 0, failures_here = 0;
    const std::vector<std::string> alphabet = {"<init>/0", "a", "b", "c", "d", "e", "f"};
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<analysis::CallSequence> seqs;
        size_t n = 1 + rng() % 10;
        for (size_t i = 0; i < n; ++i) {
            analysis::CallSequence seq;
            seq.class_name = "C";
            size_t len = 1 + rng() % 8;
            for (size_t j = 0; j < len; ++j) seq.actions.push_back(alphabet[rng() % alphabet.size()]);
            seqs.push_back(std::move(seq));
        }
        std::set<analysis::CallSequence> corpus(seqs.begin(), seqs.end());
        auto model = behmodel::infer_model("C", corpus);
        ++corpora;

        bool ok = true;
        for (const auto& s : corpus)
            if (!behmodel::accepts(model, s.actions)) ok = false;

        // Insertion order must not matter: rebuild from a shuffled copy.
        std::shuffle(seqs.begin(), seqs.end(), rng);
        std::set<analysis::CallSequence> shuffled(seqs.begin(), seqs.end());
        auto model2 = behmodel::infer_model("C", shuffled);
        if (behmodel::format_model(model) != behmodel::format_model(model2)) ok = false;

        if (!ok) ++failures_here;
    }

    // The iterator corpus must yield a cyclic model that keeps accepting
    // longer alternations than any training sequence.
    std::set<analysis::CallSequence> iter;
    iter.insert({"It", {"hasNext", "next"}, analysis::SequenceOrigin::Dynamic});
    iter.insert({"It", {"hasNext", "next", "hasNext", "next"}, analysis::SequenceOrigin::Dynamic});
    auto model = behmodel::infer_model("It", iter);
    bool cycle_ok = model.has_transition("next", "hasNext") &&
                    behmodel::accepts(model, {"hasNext", "next", "hasNext", "next", "hasNext",
                                              "next"});
    if (!cycle_ok) ++failures_here;

    char buf[120];
    std::snprintf(buf, sizeof buf, "model inference oracle: %zu corpora, %zu failures", corpora,
                  failures_here);
    report(2, failures_here == 0, buf);
}

void criterion3_jaccard() {
    Rng rng(11);
    auto random_behavior = [&] {
        behmodel::AbstractObjectBehavior b;
        b.class_name = "C";
        size_t len = rng() % 10;
        for (size_t i = 0; i < len; ++i) b.actions.push_back(std::string(1, char('a' + rng() % 8)));
        return b;
    };
    size_t violations = 0;
    for (int i = 0; i < 10000; ++i) {
        auto a = random_behavior(), b = random_behavior(), c = random_behavior();
        double ab = seeding::jaccard_distance(a, b);
        double ba = seeding::jaccard_distance(b, a);
        double bc = seeding::jaccard_distance(b, c);
        double ac = seeding::jaccard_distance(a, c);
        if (ab != ba) ++violations;
        if (seeding::jaccard_distance(a, a) != 0.0) ++violations;
        if (ac > ab + bc + 1e-12) ++violations;
        if (ab < 0.0 || ab > 1.0) ++violations;
    }

    auto mk = [](std::vector<std::string> actions) {
        return behmodel::AbstractObjectBehavior{"C", std::move(actions)};
    };
    bool worked = seeding::jaccard_distance(mk({"m1", "m2"}), mk({"m2", "m1", "m1"})) == 0.0 &&
                  seeding::jaccard_distance(mk({"m1", "m2"}), mk({"m3"})) == 1.0 &&
                  seeding::jaccard_distance(mk({"m1", "m2"}), mk({"m1", "m3"})) ==
                      1.0 - 1.0 / 3.0;
    if (!worked) ++violations;

    char buf[120];
    std::snprintf(buf, sizeof buf, "Jaccard metric: 10000 triples, %zu violations", violations);
    report(3, violations == 0, buf);
}

void criterion4_a12() {
    Rng rng(13);
    size_t violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a, b;
        size_t na = 1 + rng() % 30, nb = 1 + rng() % 30;
        for (size_t i = 0; i < na; ++i) a.push_back((double)(rng() % 10));
        for (size_t i = 0; i < nb; ++i) b.push_back((double)(rng() % 10));

        double brute = 0.0;
        for (double x : a)
            for (double y : b) brute += x < y ? 1.0 : (x == y ? 0.5 : 0.0);
        brute /= (double)(na * nb);

        double fast = harness::vargha_delaney_a12(a, b);
        double comp = harness::vargha_delaney_a12(b, a);
        worst = std::max(worst, std::abs(fast - brute));
        if (std::abs(fast - brute) > 1e-12) ++violations;
        if (std::abs(fast + comp - 1.0) > 1e-12) ++violations;
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "effect-size oracle equivalence: 1000 pairs, %zu violations, max diff %.2e",
                  violations, worst);
    report(4, violations == 0, buf);
}

void criterion5_benchmark(const fs::path& scenarios) {
    auto start = std::chrono::steady_clock::now();
    harness::ExperimentConfig config;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(scenarios))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) config.scenarios.push_back(harness::load_bundle(dir));
    config.modes = {search::SeedingMode::None, search::SeedingMode::Test,
                    search::SeedingMode::Model};
    config.repetitions = 20;
    config.seed_base = 100;
    config.base.budget = 20000;
    config.base.population_size = 100;
    config.base.seeding.behaviors_per_model = 100;

    auto rep = harness::run_experiment(config);

    std::map<std::pair<std::string, std::string>, double> ratio;
    for (const auto& agg : rep.json["aggregates"])
        ratio[{agg["scenario"], agg["mode"]}] = agg["reproduced-ratio"];

    size_t none_count = 0, model_count = 0;
    for (const auto& bundle : config.scenarios) {
        if (ratio[{bundle.name, "none"}] >= 0.5) ++none_count;
        if (ratio[{bundle.name, "model"}] >= 0.5) ++model_count;
    }

    double sc08_model = ratio[{"sc08-model-chain", "model"}];
    double sc08_none = ratio[{"sc08-model-chain", "none"}];
    double sc09_model = ratio[{"sc09-loop-recombination", "model"}];
    double sc09_none = ratio[{"sc09-loop-recombination", "none"}];
    double sc10_test = ratio[{"sc10-test-literals", "test"}];

    size_t sc07_not_started = 0, sc07_runs = 0;
    for (const auto& run : rep.json["runs"])
        if (run["scenario"] == "sc07-not-started" && run["mode"] == "none") {
            ++sc07_runs;
            if (run["status"] == "not-started") ++sc07_not_started;
        }

    double secs = now_seconds(start);
    bool ok = config.scenarios.size() >= 10 && model_count >= none_count &&
              sc08_model >= 0.8 && sc08_none <= 0.2 && sc09_model >= 0.8 &&
              sc09_none <= 0.2 && sc10_test >= 0.8 && sc07_runs == 20 &&
              sc07_not_started == sc07_runs && secs < 1800.0;
    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "benchmark differential: scenarios reproduced none=%zu model=%zu; "
                  "showcase ratios model/none sc08 %.2f/%.2f sc09 %.2f/%.2f; sc10 test %.2f; "
                  "not-started %zu/%zu; %.0f s",
                  none_count, model_count, sc08_model, sc08_none, sc09_model, sc09_none,
                  sc10_test, sc07_not_started, sc07_runs, secs);
    report(5, ok, buf);
}

void criterion6_determinism(const fs::path& scenarios) {
    search::SearchConfig config;
    config.budget = 2000;
    config.population_size = 30;
    config.seeding.behaviors_per_model = 30;
    config.seed = 7;
    config.mode = search::SeedingMode::Model;

    auto bundle1 = harness::load_bundle(scenarios / "sc09-loop-recombination");
    auto bundle2 = harness::load_bundle(scenarios / "sc09-loop-recombination");
    auto r1 = harness::run_pipeline(bundle1, config);
    auto r2 = harness::run_pipeline(bundle2, config);
    bool json_same = harness::outcome_json(r1.outcome, config).dump() ==
                     harness::outcome_json(r2.outcome, config).dump();

    auto make_experiment = [&] {
        harness::ExperimentConfig ec;
        ec.scenarios.push_back(harness::load_bundle(scenarios / "sc01-null-deref"));
        ec.scenarios.push_back(harness::load_bundle(scenarios / "sc10-test-literals"));
        ec.modes = {search::SeedingMode::None, search::SeedingMode::Test};
        ec.repetitions = 2;
        ec.seed_base = 5;
        ec.base.budget = 2000;
        ec.base.population_size = 30;
        return harness::run_experiment(ec);
    };
    auto e1 = make_experiment();
    auto e2 = make_experiment();
    bool csv_same = e1.csv == e2.csv && e1.json.dump() == e2.json.dump();

    report(6, json_same && csv_same,
           std::string("determinism: outcome JSON ") + (json_same ? "identical" : "DIFFERS") +
               ", experiment CSV+JSON " + (csv_same ? "identical" : "DIFFERS"));
}

void criterion7_defaults() {
    search::SearchConfig config;
    auto j = harness::outcome_json(search::SearchOutcome{}, config);
    const auto& c = j["config"];
    bool ok = c["population"] == 100 && c["budget"] == 62328 && c["pick-mut"] == 0.3 &&
              c["concretizations-per-behavior"] == 1 && c["behaviors-per-model"] == 100 &&
              c["max-test-length"] == 40 && c["mutation-rate"] == "1/length";
    report(7, ok,
           "default configuration echo: population 100, budget 62328, pick-mut 0.3, "
           "n-conc 1, behavior-set size 100");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <scenario-dir>\n");
        return 64;
    }
    fs::path scenarios = argv[1];
    criterion1_fitness_contract(scenarios);
    criterion2_model_inference();
    criterion3_jaccard();
    criterion4_a12();
    criterion5_benchmark(scenarios);
    criterion6_determinism(scenarios);
    criterion7_defaults();
    return failures;
}
