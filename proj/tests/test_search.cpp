#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "crashrepro/search/ga.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"

using namespace crashrepro;
using namespace crashrepro::search;

namespace {

const char* kSut =
    "class A {\n"                                 // 1
    "  field z: int;\n"                           // 2
    "  constructor() { this.z = 0; }\n"           // 3
    "  method m(k: int) {\n"                      // 4
    "    x = 10 / k;\n"                           // 5
    "    this.z = x;\n"                           // 6
    "    y = this.z + 1;\n"                       // 7
    "    return y;\n"                             // 8
    "  }\n"                                       // 9
    "}\n"                                         // 10
    "class B {\n"                                 // 11
    "  field a: A;\n"                             // 12
    "  constructor() { this.a = new A(); }\n"     // 13
    "  method go(k: int) {\n"                     // 14
    "    w = this.a;\n"                           // 15
    "    v = w.m(k);\n"                           // 16
    "    return v;\n"                             // 17
    "  }\n"                                       // 18
    "}\n"                                         // 19
    "class T {\n"                                 // 20
    "  field z: int;\n"                           // 21
    "  constructor() { this.z = 0; }\n"           // 22
    "  method boom() {\n"                         // 23
    "    throw Kaboom(\"x\");\n"                  // 24
    "  }\n"                                       // 25
    "}\n"                                         // 26
    "class NoGo {\n"                              // 27
    "  field z: int;\n"                           // 28
    "  constructor() {\n"                         // 29
    "    throw Nope(\"no\");\n"                   // 30
    "  }\n"                                       // 31
    "  method poke() {\n"                         // 32
    "    this.z = 1;\n"                           // 33
    "  }\n"                                       // 34
    "}\n";                                        // 35

sut::Program test_program() { return sut::parse_program({{"prog.sut", kSut}}); }

CrashTarget make_target(std::vector<sut::Frame> frames, const std::string& type,
                        int level) {
    sut::CrashReport report;
    report.exception_type = type;
    report.frames = std::move(frames);
    report.target_frame_level = level;
    return CrashTarget::from_report(report);
}

CrashTarget div_target(int line = 5) {
    return make_target({{"A", "m", "prog.sut", line}}, "DivideByZero", 1);
}

sut::ExecutionResult run(const sut::Program& p, const std::string& text) {
    return sut::execute_test(p, sut::parse_test(text, "t"));
}

struct Ctx {
    sut::Program program = test_program();
    CrashTarget target;
    seeding::ObjectPool pool;
    SearchConfig config;
    behmodel::Rng rng{1};
    OperatorContext op{program, target, pool, config, rng};

    explicit Ctx(CrashTarget t) : target(std::move(t)) {}
};

}  // namespace

TEST_CASE("line distance: executed, near miss, never entered") {
    auto p = test_program();
    auto crash = run(p, "a = new A();\nv = a.m(0);\n");
    CHECK(compute_line_distance(crash, div_target()) == 0.0);
    // only line 5 of m runs before the throw; target line 7 is 2 away
    CHECK(compute_line_distance(crash, div_target(7)) == doctest::Approx(2.0 / 3.0));
    auto idle = run(p, "a = new A();\n");
    CHECK(compute_line_distance(idle, div_target()) == 1.0);
}

TEST_CASE("exception distance: type, origin frame, and gating") {
    auto p = test_program();
    auto crash = run(p, "a = new A();\nv = a.m(0);\n");
    CHECK(compute_exception_distance(crash, div_target(), 0.0) == 0.0);
    auto wrong_type = make_target({{"A", "m", "prog.sut", 5}}, "Kaboom", 1);
    CHECK(compute_exception_distance(crash, wrong_type, 0.0) == 1.0);
    CHECK(compute_exception_distance(crash, div_target(), 0.5) == 1.0);
    auto clean = run(p, "a = new A();\nv = a.m(1);\n");
    CHECK(compute_exception_distance(clean, div_target(), 0.0) == 1.0);
}

TEST_CASE("stack distance: exact two-frame match scores zero") {
    auto p = test_program();
    auto target = make_target(
        {{"A", "m", "prog.sut", 5}, {"B", "go", "prog.sut", 16}}, "DivideByZero", 2);
    auto crash = run(p, "b = new B();\nv = b.go(0);\n");
    auto fit = assess(crash, target);
    CHECK(fit.d_l == 0.0);
    CHECK(fit.d_e == 0.0);
    CHECK(fit.d_s == 0.0);
    CHECK(fit.total == 0.0);
}

TEST_CASE("stack distance: outer frame off by one line scores 0.25") {
    auto p = test_program();
    auto target = make_target(
        {{"A", "m", "prog.sut", 5}, {"B", "go", "prog.sut", 17}}, "DivideByZero", 2);
    auto crash = run(p, "b = new B();\nv = b.go(0);\n");
    // the pure per-frame formula: inner frame exact, outer one line away
    CHECK(compute_stack_distance(crash, target, 0.0) == doctest::Approx(0.25));
    // end to end the component stays gated: line 17 of go never runs
    auto fit = assess(crash, target);
    CHECK(fit.d_l == doctest::Approx(0.5));
    CHECK(fit.d_e == 1.0);
    CHECK(fit.d_s == 1.0);
}

TEST_CASE("stack distance: shallow generated trace counts missing frames") {
    auto p = test_program();
    auto target = make_target(
        {{"A", "m", "prog.sut", 5}, {"A", "m", "prog.sut", 5}}, "DivideByZero", 2);
    auto crash = run(p, "a = new A();\nv = a.m(0);\n");
    // the generated trace has one program frame; required depth is two
    double d_s = compute_stack_distance(crash, target, 0.0);
    CHECK(d_s == doctest::Approx(0.5));
}

TEST_CASE("fitness: reached line with no exception scores 3") {
    auto p = test_program();
    auto t = sut::parse_test("a = new A();\nv = a.m(1);\n", "t");
    std::size_t evals = 0;
    auto fit = fitness(t, p, div_target(), &evals);
    CHECK(fit.total == 3.0);
    CHECK(evals == 1);
}

TEST_CASE("fitness gating holds on randomized tests") {
    auto p = test_program();
    behmodel::Rng rng(31);
    std::vector<CrashTarget> targets = {
        div_target(), div_target(7),
        make_target({{"A", "m", "prog.sut", 5}, {"B", "go", "prog.sut", 16}},
                    "DivideByZero", 2),
        make_target({{"T", "boom", "prog.sut", 24}}, "Kaboom", 1)};

    Ctx ctx(div_target());
    ctx.config.max_test_length = 10;
    for (int i = 0; i < 500; ++i) {
        auto t = build_individual(ctx.op);
        auto result = sut::execute_test(p, t);
        for (const auto& target : targets) {
            auto fit = assess(result, target);
            REQUIRE(fit.total >= 0.0);
            REQUIRE(fit.total <= 6.0);
            if (fit.d_l > 0.0) REQUIRE(fit.d_e == 1.0);
            if (fit.d_e > 0.0) REQUIRE(fit.d_s == 1.0);
            bool exact = false;
            if (result.thrown && result.thrown->type == target.report.exception_type) {
                auto frames = program_frames(*result.thrown);
                exact = frames.size() >= target.required_frames.size();
                for (std::size_t j = 0; exact && j < target.required_frames.size(); ++j)
                    exact = frames[j] == target.required_frames[j];
            }
            REQUIRE((fit.total == 0.0) == exact);
        }
    }
}

TEST_CASE("target call index tracks receiver classes") {
    auto p = test_program();
    auto target = div_target();
    auto t1 = sut::parse_test("a = new A();\nv = a.m(0);\n", "t");
    CHECK(target_call_index(t1, target) == 1);
    auto t2 = sut::parse_test("b = new B();\nv = b.go(0);\n", "t");
    CHECK(target_call_index(t2, target) == -1);
    auto t3 = sut::parse_test("a = new A();\nv = a.m(1);\nw = a.m(2);\n", "t");
    CHECK(target_call_index(t3, target) == 2);
}

TEST_CASE("construction failure: throw from the target call is fine") {
    auto p = test_program();
    auto target = div_target();
    auto t = sut::parse_test("a = new A();\nv = a.m(0);\n", "t");
    CHECK(!construction_failed(sut::execute_test(p, t), t, target));
}

TEST_CASE("construction failure: earlier statement throws first") {
    auto p = test_program();
    auto target = div_target();
    auto t = sut::parse_test("a = new A();\nb = new A();\nv = b.m(0);\nw = a.m(1);\n", "t");
    CHECK(construction_failed(sut::execute_test(p, t), t, target));
}

TEST_CASE("construction failure: harness errors always fail") {
    auto p = test_program();
    auto target = div_target();
    auto t = sut::parse_test("a = new A();\nx = a.nosuch();\nv = a.m(1);\n", "t");
    CHECK(construction_failed(sut::execute_test(p, t), t, target));
}

TEST_CASE("crossover: identical parents give identical children") {
    Ctx ctx(div_target());
    auto parent = sut::parse_test("a = new A();\nv = a.m(3);\n", "t");
    for (int i = 0; i < 20; ++i) {
        auto [c1, c2] = guided_crossover(parent, parent, ctx.op);
        CHECK(c1.stmts == parent.stmts);
        CHECK(c2.stmts == parent.stmts);
    }
}

TEST_CASE("crossover: children always keep a target call") {
    Ctx ctx(div_target());
    auto p1 = sut::parse_test("a = new A();\nv = a.m(3);\n", "t");
    auto p2 = sut::parse_test("b = new B();\nw = b.go(1);\nc = new A();\nu = c.m(7);\n", "t");
    for (int i = 0; i < 100; ++i) {
        auto [c1, c2] = guided_crossover(p1, p2, ctx.op);
        CHECK(target_call_index(c1, ctx.target) >= 0);
        CHECK(target_call_index(c2, ctx.target) >= 0);
    }
}

TEST_CASE("crossover: spliced variable uses are repaired from the donor") {
    Ctx ctx(div_target());
    // any child importing p2's tail must also import b's construction
    auto p1 = sut::parse_test("a = new A();\nv = a.m(3);\n", "t");
    auto p2 = sut::parse_test("b = new A();\nx = b.m(9);\ny = b.m(8);\nv = b.m(4);\n", "t");
    for (int i = 0; i < 100; ++i) {
        auto [c1, c2] = guided_crossover(p1, p2, ctx.op);
        for (const auto& child : {c1, c2}) {
            std::set<std::string> defined;
            for (const auto& s : child.stmts) {
                if (s.tag == sut::TStmt::Tag::Call) REQUIRE(defined.count(s.receiver));
                if (!s.var.empty() && s.tag != sut::TStmt::Tag::Assert)
                    defined.insert(s.var);
            }
        }
    }
}

TEST_CASE("mutation: rate zero is the identity") {
    Ctx ctx(div_target());
    ctx.config.mutation_rate = 0.0;
    auto t = sut::parse_test("a = new A();\nv = a.m(3);\n", "t");
    auto m = guided_mutation(t, ctx.op);
    CHECK(m.stmts == t.stmts);
}

TEST_CASE("mutation: target call survives any operator sequence") {
    Ctx ctx(div_target());
    auto t = sut::parse_test("a = new A();\nv = a.m(3);\n", "t");
    for (int i = 0; i < 300; ++i) {
        t = guided_mutation(t, ctx.op);
        REQUIRE(target_call_index(t, ctx.target) >= 0);
        REQUIRE(t.stmts.size() <= ctx.config.max_test_length);
    }
}

TEST_CASE("search: unconditional throw is reproduced almost immediately") {
    auto p = test_program();
    auto target = make_target({{"T", "boom", "prog.sut", 24}}, "Kaboom", 1);
    SearchConfig config;
    config.population_size = 20;
    config.budget = 2000;
    config.seed = 5;
    seeding::ObjectPool pool;
    auto outcome = run_search(p, target, pool, config);
    CHECK(outcome.status == OutcomeStatus::Reproduced);
    CHECK(outcome.evaluations <= config.population_size);
    REQUIRE(outcome.best_test.has_value());
    auto result = sut::execute_test(p, *outcome.best_test);
    REQUIRE(result.thrown.has_value());
    CHECK(result.thrown->type == "Kaboom");
}

TEST_CASE("search: divide-by-zero argument is found within budget") {
    auto p = test_program();
    SearchConfig config;
    config.population_size = 50;
    config.budget = 20000;
    config.seed = 2;
    seeding::ObjectPool pool;
    auto outcome = run_search(p, div_target(), pool, config);
    CHECK(outcome.status == OutcomeStatus::Reproduced);
    CHECK(outcome.evaluations <= config.budget);
}

TEST_CASE("search: budget of one stops after one evaluation") {
    auto p = test_program();
    SearchConfig config;
    config.population_size = 10;
    config.budget = 1;
    config.seed = 3;
    seeding::ObjectPool pool;
    auto outcome = run_search(p, div_target(), pool, config);
    CHECK(outcome.evaluations == 1);
    CHECK(outcome.status != OutcomeStatus::NotStarted);
}

TEST_CASE("search: throwing constructor means not started") {
    auto p = test_program();
    auto target = make_target({{"NoGo", "poke", "prog.sut", 33}}, "Whatever", 1);
    SearchConfig config;
    config.population_size = 5;
    config.budget = 100;
    config.construction_attempts = 10;
    seeding::ObjectPool pool;
    auto outcome = run_search(p, target, pool, config);
    CHECK(outcome.status == OutcomeStatus::NotStarted);
    CHECK(outcome.evaluations == 0);
}

TEST_CASE("search: deterministic under a fixed seed") {
    auto p = test_program();
    SearchConfig config;
    config.population_size = 15;
    config.budget = 600;
    config.seed = 11;
    seeding::ObjectPool pool;
    auto o1 = run_search(p, div_target(), pool, config);
    auto o2 = run_search(p, div_target(), pool, config);
    CHECK(o1.search_log == o2.search_log);
    CHECK(o1.status == o2.status);
    CHECK(o1.evaluations == o2.evaluations);
    REQUIRE(o1.best_test.has_value());
    REQUIRE(o2.best_test.has_value());
    CHECK(sut::format_test(*o1.best_test) == sut::format_test(*o2.best_test));
}

TEST_CASE("search: logged best fitness never increases") {
    auto p = test_program();
    SearchConfig config;
    config.population_size = 10;
    config.budget = 800;
    config.seed = 7;
    seeding::ObjectPool pool;
    auto outcome = run_search(p, div_target(7), pool, config);
    std::istringstream lines(outcome.search_log);
    std::string line;
    double prev = 7.0;
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream row(line);
        std::size_t gen;
        double total, dl, de, ds;
        std::size_t evals;
        row >> gen >> total >> dl >> de >> ds >> evals;
        REQUIRE(total <= prev);
        REQUIRE(evals <= config.budget);
        prev = total;
        ++rows;
    }
    CHECK(rows >= 1);
}

TEST_CASE("search: zero seeding probabilities never touch the pool") {
    auto p = test_program();
    auto test = sut::parse_test("a = new A();\nv = a.m(1);\n", "t");
    auto pool = seeding::build_test_pool(p, {test}, "A");
    REQUIRE(pool.has_fragments_for("A"));
    SearchConfig config;
    config.population_size = 10;
    config.budget = 300;
    config.mode = SeedingMode::Model;
    config.seeding.pick_init = 0.0;
    config.seeding.pick_mut = 0.0;
    config.seeding.clone = 0.0;
    auto outcome = run_search(p, div_target(), pool, config);
    CHECK(pool.draws == 0);
    CHECK(outcome.pool_draws_init == 0);
    CHECK(outcome.pool_draws_mut == 0);
}

TEST_CASE("fitness: reaching the target line improves the total") {
    auto p = test_program();
    auto reaching = run(p, "a = new A();\nv = a.m(1);\n");
    auto idle = run(p, "a = new A();\n");
    CHECK(assess(reaching, div_target()).total < assess(idle, div_target()).total);
}
