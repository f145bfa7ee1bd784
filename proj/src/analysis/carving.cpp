#include "crashrepro/analysis/carving.hpp"

#include <map>
#include <optional>

#include "crashrepro/sutlang/interpreter.hpp"

namespace crashrepro::analysis {

using sut::TestCase;
using sut::TStmt;

namespace {

bool excluded_by_execution(const sut::ExecutionResult& result) {
    return result.thrown && (result.thrown->type == sut::kBudgetExhausted ||
                             result.thrown->type == sut::kHarnessError);
}

// Defining statement index per variable (last definition wins for carving
// of later uses; tests are straight-line so a simple forward map suffices).
std::map<std::string, size_t> definition_sites(const TestCase& test) {
    std::map<std::string, size_t> defs;
    for (size_t i = 0; i < test.stmts.size(); ++i) {
        const TStmt& s = test.stmts[i];
        if (!s.var.empty()) defs[s.var] = i;
    }
    return defs;
}

// Adds the transitive definition closure of `var` to `picked`. Only
// literal assignments and constructions (with carvable args) qualify.
bool add_definition(const TestCase& test, const std::map<std::string, size_t>& defs,
                    const std::string& var, std::set<size_t>& picked) {
    auto it = defs.find(var);
    if (it == defs.end()) return false;
    const TStmt& def = test.stmts[it->second];
    if (def.tag == TStmt::Tag::Call) return false;  // call results are not carvable
    if (picked.count(it->second)) return true;
    picked.insert(it->second);
    if (def.tag == TStmt::Tag::Construct) {
        for (const auto& a : def.args)
            if (a.is_var && !add_definition(test, defs, a.var, picked)) return false;
    }
    return true;
}

std::optional<CarvedObject> carve_one(const sut::Program& program, const TestCase& test,
                                      size_t construct_index, long step_limit) {
    const TStmt& root = test.stmts[construct_index];
    std::map<std::string, size_t> defs = definition_sites(test);
    std::set<size_t> picked;
    picked.insert(construct_index);
    for (const auto& a : root.args)
        if (a.is_var && !add_definition(test, defs, a.var, picked)) return std::nullopt;
    for (size_t i = construct_index + 1; i < test.stmts.size(); ++i) {
        const TStmt& s = test.stmts[i];
        if (!s.var.empty() && s.var == root.var) break;  // root re-bound
        if (s.tag != TStmt::Tag::Call || s.receiver != root.var) continue;
        bool ok = true;
        for (const auto& a : s.args)
            if (a.is_var && !add_definition(test, defs, a.var, picked)) ok = false;
        if (!ok) return std::nullopt;
        picked.insert(i);
    }
    CarvedObject carved;
    carved.class_name = root.cls;
    carved.root_var = root.var;
    for (size_t i : picked) carved.stmts.push_back(test.stmts[i]);
    // Drop captured call results inside the fragment; they are not needed
    // for replay and keep the fragment self-contained.
    for (auto& s : carved.stmts)
        if (s.tag == TStmt::Tag::Call) s.var.clear();
    TestCase replay;
    replay.name = "carved:" + carved.class_name;
    replay.stmts = carved.stmts;
    sut::ExecutionResult result = sut::execute_test(program, replay, step_limit);
    if (excluded_by_execution(result)) return std::nullopt;
    return carved;
}

}  // namespace

std::vector<CarvedObject> carve_objects(const sut::Program& program,
                                        const std::vector<TestCase>& tests,
                                        const std::set<std::string>& target_classes,
                                        CarveLog* log, long step_limit) {
    std::vector<CarvedObject> out;
    for (const auto& test : tests) {
        sut::ExecutionResult result = sut::execute_test(program, test, step_limit);
        if (excluded_by_execution(result)) {
            if (log)
                log->warnings.push_back("test '" + test.name + "' not carved (" +
                                       result.thrown->type + ")");
            continue;
        }
        for (size_t i = 0; i < test.stmts.size(); ++i) {
            const TStmt& s = test.stmts[i];
            if (s.tag != TStmt::Tag::Construct || !target_classes.count(s.cls)) continue;
            auto carved = carve_one(program, test, i, step_limit);
            if (carved) {
                out.push_back(std::move(*carved));
            } else if (log) {
                log->warnings.push_back("fragment for '" + s.var + "' in test '" + test.name +
                                       "' dropped");
            }
        }
    }
    return out;
}

std::vector<ClonedTest> clone_tests(const sut::Program& program,
                                    const std::vector<TestCase>& tests,
                                    const std::string& target_class, CarveLog* log,
                                    long step_limit) {
    std::vector<ClonedTest> out;
    for (const auto& test : tests) {
        sut::ExecutionResult result = sut::execute_test(program, test, step_limit);
        if (excluded_by_execution(result)) {
            if (log)
                log->warnings.push_back("test '" + test.name + "' not cloned (" +
                                       result.thrown->type + ")");
            continue;
        }
        bool touches = false;
        for (const auto& ev : result.call_events)
            if (ev.cls == target_class) touches = true;
        if (!touches) continue;
        ClonedTest clone;
        clone.test.name = "clone:" + test.name;
        for (const auto& s : test.stmts)
            if (s.tag != TStmt::Tag::Assert) clone.test.stmts.push_back(s);
        out.push_back(std::move(clone));
    }
    if (out.empty() && log) log->warnings.push_back("test seeding unavailable: empty test pool");
    return out;
}

}  // namespace crashrepro::analysis
