#include "crashrepro/search/operators.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crashrepro/seeding/concretize.hpp"

namespace crashrepro::search {

using sut::Arg;
using sut::Kind;
using sut::Literal;
using sut::TStmt;

double rand_unit(behmodel::Rng& rng) { return (double)(rng() >> 11) * 0x1p-53; }

namespace {

// Variables a statement reads (receiver and variable-valued arguments).
std::vector<std::string> used_vars(const TStmt& s) {
    std::vector<std::string> out;
    if (s.tag == TStmt::Tag::Call) out.push_back(s.receiver);
    for (const auto& a : s.args)
        if (a.is_var) out.push_back(a.var);
    if (s.tag == TStmt::Tag::Assert) {
        if (s.a_lhs.is_var) out.push_back(s.a_lhs.var);
        if (s.a_rhs.is_var) out.push_back(s.a_rhs.var);
    }
    return out;
}

bool defines_var(const TStmt& s) { return !s.var.empty() && s.tag != TStmt::Tag::Assert; }

std::size_t next_var_index(const std::vector<TStmt>& stmts) {
    std::size_t next = 0;
    auto consider = [&](const std::string& name) {
        if (name.size() < 2 || name[0] != 'v') return;
        for (std::size_t i = 1; i < name.size(); ++i)
            if (!isdigit((unsigned char)name[i])) return;
        next = std::max(next, (std::size_t)std::stoul(name.substr(1)) + 1);
    };
    for (const auto& s : stmts) {
        consider(s.var);
        consider(s.receiver);
        for (const auto& a : s.args)
            if (a.is_var) consider(a.var);
    }
    return next;
}

// Classes of object variables as statically known at the end of the list.
std::map<std::string, std::string> object_classes(const std::vector<TStmt>& stmts) {
    std::map<std::string, std::string> out;
    for (const auto& s : stmts) {
        if (s.tag == TStmt::Tag::Construct)
            out[s.var] = s.cls;
        else if (defines_var(s))
            out.erase(s.var);  // rebound to a value of unknown kind
    }
    return out;
}

// Statement generator shared by synthesis, repair, and mutation. New
// prerequisite statements are appended to the working list.
struct Gen {
    OperatorContext& ctx;
    std::vector<TStmt>& stmts;
    std::size_t next_var;
    bool init_phase;

    Gen(OperatorContext& c, std::vector<TStmt>& s, bool init)
        : ctx(c), stmts(s), next_var(next_var_index(s)), init_phase(init) {}

    std::string fresh() { return "v" + std::to_string(next_var++); }

    double pick_probability() const {
        return init_phase ? ctx.config.seeding.pick_init : ctx.config.seeding.pick_mut;
    }

    void count_draw() {
        if (init_phase)
            ++ctx.pool_draws_init;
        else
            ++ctx.pool_draws_mut;
    }

    // Appends statements yielding an object of `cls`; returns its variable,
    // or "" when no construction path exists.
    std::string ensure_object(const std::string& cls, int depth = 0) {
        if (rand_unit(ctx.rng) < pick_probability() && ctx.pool.has_fragments_for(cls)) {
            const seeding::Fragment& frag = ctx.pool.sample_fragment(cls, ctx.rng);
            count_draw();
            std::map<std::string, std::string> remap;
            for (const auto& s : frag.stmts) {
                TStmt copy = s;
                if (defines_var(copy)) {
                    remap[copy.var] = fresh();
                    copy.var = remap.at(s.var);
                }
                if (copy.tag == TStmt::Tag::Call && remap.count(copy.receiver))
                    copy.receiver = remap.at(copy.receiver);
                for (auto& a : copy.args)
                    if (a.is_var && remap.count(a.var)) a.var = remap.at(a.var);
                stmts.push_back(std::move(copy));
            }
            auto it = remap.find(frag.root_var);
            if (it != remap.end()) return it->second;
            return "";
        }
        const sut::ClassDef* cd = ctx.program.find_class(cls);
        if (!cd || cd->constructors.empty()) return "";
        const sut::MethodDef& ctor =
            cd->constructors[ctx.rng() % cd->constructors.size()];
        std::vector<Arg> args = make_args(ctor, depth);
        std::string var = fresh();
        stmts.push_back(TStmt::construct(var, cls, std::move(args)));
        return var;
    }

    std::vector<Arg> make_args(const sut::MethodDef& m, int depth = 0) {
        std::vector<Arg> out;
        for (const auto& [pname, type] : m.params) out.push_back(make_arg(type, depth));
        return out;
    }

    Arg make_arg(const sut::TypeRef& type, int depth) {
        switch (type.kind) {
            case Kind::Int:
                return Arg::of_lit(Literal::of_int(seeding::rand_int(ctx.rng, -100, 100)));
            case Kind::Bool:
                return Arg::of_lit(Literal::of_bool(ctx.rng() % 2 == 0));
            case Kind::String:
                return Arg::of_lit(Literal::of_string(
                    seeding::string_pool()[ctx.rng() % seeding::kStringPoolSize]));
            case Kind::Object: {
                if (depth + 1 >= seeding::kMaxObjectDepth)
                    return Arg::of_lit(Literal::null());
                std::string var = ensure_object(type.class_name, depth + 1);
                if (var.empty()) return Arg::of_lit(Literal::null());
                return Arg::of_var(var);
            }
        }
        return Arg::of_lit(Literal::null());
    }

    // A random filler statement: usually a method call on an existing
    // object, sometimes a fresh construction of a random program class.
    void random_action() {
        auto classes = object_classes(stmts);
        if (classes.empty() || ctx.rng() % 4 == 0) {
            if (ctx.program.classes.empty()) return;
            std::size_t pick = ctx.rng() % ctx.program.classes.size();
            auto it = ctx.program.classes.begin();
            std::advance(it, (long)pick);
            ensure_object(it->first);
            return;
        }
        random_call();
    }

    // A random method call on a random already-constructed object.
    bool random_call() {
        auto classes = object_classes(stmts);
        if (classes.empty()) return false;
        std::size_t pick = ctx.rng() % classes.size();
        auto it = classes.begin();
        std::advance(it, (long)pick);
        const sut::ClassDef* cd = ctx.program.find_class(it->second);
        if (!cd || cd->methods.empty()) return false;
        const sut::MethodDef& m = cd->methods[ctx.rng() % cd->methods.size()];
        std::vector<Arg> args = make_args(m);
        stmts.push_back(TStmt::call(it->first, m.name, std::move(args)));
        return true;
    }

    // The mandatory call to the target method, with fresh random arguments.
    bool append_target_call(const std::string& receiver) {
        const sut::ClassDef* cd = ctx.program.find_class(ctx.target.target_class);
        if (!cd) return false;
        auto overloads = cd->methods_named(ctx.target.target_method);
        if (overloads.empty()) return false;
        const sut::MethodDef* m = overloads[ctx.rng() % overloads.size()];
        std::vector<Arg> args = make_args(*m);
        stmts.push_back(TStmt::call(receiver, ctx.target.target_method, std::move(args)));
        return true;
    }
};

void renumber(std::vector<TStmt>& stmts) {
    for (std::size_t i = 0; i < stmts.size(); ++i) stmts[i].line = (int)(i + 1);
}

// Drops every statement that reads a variable with no earlier definition.
void drop_undefined(std::vector<TStmt>& stmts) {
    std::vector<TStmt> kept;
    std::set<std::string> defined;
    for (auto& s : stmts) {
        bool ok = true;
        for (const auto& v : used_vars(s))
            if (!defined.count(v)) ok = false;
        if (!ok) continue;
        if (defines_var(s)) defined.insert(s.var);
        kept.push_back(std::move(s));
    }
    stmts.swap(kept);
}

}  // namespace

int target_call_index(const sut::TestCase& test, const CrashTarget& target) {
    std::map<std::string, std::string> classes;
    int found = -1;
    for (std::size_t i = 0; i < test.stmts.size(); ++i) {
        const TStmt& s = test.stmts[i];
        if (s.tag == TStmt::Tag::Call && s.method == target.target_method) {
            auto it = classes.find(s.receiver);
            if (it != classes.end() && it->second == target.target_class) found = (int)i;
        }
        if (s.tag == TStmt::Tag::Construct)
            classes[s.var] = s.cls;
        else if (defines_var(s))
            classes.erase(s.var);
    }
    return found;
}

bool construction_failed(const sut::ExecutionResult& result, const sut::TestCase& test,
                         const CrashTarget& target) {
    int idx = target_call_index(test, target);
    if (idx < 0) return true;
    if (!result.thrown) return false;
    if (result.thrown->type == sut::kHarnessError) return true;
    // The outermost frame is the harness frame; its line is the 1-based
    // index of the test statement being executed when the exception left.
    int at_line = result.thrown->frames.back().line;
    return at_line < test.stmts[idx].line;
}

void normalize(sut::TestCase& test, OperatorContext& ctx, bool for_init) {
    auto& stmts = test.stmts;
    std::size_t max_len = ctx.config.max_test_length;
    for (std::size_t round = 0; round < stmts.size() + 16; ++round) {
        drop_undefined(stmts);
        renumber(stmts);
        if (target_call_index(test, ctx.target) < 0) {
            Gen gen(ctx, stmts, for_init);
            std::string receiver = gen.ensure_object(ctx.target.target_class);
            if (receiver.empty() || !gen.append_target_call(receiver)) break;
            renumber(stmts);
            continue;  // re-check the length bound
        }
        if (stmts.size() <= max_len) break;
        stmts.erase(stmts.begin());
    }
    renumber(stmts);
}

sut::TestCase build_individual(OperatorContext& ctx) {
    sut::TestCase test;
    test.name = "evolved";
    if (ctx.config.mode == SeedingMode::Test && !ctx.pool.cloned_tests.empty() &&
        rand_unit(ctx.rng) < ctx.config.seeding.clone) {
        test = ctx.pool.cloned_tests[ctx.rng() % ctx.pool.cloned_tests.size()];
        test.name = "evolved";
        ++ctx.pool_draws_init;
        normalize(test, ctx, true);
        return guided_mutation(test, ctx);
    }
    Gen gen(ctx, test.stmts, true);
    // Filler statements come before the receiver so they cannot disturb the
    // state a seeded fragment sets up on it.
    std::size_t extra = ctx.rng() % (ctx.config.max_test_length / 2);
    for (std::size_t i = 0; i < extra; ++i) gen.random_action();
    std::string receiver = gen.ensure_object(ctx.target.target_class);
    if (!receiver.empty()) gen.append_target_call(receiver);
    normalize(test, ctx, true);
    return test;
}

namespace {

// Copies the statement defining `var` (and, recursively, its own
// dependencies) from the donor list into `out`.
bool pull_definition(const std::string& var, const std::vector<TStmt>& donors,
                     std::vector<TStmt>& out, std::set<std::string>& defined, int depth) {
    if (depth > 8) return false;
    for (const auto& s : donors) {
        if (!defines_var(s) || s.var != var) continue;
        bool ok = true;
        for (const auto& u : used_vars(s)) {
            if (defined.count(u)) continue;
            if (!pull_definition(u, donors, out, defined, depth + 1)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        out.push_back(s);
        defined.insert(var);
        return true;
    }
    return false;
}

std::vector<TStmt> splice_and_repair(const std::vector<TStmt>& head,
                                     const std::vector<TStmt>& tail,
                                     const std::vector<TStmt>& donors) {
    std::vector<TStmt> child = head;
    child.insert(child.end(), tail.begin(), tail.end());
    std::vector<TStmt> out;
    std::set<std::string> defined;
    for (const auto& s : child) {
        bool ok = true;
        for (const auto& u : used_vars(s)) {
            if (defined.count(u)) continue;
            if (!pull_definition(u, donors, out, defined, 0)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;  // unrepairable use, statement dropped
        if (defines_var(s)) defined.insert(s.var);
        out.push_back(s);
    }
    return out;
}

}  // namespace

std::pair<sut::TestCase, sut::TestCase> guided_crossover(const sut::TestCase& parent1,
                                                         const sut::TestCase& parent2,
                                                         OperatorContext& ctx) {
    // A single relative cut point keeps identical parents producing
    // identical children.
    double alpha = rand_unit(ctx.rng);
    std::size_t cut1 = (std::size_t)(alpha * (double)parent1.stmts.size());
    std::size_t cut2 = (std::size_t)(alpha * (double)parent2.stmts.size());

    std::vector<TStmt> donors = parent1.stmts;
    donors.insert(donors.end(), parent2.stmts.begin(), parent2.stmts.end());

    sut::TestCase child1{parent1.name,
                         splice_and_repair({parent1.stmts.begin(), parent1.stmts.begin() + cut1},
                                           {parent2.stmts.begin() + cut2, parent2.stmts.end()},
                                           donors)};
    sut::TestCase child2{parent2.name,
                         splice_and_repair({parent2.stmts.begin(), parent2.stmts.begin() + cut2},
                                           {parent1.stmts.begin() + cut1, parent1.stmts.end()},
                                           donors)};
    normalize(child1, ctx, false);
    normalize(child2, ctx, false);
    return {std::move(child1), std::move(child2)};
}

sut::TestCase guided_mutation(const sut::TestCase& test, OperatorContext& ctx) {
    sut::TestCase out = test;
    if (test.stmts.empty()) return out;
    double rate = ctx.config.mutation_rate >= 0.0
                      ? ctx.config.mutation_rate
                      : 1.0 / (double)test.stmts.size();
    if (rate <= 0.0) return out;

    std::vector<TStmt> result;
    bool changed = false;
    for (const TStmt& s : test.stmts) {
        if (rand_unit(ctx.rng) >= rate) {
            result.push_back(s);
            continue;
        }
        changed = true;
        switch (ctx.rng() % 3) {
            case 0:
                break;  // delete; normalize cascades the cleanup
            case 1: {   // replace arguments
                TStmt copy = s;
                Gen gen(ctx, result, false);
                if (s.tag == TStmt::Tag::Construct) {
                    const sut::ClassDef* cd = ctx.program.find_class(s.cls);
                    const sut::MethodDef* ctor =
                        cd ? cd->find_constructor(s.args.size()) : nullptr;
                    if (ctor) copy.args = gen.make_args(*ctor);
                } else if (s.tag == TStmt::Tag::Call) {
                    auto classes = object_classes(result);
                    auto it = classes.find(s.receiver);
                    const sut::ClassDef* cd =
                        it != classes.end() ? ctx.program.find_class(it->second) : nullptr;
                    const sut::MethodDef* m =
                        cd ? cd->find_method(s.method, s.args.size()) : nullptr;
                    if (m) copy.args = gen.make_args(*m);
                }
                result.push_back(std::move(copy));
                break;
            }
            case 2: {  // insert an extra call after this statement
                result.push_back(s);
                Gen gen(ctx, result, false);
                gen.random_call();
                break;
            }
        }
    }
    if (!changed) return out;
    out.stmts = std::move(result);
    normalize(out, ctx, false);
    return out;
}

}  // namespace crashrepro::search
