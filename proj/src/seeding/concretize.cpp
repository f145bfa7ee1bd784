#include "crashrepro/seeding/concretize.hpp"

#include <string>

#include "crashrepro/sutlang/interpreter.hpp"

namespace crashrepro::seeding {

using sut::Arg;
using sut::Kind;
using sut::Literal;
using sut::TStmt;

const std::vector<std::string>& string_pool() {
    static const std::vector<std::string> pool = {
        "",     "a",     "b",    "x",     "foo",   "bar",  "admin", "guest",
        "test", "hello", "key",  "value", "0",     "one",  "two",   "zzz"};
    return pool;
}

long long rand_int(behmodel::Rng& rng, long long lo, long long hi) {
    return lo + (long long)(rng() % (unsigned long long)(hi - lo + 1));
}

namespace {

bool parse_ctor_action(const std::string& action, std::size_t& arity) {
    const std::string prefix = "<init>/";
    if (action.rfind(prefix, 0) != 0) return false;
    arity = (std::size_t)std::stoul(action.substr(prefix.size()));
    return true;
}

struct Builder {
    const sut::Program& program;
    behmodel::Rng& rng;
    int next_var = 0;

    std::string fresh() { return "v" + std::to_string(next_var++); }

    // Emits a construction for `cls` driven by `actions`; returns the root
    // variable or nullopt when the behavior cannot be mapped onto the class.
    std::optional<std::string> emit(std::vector<TStmt>& out, const std::string& cls,
                                    const std::vector<std::string>& actions, int depth) {
        const sut::ClassDef* cd = program.find_class(cls);
        if (!cd) return std::nullopt;

        std::size_t start = 0;
        const sut::MethodDef* ctor = nullptr;
        std::size_t arity = 0;
        if (!actions.empty() && parse_ctor_action(actions[0], arity)) {
            ctor = cd->find_constructor(arity);
            start = 1;
        } else if (!cd->constructors.empty()) {
            ctor = &cd->constructors[rng() % cd->constructors.size()];
        }
        if (!ctor) return std::nullopt;

        std::string var = fresh();
        std::vector<Arg> ctor_args;
        for (const auto& [pname, type] : ctor->params)
            ctor_args.push_back(make_arg(out, type, depth));
        out.push_back(TStmt::construct(var, cls, std::move(ctor_args)));

        for (std::size_t i = start; i < actions.size(); ++i) {
            std::size_t a = 0;
            if (parse_ctor_action(actions[i], a)) {
                // A mid-sequence constructor starts a fresh object; later
                // calls go to the new one.
                const sut::MethodDef* c2 = cd->find_constructor(a);
                if (!c2) return std::nullopt;
                var = fresh();
                std::vector<Arg> args;
                for (const auto& [pname, type] : c2->params)
                    args.push_back(make_arg(out, type, depth));
                out.push_back(TStmt::construct(var, cls, std::move(args)));
                continue;
            }
            auto overloads = cd->methods_named(actions[i]);
            if (overloads.empty()) return std::nullopt;
            const sut::MethodDef* m = overloads[rng() % overloads.size()];
            std::vector<Arg> args;
            for (const auto& [pname, type] : m->params)
                args.push_back(make_arg(out, type, depth));
            out.push_back(TStmt::call(var, actions[i], std::move(args)));
        }
        return var;
    }

    Arg make_arg(std::vector<TStmt>& out, const sut::TypeRef& type, int depth) {
        switch (type.kind) {
            case Kind::Int:
                return Arg::of_lit(Literal::of_int(rand_int(rng, -100, 100)));
            case Kind::Bool:
                return Arg::of_lit(Literal::of_bool(rng() % 2 == 0));
            case Kind::String:
                return Arg::of_lit(
                    Literal::of_string(string_pool()[rng() % kStringPoolSize]));
            case Kind::Object: {
                if (depth + 1 >= kMaxObjectDepth) return Arg::of_lit(Literal::null());
                const sut::ClassDef* cd = program.find_class(type.class_name);
                if (!cd || cd->constructors.empty()) return Arg::of_lit(Literal::null());
                // One random action on the nested object: a constructor or a
                // method call after a random constructor.
                std::vector<std::string> acts;
                std::size_t n_ctors = cd->constructors.size();
                std::size_t n_methods = cd->methods.size();
                std::size_t pick = rng() % (n_ctors + n_methods);
                if (pick < n_ctors)
                    acts.push_back(sut::action_label(
                        "<init>", cd->constructors[pick].arity(), true));
                else
                    acts.push_back(cd->methods[pick - n_ctors].name);
                auto var = emit(out, type.class_name, acts, depth + 1);
                if (!var) return Arg::of_lit(Literal::null());
                return Arg::of_var(*var);
            }
        }
        return Arg::of_lit(Literal::null());
    }
};

void renumber(std::vector<TStmt>& stmts) {
    for (std::size_t i = 0; i < stmts.size(); ++i) stmts[i].line = (int)(i + 1);
}

}  // namespace

std::optional<Fragment> concretize(const behmodel::AbstractObjectBehavior& behavior,
                                   const sut::Program& program, behmodel::Rng& rng,
                                   std::vector<std::string>* warnings) {
    for (int attempt = 0; attempt < kConcretizeAttempts; ++attempt) {
        Builder builder{program, rng};
        std::vector<TStmt> stmts;
        auto root = builder.emit(stmts, behavior.class_name, behavior.actions, 0);
        if (!root) break;  // structural mismatch, retrying cannot help
        renumber(stmts);

        sut::TestCase probe{"fragment", stmts};
        auto result = sut::execute_test(program, probe);
        if (!result.thrown) {
            return Fragment{behavior.class_name, *root, std::move(stmts),
                            Provenance::ModelSeeded};
        }
        if (result.thrown->type != sut::kHarnessError &&
            result.thrown->type != sut::kBudgetExhausted) {
            // The replay crashed partway; keep the clean prefix. The harness
            // frame's line is the 1-based index of the throwing statement.
            int bad_line = result.thrown->frames.back().line;
            if (bad_line > 1) {
                stmts.resize((std::size_t)(bad_line - 1));
                renumber(stmts);
                // The prefix must still contain a construction of the class.
                std::string kept_root;
                for (const auto& s : stmts)
                    if (s.tag == TStmt::Tag::Construct && s.cls == behavior.class_name)
                        kept_root = s.var;
                if (!kept_root.empty())
                    return Fragment{behavior.class_name, kept_root, std::move(stmts),
                                    Provenance::ModelSeeded};
            }
        }
    }
    if (warnings)
        warnings->push_back("could not concretize behavior for class " +
                            behavior.class_name);
    return std::nullopt;
}

}  // namespace crashrepro::seeding
