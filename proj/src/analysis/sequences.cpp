#include "crashrepro/analysis/sequences.hpp"

#include <algorithm>
#include <sstream>

namespace crashrepro::analysis {

using sut::Expr;
using sut::Kind;
using sut::Program;
using sut::Stmt;
using sut::StmtPtr;

namespace {

struct Path {
    std::vector<const Stmt*> stmts;
    bool terminated = false;  // ended by return/throw
};

// Expands a statement block over a set of path prefixes. Depth-first in
// source order, true branch first; loops contribute a body-once variant and
// a zero-iteration variant. Stops adding combinations past the path cap.
void extend_paths(std::vector<Path>& paths, const std::vector<StmtPtr>& body, bool& truncated) {
    for (const auto& sp : body) {
        const Stmt& s = *sp;
        if (s.tag == Stmt::Tag::If || s.tag == Stmt::Tag::While) {
            std::vector<Path> expanded;
            for (auto& p : paths) {
                if (p.terminated) {
                    expanded.push_back(std::move(p));
                    continue;
                }
                // True branch first; for loops the false variant is the
                // zero-iteration path.
                std::vector<Path> taken{p};
                extend_paths(taken, s.body, truncated);
                std::vector<Path> skipped{std::move(p)};
                if (s.tag == Stmt::Tag::If && !s.else_body.empty())
                    extend_paths(skipped, s.else_body, truncated);
                for (auto& t : taken) {
                    if ((int)expanded.size() >= kMaxPathsPerMethod) {
                        truncated = true;
                        break;
                    }
                    expanded.push_back(std::move(t));
                }
                for (auto& t : skipped) {
                    if ((int)expanded.size() >= kMaxPathsPerMethod) {
                        truncated = true;
                        break;
                    }
                    expanded.push_back(std::move(t));
                }
            }
            paths = std::move(expanded);
        } else {
            for (auto& p : paths) {
                if (p.terminated) continue;
                p.stmts.push_back(&s);
                if (s.tag == Stmt::Tag::Return || s.tag == Stmt::Tag::Throw) p.terminated = true;
            }
        }
    }
}

struct Track {
    std::string cls;
    std::vector<std::string> actions;
};

class TrackSet {
public:
    TrackSet(const std::string& own_class, std::set<CallSequence>& out,
             const std::string& sequence_class_filter = "")
        : out_(out) {
        (void)sequence_class_filter;
        tracks_["this"] = Track{own_class, {}};
    }

    void bind(const std::string& var, const std::string& cls, std::vector<std::string> actions) {
        flush(var);
        tracks_[var] = Track{cls, std::move(actions)};
    }

    void kill(const std::string& var) {
        flush(var);
        tracks_.erase(var);
    }

    void record_call(const std::string& var, const std::string& method) {
        auto it = tracks_.find(var);
        if (it != tracks_.end()) it->second.actions.push_back(method);
    }

    void flush_all() {
        for (auto& [_, t] : tracks_) emit(t);
    }

private:
    void flush(const std::string& var) {
        auto it = tracks_.find(var);
        if (it != tracks_.end()) emit(it->second);
    }

    void emit(Track& t) {
        if (!t.actions.empty())
            out_.insert(CallSequence{t.cls, t.actions, SequenceOrigin::Static});
        t.actions.clear();
    }

    std::map<std::string, Track> tracks_;
    std::set<CallSequence>& out_;
};

void collect_from_path(const sut::ClassDef& cls, const sut::MethodDef& method, const Path& path,
                       std::map<std::string, std::set<CallSequence>>& out) {
    std::set<CallSequence> sequences;
    TrackSet tracks(cls.name, sequences);
    std::map<std::string, std::string> param_classes;
    for (const auto& [pname, ptype] : method.params) {
        if (ptype.kind == Kind::Object) tracks.bind(pname, ptype.class_name, {});
    }
    for (const Stmt* s : path.stmts) {
        switch (s->tag) {
            case Stmt::Tag::New:
                if (!s->into_field)
                    tracks.bind(s->var, s->callee,
                                {sut::action_label("<init>", s->args.size(), true)});
                break;
            case Stmt::Tag::Call:
                if (s->receiver == "this")
                    tracks.record_call("this", s->callee);
                else
                    tracks.record_call(s->receiver, s->callee);
                if (!s->var.empty() && !s->into_field) tracks.kill(s->var);
                break;
            case Stmt::Tag::Assign: {
                // y = this.f re-binds y to the field's declared class.
                const Expr& e = *s->expr;
                if (e.tag == Expr::Tag::FieldRead) {
                    auto it = cls.fields.find(e.name);
                    if (it != cls.fields.end() && it->second.kind == Kind::Object) {
                        tracks.bind(s->var, it->second.class_name, {});
                        break;
                    }
                }
                tracks.kill(s->var);
                break;
            }
            default:
                break;
        }
    }
    tracks.flush_all();
    for (const auto& seq : sequences) out[seq.class_name].insert(seq);
}

void collect_from_method(const sut::ClassDef& cls, const sut::MethodDef& method, SequenceMap& out,
                         CollectionLog* log) {
    std::vector<Path> paths(1);
    bool truncated = false;
    extend_paths(paths, method.body, truncated);
    if (truncated && log)
        log->warnings.push_back("path cap exceeded in " + cls.name + "." + method.name +
                               "; remaining branch combinations dropped");
    for (const auto& p : paths) collect_from_path(cls, method, p, out);
}

}  // namespace

SequenceMap collect_static_sequences(const Program& program, CollectionLog* log) {
    SequenceMap out;
    for (const auto& [_, cls] : program.classes) {
        for (const auto& ctor : cls.constructors) collect_from_method(cls, ctor, out, log);
        for (const auto& m : cls.methods) collect_from_method(cls, m, out, log);
    }
    return out;
}

bool test_references_class(const sut::TestCase& test, const std::set<std::string>& classes) {
    for (const auto& s : test.stmts)
        if (s.tag == sut::TStmt::Tag::Construct && classes.count(s.cls)) return true;
    return false;
}

SequenceMap collect_dynamic_sequences(const Program& program,
                                      const std::vector<sut::TestCase>& tests,
                                      const std::set<std::string>& relevant_classes,
                                      CollectionLog* log, long step_limit) {
    SequenceMap out;
    for (const auto& test : tests) {
        if (!test_references_class(test, relevant_classes)) continue;
        sut::ExecutionResult result = sut::execute_test(program, test, step_limit);
        if (result.thrown && (result.thrown->type == sut::kBudgetExhausted ||
                              result.thrown->type == sut::kHarnessError)) {
            if (log)
                log->warnings.push_back("test '" + test.name + "' excluded from dynamic analysis (" +
                                       result.thrown->type + ")");
            continue;
        }
        // Per object identity, the full interprocedural event subsequence.
        std::map<int, CallSequence> per_object;
        std::vector<int> order;
        for (const auto& ev : result.call_events) {
            auto [it, inserted] =
                per_object.try_emplace(ev.object_id, CallSequence{ev.cls, {}, SequenceOrigin::Dynamic});
            if (inserted) order.push_back(ev.object_id);
            it->second.actions.push_back(ev.action);
        }
        for (int id : order) {
            const CallSequence& seq = per_object[id];
            out[seq.class_name].insert(seq);
        }
    }
    return out;
}

std::string format_sequences(const SequenceMap& sequences) {
    std::ostringstream out;
    for (const auto& [cls, seqs] : sequences) {
        for (const auto& seq : seqs) {
            out << cls << "\t"
                << (seq.origin == SequenceOrigin::Static ? "static" : "dynamic") << "\t";
            for (size_t i = 0; i < seq.actions.size(); ++i)
                out << (i ? "," : "") << seq.actions[i];
            out << "\n";
        }
    }
    return out.str();
}

SequenceMap parse_sequences(const std::string& text) {
    SequenceMap out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw sut::ParseError("malformed sequence line", "sequences", line_no);
        CallSequence seq;
        seq.class_name = line.substr(0, t1);
        std::string origin = line.substr(t1 + 1, t2 - t1 - 1);
        if (origin == "static")
            seq.origin = SequenceOrigin::Static;
        else if (origin == "dynamic")
            seq.origin = SequenceOrigin::Dynamic;
        else
            throw sut::ParseError("unknown sequence origin '" + origin + "'", "sequences",
                                  line_no);
        std::string actions = line.substr(t2 + 1);
        std::string action;
        std::istringstream acts(actions);
        while (std::getline(acts, action, ','))
            if (!action.empty()) seq.actions.push_back(action);
        if (seq.actions.empty())
            throw sut::ParseError("empty call sequence", "sequences", line_no);
        out[seq.class_name].insert(std::move(seq));
    }
    return out;
}

}  // namespace crashrepro::analysis
