#include "crashrepro/sutlang/interpreter.hpp"

#include <unordered_map>

namespace crashrepro::sut {

namespace {

// Raised inside the evaluator; caught at the harness boundary.
struct Raised {
    std::string type;
    std::string message;
    std::vector<StackFrame> frames;  // innermost first
};

Value default_for(const TypeRef& type) {
    Value v;
    switch (type.kind) {
        case Kind::Int: v.v = (long long)0; break;
        case Kind::Bool: v.v = false; break;
        case Kind::String: v.v = std::string(); break;
        case Kind::Object: break;  // null
    }
    return v;
}

class Interpreter {
public:
    Interpreter(const Program& program, long step_limit)
        : program_(program), step_limit_(step_limit) {}

    ExecutionResult run(const TestCase& test) {
        stack_.push_back({kHarnessClass, kHarnessMethod, test.name, 0});
        try {
            std::unordered_map<std::string, Value> env;
            for (const auto& s : test.stmts) {
                stack_.back().line = s.line;
                step();
                exec_harness(s, env);
            }
        } catch (const Raised& r) {
            result_.thrown = ThrownInfo{r.type, r.message, r.frames};
        }
        result_.steps_used = steps_;
        return std::move(result_);
    }

private:
    using Env = std::unordered_map<std::string, Value>;

    [[noreturn]] void raise(const std::string& type, const std::string& message) {
        Raised r;
        r.type = type;
        r.message = message;
        r.frames.assign(stack_.rbegin(), stack_.rend());
        throw r;
    }

    void step() {
        if (++steps_ > step_limit_) raise(kBudgetExhausted, "step limit exceeded");
    }

    void exec_harness(const TStmt& s, Env& env) {
        switch (s.tag) {
            case TStmt::Tag::LitAssign:
                env[s.var] = lit_value(s.a_lhs.lit);
                break;
            case TStmt::Tag::Construct: {
                const ClassDef* cls = program_.find_class(s.cls);
                if (!cls) raise(kHarnessError, "unknown class '" + s.cls + "'");
                std::vector<Value> args;
                for (const auto& a : s.args) args.push_back(arg_value(a, env));
                env[s.var] = construct(*cls, args);
                break;
            }
            case TStmt::Tag::Call: {
                Value recv = arg_value(Arg::of_var(s.receiver), env);
                std::vector<Value> args;
                for (const auto& a : s.args) args.push_back(arg_value(a, env));
                Value out = call_on(recv, s.method, args);
                if (!s.var.empty()) env[s.var] = out;
                break;
            }
            case TStmt::Tag::Assert: {
                if (!assert_holds(s, env)) raise(kHarnessError, "assertion failed");
                break;
            }
        }
    }

    bool assert_holds(const TStmt& s, Env& env) {
        Value lhs = arg_value(s.a_lhs, env);
        if (s.cmp == CmpOp::None) {
            if (!lhs.is_bool()) raise(kHarnessError, "assert on non-boolean");
            return lhs.as_bool();
        }
        Value rhs = arg_value(s.a_rhs, env);
        switch (s.cmp) {
            case CmpOp::Eq: return values_equal(lhs, rhs);
            case CmpOp::Ne: return !values_equal(lhs, rhs);
            default: break;
        }
        if (!lhs.is_int() || !rhs.is_int()) raise(kHarnessError, "ordered assert on non-integers");
        switch (s.cmp) {
            case CmpOp::Lt: return lhs.as_int() < rhs.as_int();
            case CmpOp::Le: return lhs.as_int() <= rhs.as_int();
            case CmpOp::Gt: return lhs.as_int() > rhs.as_int();
            case CmpOp::Ge: return lhs.as_int() >= rhs.as_int();
            default: break;
        }
        return false;
    }

    Value lit_value(const Literal& l) {
        Value v;
        if (l.is_null) return v;
        switch (l.kind) {
            case Kind::Int: v.v = l.i; break;
            case Kind::Bool: v.v = l.b; break;
            case Kind::String: v.v = l.s; break;
            case Kind::Object: break;
        }
        return v;
    }

    Value arg_value(const Arg& a, Env& env) {
        if (!a.is_var) return lit_value(a.lit);
        auto it = env.find(a.var);
        if (it == env.end()) raise(kHarnessError, "undefined variable '" + a.var + "'");
        return it->second;
    }

    Value construct(const ClassDef& cls, const std::vector<Value>& args) {
        const MethodDef* ctor = cls.find_constructor(args.size());
        if (!ctor)
            raise(kHarnessError, "no constructor " + cls.name + "/" + std::to_string(args.size()));
        auto obj = std::make_shared<ObjectData>();
        obj->cls = cls.name;
        obj->id = next_object_id_++;
        for (const auto& [fname, ftype] : cls.fields) obj->fields[fname] = default_for(ftype);
        Value self;
        self.v = obj;
        invoke(cls, *ctor, obj, args);
        return self;
    }

    Value call_on(const Value& recv, const std::string& method, const std::vector<Value>& args) {
        if (recv.is_null()) raise(kNullDereference, "call to " + method + "() on null");
        if (!recv.is_object()) raise(kHarnessError, "call on non-object value");
        const ObjRef& obj = recv.as_object();
        const ClassDef* cls = program_.find_class(obj->cls);
        if (!cls) raise(kHarnessError, "unknown class '" + obj->cls + "'");
        const MethodDef* m = cls->find_method(method, args.size());
        if (!m)
            raise(kHarnessError,
                  "no method " + obj->cls + "." + method + "/" + std::to_string(args.size()));
        return invoke(*cls, *m, obj, args);
    }

    Value invoke(const ClassDef& cls, const MethodDef& m, const ObjRef& self,
                 const std::vector<Value>& args) {
        result_.call_events.push_back({self->id, cls.name, m.action_name()});
        stack_.push_back({cls.name, m.name, cls.file, m.line});
        ++result_.shadow_entries;
        Env env;
        for (size_t i = 0; i < m.params.size(); ++i) env[m.params[i].first] = args[i];
        Value out;
        exec_block(m.body, cls, self, env, out);
        stack_.pop_back();
        return out;
    }

    // Returns true when a `return` was executed; `out` holds the value.
    bool exec_block(const std::vector<StmtPtr>& body, const ClassDef& cls, const ObjRef& self,
                    Env& env, Value& out) {
        for (const auto& sp : body) {
            const Stmt& s = *sp;
            stack_.back().line = s.line;
            step();
            result_.executed_lines.push_back({cls.name, stack_.back().method, s.line});
            switch (s.tag) {
                case Stmt::Tag::Assign:
                    env[s.var] = eval(*s.expr, cls, self, env);
                    break;
                case Stmt::Tag::FieldAssign:
                    self->fields[s.var] = eval(*s.expr, cls, self, env);
                    break;
                case Stmt::Tag::New: {
                    const ClassDef* target = program_.find_class(s.callee);
                    if (!target) raise(kHarnessError, "unknown class '" + s.callee + "'");
                    std::vector<Value> call_args;
                    for (const auto& a : s.args) call_args.push_back(eval(*a, cls, self, env));
                    int saved_line = stack_.back().line;
                    Value created = construct(*target, call_args);
                    stack_.back().line = saved_line;
                    if (s.into_field)
                        self->fields[s.var] = created;
                    else
                        env[s.var] = created;
                    break;
                }
                case Stmt::Tag::Call: {
                    Value recv;
                    if (s.receiver == "this") {
                        recv.v = self;
                    } else {
                        auto it = env.find(s.receiver);
                        if (it == env.end())
                            raise(kHarnessError, "undefined variable '" + s.receiver + "'");
                        recv = it->second;
                    }
                    std::vector<Value> call_args;
                    for (const auto& a : s.args) call_args.push_back(eval(*a, cls, self, env));
                    Value r = call_on(recv, s.callee, call_args);
                    if (!s.var.empty()) {
                        if (s.into_field)
                            self->fields[s.var] = r;
                        else
                            env[s.var] = r;
                    }
                    break;
                }
                case Stmt::Tag::If: {
                    Value cond = eval(*s.expr, cls, self, env);
                    if (!cond.is_bool()) raise(kHarnessError, "non-boolean condition");
                    const auto& branch = cond.as_bool() ? s.body : s.else_body;
                    if (exec_block(branch, cls, self, env, out)) return true;
                    break;
                }
                case Stmt::Tag::While: {
                    while (true) {
                        Value cond = eval(*s.expr, cls, self, env);
                        if (!cond.is_bool()) raise(kHarnessError, "non-boolean condition");
                        if (!cond.as_bool()) break;
                        if (exec_block(s.body, cls, self, env, out)) return true;
                        // Each re-check of the loop condition is a step.
                        stack_.back().line = s.line;
                        step();
                        result_.executed_lines.push_back({cls.name, stack_.back().method, s.line});
                    }
                    break;
                }
                case Stmt::Tag::Return:
                    if (s.expr) out = eval(*s.expr, cls, self, env);
                    return true;
                case Stmt::Tag::Throw:
                    raise(s.callee, s.message);
            }
        }
        return false;
    }

    Value eval(const Expr& e, const ClassDef& cls, const ObjRef& self, Env& env) {
        Value v;
        switch (e.tag) {
            case Expr::Tag::IntLit: v.v = e.int_val; return v;
            case Expr::Tag::BoolLit: v.v = e.bool_val; return v;
            case Expr::Tag::StrLit: v.v = e.name; return v;
            case Expr::Tag::Null: return v;
            case Expr::Tag::Var: {
                auto it = env.find(e.name);
                if (it == env.end()) raise(kHarnessError, "undefined variable '" + e.name + "'");
                return it->second;
            }
            case Expr::Tag::FieldRead: {
                auto it = self->fields.find(e.name);
                if (it == self->fields.end())
                    raise(kHarnessError, "undeclared field '" + e.name + "'");
                return it->second;
            }
            case Expr::Tag::Unary: {
                Value operand = eval(*e.lhs, cls, self, env);
                if (e.un_op == UnOp::Neg) {
                    if (!operand.is_int()) raise(kHarnessError, "negation of non-integer");
                    v.v = -operand.as_int();
                } else {
                    if (!operand.is_bool()) raise(kHarnessError, "logical not on non-boolean");
                    v.v = !operand.as_bool();
                }
                return v;
            }
            case Expr::Tag::Binary:
                return eval_binary(e, cls, self, env);
        }
        return v;
    }

    Value eval_binary(const Expr& e, const ClassDef& cls, const ObjRef& self, Env& env) {
        Value v;
        if (e.bin_op == BinOp::And || e.bin_op == BinOp::Or) {
            Value lhs = eval(*e.lhs, cls, self, env);
            if (!lhs.is_bool()) raise(kHarnessError, "logical operator on non-boolean");
            if (e.bin_op == BinOp::And && !lhs.as_bool()) {
                v.v = false;
                return v;
            }
            if (e.bin_op == BinOp::Or && lhs.as_bool()) {
                v.v = true;
                return v;
            }
            Value rhs = eval(*e.rhs, cls, self, env);
            if (!rhs.is_bool()) raise(kHarnessError, "logical operator on non-boolean");
            v.v = rhs.as_bool();
            return v;
        }
        Value lhs = eval(*e.lhs, cls, self, env);
        Value rhs = eval(*e.rhs, cls, self, env);
        switch (e.bin_op) {
            case BinOp::Eq: v.v = values_equal(lhs, rhs); return v;
            case BinOp::Ne: v.v = !values_equal(lhs, rhs); return v;
            case BinOp::Add:
                if (lhs.is_string() && rhs.is_string()) {
                    v.v = lhs.as_string() + rhs.as_string();
                    return v;
                }
                [[fallthrough]];
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div:
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge: {
                if (!lhs.is_int() || !rhs.is_int())
                    raise(kHarnessError, "arithmetic on non-integer values");
                long long a = lhs.as_int(), b = rhs.as_int();
                switch (e.bin_op) {
                    case BinOp::Add: v.v = a + b; break;
                    case BinOp::Sub: v.v = a - b; break;
                    case BinOp::Mul: v.v = a * b; break;
                    case BinOp::Div:
                        if (b == 0) raise(kDivideByZero, "division by zero");
                        v.v = a / b;
                        break;
                    case BinOp::Lt: v.v = a < b; break;
                    case BinOp::Le: v.v = a <= b; break;
                    case BinOp::Gt: v.v = a > b; break;
                    case BinOp::Ge: v.v = a >= b; break;
                    default: break;
                }
                return v;
            }
            default:
                break;
        }
        return v;
    }

    static bool values_equal(const Value& a, const Value& b) {
        if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
        if (a.is_int() && b.is_int()) return a.as_int() == b.as_int();
        if (a.is_bool() && b.is_bool()) return a.as_bool() == b.as_bool();
        if (a.is_string() && b.is_string()) return a.as_string() == b.as_string();
        if (a.is_object() && b.is_object()) return a.as_object() == b.as_object();
        return false;
    }

    const Program& program_;
    long step_limit_;
    long steps_ = 0;
    int next_object_id_ = 1;
    std::vector<StackFrame> stack_;
    ExecutionResult result_;
};

}  // namespace

ExecutionResult execute_test(const Program& program, const TestCase& test, long step_limit) {
    Interpreter interp(program, step_limit);
    return interp.run(test);
}

}  // namespace crashrepro::sut
