#include "crossgl/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "crossgl/semantics.hpp"

namespace crossgl {

// ---------------------------------------------------------------------------
// Value
// ---------------------------------------------------------------------------

Value Value::void_() { return Value{}; }

Value Value::int_(long long v) {
    Value x;
    x.kind = Kind::Int;
    x.i = static_cast<int32_t>(static_cast<uint32_t>(v));
    return x;
}

Value Value::float_(double v) {
    Value x;
    x.kind = Kind::Float;
    x.f = v;
    return x;
}

Value Value::bool_(bool v) {
    Value x;
    x.kind = Kind::Bool;
    x.b = v;
    return x;
}

Value Value::vec(std::vector<double> components) {
    Value x;
    x.kind = Kind::Vec;
    x.dim = static_cast<int>(components.size());
    x.elems = std::move(components);
    return x;
}

Value Value::mat(int dim, std::vector<double> column_major) {
    Value x;
    x.kind = Kind::Mat;
    x.dim = dim;
    x.elems = std::move(column_major);
    return x;
}

Value Value::array(std::vector<Value> items) {
    Value x;
    x.kind = Kind::Array;
    x.items = std::move(items);
    return x;
}

Value Value::record(std::vector<std::pair<std::string, Value>> fields) {
    Value x;
    x.kind = Kind::Record;
    x.fields = std::move(fields);
    return x;
}

Value Value::zero_of(const Type& type, const ShaderModule& module) {
    switch (type.kind) {
    case Type::Kind::Scalar:
        switch (type.scalar) {
        case ScalarKind::Int: return int_(0);
        case ScalarKind::Float: return float_(0.0);
        case ScalarKind::Bool: return bool_(false);
        case ScalarKind::Void: return void_();
        }
        return void_();
    case Type::Kind::Vector: return vec(std::vector<double>(type.dim, 0.0));
    case Type::Kind::Matrix:
        return mat(type.dim, std::vector<double>(static_cast<size_t>(type.dim) * type.dim, 0.0));
    case Type::Kind::Array: {
        long long n = type.array_size.value_or(0);
        std::vector<Value> items;
        items.reserve(static_cast<size_t>(n));
        for (long long i = 0; i < n; ++i) items.push_back(zero_of(*type.element, module));
        return array(std::move(items));
    }
    case Type::Kind::Named: {
        const StructDecl* s = module.find_struct(type.name);
        std::vector<std::pair<std::string, Value>> fields;
        if (s)
            for (const auto& m : s->members)
                fields.emplace_back(m.name, zero_of(m.type, module));
        return record(std::move(fields));
    }
    case Type::Kind::Sampler2D:
        return void_(); // samplers have no runtime value; texture() is special-cased
    }
    return void_();
}

Value* Value::field(const std::string& name) {
    for (auto& [n, v] : fields)
        if (n == name) return &v;
    return nullptr;
}

const Value* Value::field(const std::string& name) const {
    for (const auto& [n, v] : fields)
        if (n == name) return &v;
    return nullptr;
}

bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Value::Kind::Void: return true;
    case Value::Kind::Int: return a.i == b.i;
    case Value::Kind::Float: return a.f == b.f;
    case Value::Kind::Bool: return a.b == b.b;
    case Value::Kind::Vec:
    case Value::Kind::Mat: return a.dim == b.dim && a.elems == b.elems;
    case Value::Kind::Array: return a.items == b.items;
    case Value::Kind::Record: return a.fields == b.fields;
    }
    return false;
}

std::string Value::str() const {
    switch (kind) {
    case Kind::Void: return "void";
    case Kind::Int: return std::to_string(i);
    case Kind::Float: return format_float(f);
    case Kind::Bool: return b ? "true" : "false";
    case Kind::Vec: {
        std::string s = "vec" + std::to_string(dim) + "(";
        for (int k = 0; k < dim; ++k) s += (k ? ", " : "") + format_float(elems[k]);
        return s + ")";
    }
    case Kind::Mat: {
        std::string s = "mat" + std::to_string(dim) + "(";
        for (size_t k = 0; k < elems.size(); ++k) s += (k ? ", " : "") + format_float(elems[k]);
        return s + ")";
    }
    case Kind::Array: {
        std::string s = "[";
        for (size_t k = 0; k < items.size(); ++k) s += (k ? ", " : "") + items[k].str();
        return s + "]";
    }
    case Kind::Record: {
        std::string s = "{";
        bool first = true;
        for (const auto& [n, v] : fields) {
            if (!first) s += ", ";
            first = false;
            s += n + ": " + v.str();
        }
        return s + "}";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

namespace {

long long wrap32(long long v) {
    return static_cast<int32_t>(static_cast<uint32_t>(static_cast<uint64_t>(v)));
}

[[noreturn]] void runtime_error(EvalError::Kind kind, const std::string& msg) {
    throw EvalError(kind, msg);
}

double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    return r < 0 ? r + m : r;
}

enum class Flow { Normal, Break, Continue, Return };

struct Interpreter {
    const ShaderModule& module;
    const EvalOptions& options;
    long long steps = 0;
    int call_depth = 0;
    std::map<std::string, Value> globals; // evaluated const globals + thread bindings

    using Scope = std::map<std::string, Value>;

    struct Frame {
        std::vector<Scope> scopes;
        Value return_value;
    };

    explicit Interpreter(const ShaderModule& m, const EvalOptions& opts)
        : module(m), options(opts) {
        for (const auto& g : module.globals)
            if (g.qualifier == GlobalQualifier::Const && g.init) {
                Frame dummy;
                globals[g.name] = eval_expr(dummy, *g.init);
            }
    }

    void count_step() {
        if (++steps > kStepBudget)
            runtime_error(EvalError::Kind::StepBudgetExceeded,
                          "step budget of 10^7 exceeded");
    }

    Value* find_var(Frame& frame, const std::string& name) {
        for (auto it = frame.scopes.rbegin(); it != frame.scopes.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        auto g = globals.find(name);
        if (g != globals.end()) return &g->second;
        return nullptr;
    }

    // -- expressions --------------------------------------------------------

    Value eval_binary(const std::string& op, const Value& l, const Value& r,
                      const SourceLocation& loc) {
        auto both_num = [&](auto fop, auto iop) -> Value {
            if (l.kind == Value::Kind::Int && r.kind == Value::Kind::Int)
                return Value::int_(iop(l.i, r.i));
            double a = l.kind == Value::Kind::Int ? static_cast<double>(l.i) : l.f;
            double b = r.kind == Value::Kind::Int ? static_cast<double>(r.i) : r.f;
            return Value::float_(fop(a, b));
        };
        auto as_double = [](const Value& v) {
            return v.kind == Value::Kind::Int ? static_cast<double>(v.i) : v.f;
        };

        if (op == "+" || op == "-" || op == "*" || op == "/") {
            bool l_scalar = l.kind == Value::Kind::Int || l.kind == Value::Kind::Float;
            bool r_scalar = r.kind == Value::Kind::Int || r.kind == Value::Kind::Float;
            if (l_scalar && r_scalar) {
                if (op == "+") return both_num([](double a, double b) { return a + b; },
                                               [](long long a, long long b) { return wrap32(a + b); });
                if (op == "-") return both_num([](double a, double b) { return a - b; },
                                               [](long long a, long long b) { return wrap32(a - b); });
                if (op == "*") return both_num([](double a, double b) { return a * b; },
                                               [](long long a, long long b) { return wrap32(a * b); });
                if (l.kind == Value::Kind::Int && r.kind == Value::Kind::Int) {
                    if (r.i == 0)
                        runtime_error(EvalError::Kind::DivisionByZero,
                                      loc.str() + ": integer division by zero");
                    return Value::int_(wrap32(l.i / r.i)); // truncates toward zero
                }
                double b = as_double(r);
                if (b == 0.0)
                    runtime_error(EvalError::Kind::DivisionByZero,
                                  loc.str() + ": division by zero");
                return Value::float_(as_double(l) / b);
            }
            if (l.kind == Value::Kind::Vec && r.kind == Value::Kind::Vec && l.dim == r.dim) {
                std::vector<double> out(l.elems.size());
                for (size_t k = 0; k < out.size(); ++k) {
                    double a = l.elems[k], b = r.elems[k];
                    if (op == "/" && b == 0.0)
                        runtime_error(EvalError::Kind::DivisionByZero,
                                      loc.str() + ": division by zero");
                    out[k] = op == "+"   ? a + b
                             : op == "-" ? a - b
                             : op == "*" ? a * b
                                         : a / b;
                }
                return Value::vec(std::move(out));
            }
            if (l.kind == Value::Kind::Vec && r_scalar) {
                double s = as_double(r);
                if (op == "/" && s == 0.0)
                    runtime_error(EvalError::Kind::DivisionByZero,
                                  loc.str() + ": division by zero");
                std::vector<double> out(l.elems.size());
                for (size_t k = 0; k < out.size(); ++k)
                    out[k] = op == "+"   ? l.elems[k] + s
                             : op == "-" ? l.elems[k] - s
                             : op == "*" ? l.elems[k] * s
                                         : l.elems[k] / s;
                return Value::vec(std::move(out));
            }
            if (l_scalar && r.kind == Value::Kind::Vec) {
                double s = as_double(l);
                std::vector<double> out(r.elems.size());
                for (size_t k = 0; k < out.size(); ++k) {
                    double b = r.elems[k];
                    if (op == "/" && b == 0.0)
                        runtime_error(EvalError::Kind::DivisionByZero,
                                      loc.str() + ": division by zero");
                    out[k] = op == "+"   ? s + b
                             : op == "-" ? s - b
                             : op == "*" ? s * b
                                         : s / b;
                }
                return Value::vec(std::move(out));
            }
            if (op == "*") {
                if (l.kind == Value::Kind::Mat && r.kind == Value::Kind::Mat && l.dim == r.dim) {
                    int n = l.dim;
                    std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
                    for (int col = 0; col < n; ++col)
                        for (int row = 0; row < n; ++row)
                            for (int k = 0; k < n; ++k)
                                out[col * n + row] += l.elems[k * n + row] * r.elems[col * n + k];
                    return Value::mat(n, std::move(out));
                }
                if (l.kind == Value::Kind::Mat && r.kind == Value::Kind::Vec && l.dim == r.dim) {
                    int n = l.dim;
                    std::vector<double> out(n, 0.0);
                    for (int row = 0; row < n; ++row)
                        for (int k = 0; k < n; ++k) out[row] += l.elems[k * n + row] * r.elems[k];
                    return Value::vec(std::move(out));
                }
                // Row-vector convention: (v * M)[col] = dot(v, column col).
                if (l.kind == Value::Kind::Vec && r.kind == Value::Kind::Mat && l.dim == r.dim) {
                    int n = l.dim;
                    std::vector<double> out(n, 0.0);
                    for (int col = 0; col < n; ++col)
                        for (int k = 0; k < n; ++k) out[col] += l.elems[k] * r.elems[col * n + k];
                    return Value::vec(std::move(out));
                }
                if (l.kind == Value::Kind::Mat && r_scalar) {
                    std::vector<double> out = l.elems;
                    for (double& x : out) x *= as_double(r);
                    return Value::mat(l.dim, std::move(out));
                }
                if (l_scalar && r.kind == Value::Kind::Mat) {
                    std::vector<double> out = r.elems;
                    for (double& x : out) x *= as_double(l);
                    return Value::mat(r.dim, std::move(out));
                }
            }
        }
        if (op == "%") {
            if (r.i == 0)
                runtime_error(EvalError::Kind::DivisionByZero, loc.str() + ": modulo by zero");
            return Value::int_(wrap32(l.i % r.i));
        }
        if (op == "==" || op == "!=") {
            bool eq;
            if (l.kind == r.kind) {
                eq = l == r;
            } else {
                eq = as_double(l) == as_double(r); // int/float promotion
            }
            return Value::bool_(op == "==" ? eq : !eq);
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            double a = as_double(l), b = as_double(r);
            bool v = op == "<" ? a < b : op == "<=" ? a <= b : op == ">" ? a > b : a >= b;
            return Value::bool_(v);
        }
        runtime_error(EvalError::Kind::Other, loc.str() + ": bad operator " + op);
    }

    Value eval_builtin(Frame& frame, const Expr& e) {
        const std::string& name = e.text;
        if (name == "texture") {
            // Procedural checkerboard, 8x8 cells, alpha 1. The sampler
            // argument carries no runtime value and is not evaluated.
            Value uv = eval_expr(frame, *e.args[1]);
            double c = positive_mod(std::floor(8.0 * uv.elems[0]) +
                                        std::floor(8.0 * uv.elems[1]),
                                    2.0);
            return Value::vec({c, c, c, 1.0});
        }
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval_expr(frame, *a));
        auto f = [&](size_t k) {
            return args[k].kind == Value::Kind::Int ? static_cast<double>(args[k].i) : args[k].f;
        };

        if (name == "dot") {
            double s = 0;
            for (int k = 0; k < args[0].dim; ++k) s += args[0].elems[k] * args[1].elems[k];
            return Value::float_(s);
        }
        if (name == "cross") {
            const auto& a = args[0].elems;
            const auto& b = args[1].elems;
            return Value::vec({a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                               a[0] * b[1] - a[1] * b[0]});
        }
        if (name == "length" || name == "normalize") {
            double s = 0;
            for (double x : args[0].elems) s += x * x;
            double len = std::sqrt(s);
            if (name == "length") return Value::float_(len);
            if (len == 0.0)
                runtime_error(EvalError::Kind::DivisionByZero,
                              e.loc.str() + ": normalize of zero vector");
            std::vector<double> out = args[0].elems;
            for (double& x : out) x /= len;
            return Value::vec(std::move(out));
        }
        if (name == "max" || name == "min") {
            if (args[0].kind == Value::Kind::Int && args[1].kind == Value::Kind::Int)
                return Value::int_(name == "max" ? std::max(args[0].i, args[1].i)
                                                 : std::min(args[0].i, args[1].i));
            return Value::float_(name == "max" ? std::max(f(0), f(1)) : std::min(f(0), f(1)));
        }
        if (name == "pow") return Value::float_(std::pow(f(0), f(1)));
        if (name == "sqrt") return Value::float_(std::sqrt(f(0)));
        if (name == "mix") {
            if (args[0].kind == Value::Kind::Vec) {
                double t = f(2);
                std::vector<double> out(args[0].elems.size());
                for (size_t k = 0; k < out.size(); ++k)
                    out[k] = args[0].elems[k] * (1.0 - t) + args[1].elems[k] * t;
                return Value::vec(std::move(out));
            }
            double t = f(2);
            return Value::float_(f(0) * (1.0 - t) + f(1) * t);
        }
        if (name == "clamp") {
            double lo = f(1), hi = f(2);
            if (args[0].kind == Value::Kind::Vec) {
                std::vector<double> out = args[0].elems;
                for (double& x : out) x = std::min(std::max(x, lo), hi);
                return Value::vec(std::move(out));
            }
            return Value::float_(std::min(std::max(f(0), lo), hi));
        }
        if (name == "abs") {
            if (args[0].kind == Value::Kind::Int) return Value::int_(wrap32(std::llabs(args[0].i)));
            return Value::float_(std::fabs(f(0)));
        }
        if (name == "floor") return Value::float_(std::floor(f(0)));
        if (name == "sin") return Value::float_(std::sin(f(0)));
        if (name == "cos") return Value::float_(std::cos(f(0)));
        runtime_error(EvalError::Kind::Other, e.loc.str() + ": unknown builtin " + name);
    }

    Value eval_construct(Frame& frame, const Expr& e) {
        const Type& t = e.ctor_type;
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval_expr(frame, *a));
        auto scalar = [](const Value& v) {
            return v.kind == Value::Kind::Int ? static_cast<double>(v.i) : v.f;
        };
        if (t.is_vector()) {
            if (args.size() == 1 && args[0].kind != Value::Kind::Vec)
                return Value::vec(std::vector<double>(t.dim, scalar(args[0]))); // splat
            std::vector<double> out;
            out.reserve(t.dim);
            for (const Value& a : args) {
                if (a.kind == Value::Kind::Vec)
                    out.insert(out.end(), a.elems.begin(), a.elems.end());
                else
                    out.push_back(scalar(a));
            }
            return Value::vec(std::move(out));
        }
        if (t.is_matrix()) {
            std::vector<double> out;
            out.reserve(static_cast<size_t>(t.dim) * t.dim);
            for (const Value& col : args)
                out.insert(out.end(), col.elems.begin(), col.elems.end());
            return Value::mat(t.dim, std::move(out));
        }
        if (t.is_float()) return Value::float_(scalar(args[0]));
        // int(x) truncates toward zero and wraps.
        double v = scalar(args[0]);
        return Value::int_(wrap32(static_cast<long long>(v)));
    }

    Value eval_call(Frame& frame, const Expr& e) {
        if (const FunctionDecl* fn = module.find_function(e.text)) {
            std::vector<Value> args;
            args.reserve(e.args.size());
            for (size_t k = 0; k < e.args.size(); ++k) {
                Value v = eval_expr(frame, *e.args[k]);
                if (fn->params[k].type.is_float() && v.kind == Value::Kind::Int)
                    v = Value::float_(static_cast<double>(v.i));
                args.push_back(std::move(v));
            }
            return call_function(*fn, std::move(args)).result;
        }
        return eval_builtin(frame, e);
    }

    Value eval_expr(Frame& frame, const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: return Value::int_(e.int_value);
        case ExprKind::FloatLit: return Value::float_(e.float_value);
        case ExprKind::BoolLit: return Value::bool_(e.bool_value);
        case ExprKind::VarRef: {
            Value* v = find_var(frame, e.text);
            if (!v)
                runtime_error(EvalError::Kind::Other,
                              e.loc.str() + ": " + e.text + " has no value in this evaluation");
            return *v;
        }
        case ExprKind::Binary: {
            if (e.text == "&&" || e.text == "||") {
                Value l = eval_expr(frame, *e.args[0]);
                if (e.text == "&&" && !l.b) return Value::bool_(false);
                if (e.text == "||" && l.b) return Value::bool_(true);
                return eval_expr(frame, *e.args[1]);
            }
            Value l = eval_expr(frame, *e.args[0]);
            Value r = eval_expr(frame, *e.args[1]);
            return eval_binary(e.text, l, r, e.loc);
        }
        case ExprKind::Unary: {
            Value v = eval_expr(frame, *e.args[0]);
            if (e.text == "!") return Value::bool_(!v.b);
            switch (v.kind) {
            case Value::Kind::Int: return Value::int_(wrap32(-v.i));
            case Value::Kind::Float: return Value::float_(-v.f);
            case Value::Kind::Vec:
            case Value::Kind::Mat: {
                for (double& x : v.elems) x = -x;
                return v;
            }
            default:
                runtime_error(EvalError::Kind::Other, e.loc.str() + ": bad unary operand");
            }
        }
        case ExprKind::Call: return eval_call(frame, e);
        case ExprKind::Construct: return eval_construct(frame, e);
        case ExprKind::MemberAccess:
        case ExprKind::MemberOrSwizzle:
        case ExprKind::Swizzle: {
            Value base = eval_expr(frame, *e.args[0]);
            if (base.kind == Value::Kind::Record) {
                const Value* f = base.field(e.text);
                if (!f)
                    runtime_error(EvalError::Kind::Other,
                                  e.loc.str() + ": record has no member " + e.text);
                return *f;
            }
            std::vector<double> out;
            for (char c : e.text) out.push_back(base.elems[c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : 3]);
            if (out.size() == 1) return Value::float_(out[0]);
            return Value::vec(std::move(out));
        }
        case ExprKind::Index: {
            Value base = eval_expr(frame, *e.args[0]);
            Value idx = eval_expr(frame, *e.args[1]);
            if (idx.i < 0 || idx.i >= static_cast<long long>(base.items.size()))
                runtime_error(EvalError::Kind::IndexOutOfBounds,
                              e.loc.str() + ": index " + std::to_string(idx.i) +
                                  " out of bounds for length " +
                                  std::to_string(base.items.size()));
            return base.items[static_cast<size_t>(idx.i)];
        }
        case ExprKind::Ternary: {
            Value c = eval_expr(frame, *e.args[0]);
            return eval_expr(frame, c.b ? *e.args[1] : *e.args[2]);
        }
        }
        runtime_error(EvalError::Kind::Other, "unreachable expression kind");
    }

    // -- lvalues -------------------------------------------------------------
    // Assignment works as load-modify-store over the access chain;
    // expressions are side-effect free, so re-evaluating bases is safe.

    void store(Frame& frame, const Expr& lv, Value newval) {
        switch (lv.kind) {
        case ExprKind::VarRef: {
            Value* v = find_var(frame, lv.text);
            if (!v)
                runtime_error(EvalError::Kind::Other,
                              lv.loc.str() + ": assignment to unbound " + lv.text);
            *v = std::move(newval);
            return;
        }
        case ExprKind::MemberAccess:
        case ExprKind::MemberOrSwizzle:
        case ExprKind::Swizzle: {
            Value base = eval_expr(frame, *lv.args[0]);
            if (base.kind == Value::Kind::Record) {
                Value* f = base.field(lv.text);
                if (!f)
                    runtime_error(EvalError::Kind::Other,
                                  lv.loc.str() + ": record has no member " + lv.text);
                *f = std::move(newval);
            } else {
                for (size_t k = 0; k < lv.text.size(); ++k) {
                    char c = lv.text[k];
                    int idx = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : 3;
                    base.elems[idx] = lv.text.size() == 1 && newval.kind == Value::Kind::Float
                                          ? newval.f
                                          : newval.elems[k];
                }
            }
            store(frame, *lv.args[0], std::move(base));
            return;
        }
        case ExprKind::Index: {
            Value base = eval_expr(frame, *lv.args[0]);
            Value idx = eval_expr(frame, *lv.args[1]);
            if (idx.i < 0 || idx.i >= static_cast<long long>(base.items.size()))
                runtime_error(EvalError::Kind::IndexOutOfBounds,
                              lv.loc.str() + ": index " + std::to_string(idx.i) +
                                  " out of bounds for length " +
                                  std::to_string(base.items.size()));
            base.items[static_cast<size_t>(idx.i)] = std::move(newval);
            store(frame, *lv.args[0], std::move(base));
            return;
        }
        default:
            runtime_error(EvalError::Kind::Other, lv.loc.str() + ": not an lvalue");
        }
    }

    // -- statements ----------------------------------------------------------

    Flow exec_stmt(Frame& frame, const Stmt& s) {
        count_step();
        switch (s.kind) {
        case StmtKind::VarDecl: {
            Value v = s.expr ? coerce(eval_expr(frame, *s.expr), *s.decl_type)
                             : Value::zero_of(*s.decl_type, module);
            frame.scopes.back()[s.text] = std::move(v);
            return Flow::Normal;
        }
        case StmtKind::Assign: {
            Value rhs = eval_expr(frame, *s.expr);
            if (s.text == "=") {
                if (s.lvalue->type) rhs = coerce(std::move(rhs), *s.lvalue->type);
                store(frame, *s.lvalue, std::move(rhs));
            } else {
                Value cur = eval_expr(frame, *s.lvalue);
                Value combined = eval_binary(std::string(1, s.text[0]), cur, rhs, s.loc);
                if (s.lvalue->type) combined = coerce(std::move(combined), *s.lvalue->type);
                store(frame, *s.lvalue, std::move(combined));
            }
            return Flow::Normal;
        }
        case StmtKind::If: {
            Value c = eval_expr(frame, *s.expr);
            frame.scopes.emplace_back();
            Flow flow = Flow::Normal;
            const auto& branch = c.b ? s.body : s.else_body;
            for (const auto& b : branch) {
                flow = exec_stmt(frame, *b);
                if (flow != Flow::Normal) break;
            }
            frame.scopes.pop_back();
            return flow;
        }
        case StmtKind::For: {
            frame.scopes.emplace_back();
            Flow result = Flow::Normal;
            if (s.init) exec_stmt(frame, *s.init);
            for (;;) {
                count_step();
                if (s.expr) {
                    Value c = eval_expr(frame, *s.expr);
                    if (!c.b) break;
                }
                frame.scopes.emplace_back();
                Flow flow = Flow::Normal;
                for (const auto& b : s.body) {
                    flow = exec_stmt(frame, *b);
                    if (flow != Flow::Normal) break;
                }
                frame.scopes.pop_back();
                if (flow == Flow::Return) {
                    result = flow;
                    break;
                }
                if (flow == Flow::Break) break;
                if (s.step) exec_stmt(frame, *s.step);
            }
            frame.scopes.pop_back();
            return result;
        }
        case StmtKind::While: {
            Flow result = Flow::Normal;
            for (;;) {
                count_step();
                Value c = eval_expr(frame, *s.expr);
                if (!c.b) break;
                frame.scopes.emplace_back();
                Flow flow = Flow::Normal;
                for (const auto& b : s.body) {
                    flow = exec_stmt(frame, *b);
                    if (flow != Flow::Normal) break;
                }
                frame.scopes.pop_back();
                if (flow == Flow::Return) {
                    result = flow;
                    break;
                }
                if (flow == Flow::Break) break;
            }
            return result;
        }
        case StmtKind::Return:
            frame.return_value = s.expr ? eval_expr(frame, *s.expr) : Value::void_();
            return Flow::Return;
        case StmtKind::Break: return Flow::Break;
        case StmtKind::Continue: return Flow::Continue;
        case StmtKind::ExprStmt: eval_expr(frame, *s.expr); return Flow::Normal;
        case StmtKind::Block: {
            frame.scopes.emplace_back();
            Flow flow = Flow::Normal;
            for (const auto& b : s.body) {
                flow = exec_stmt(frame, *b);
                if (flow != Flow::Normal) break;
            }
            frame.scopes.pop_back();
            return flow;
        }
        }
        return Flow::Normal;
    }

    static Value coerce(Value v, const Type& target) {
        if (target.is_float() && v.kind == Value::Kind::Int)
            return Value::float_(static_cast<double>(v.i));
        return v;
    }

    EvalResult call_function(const FunctionDecl& fn, std::vector<Value> args) {
        if (++call_depth > kMaxCallDepth)
            runtime_error(EvalError::Kind::CallDepthExceeded,
                          "call depth limit of 1024 exceeded in " + fn.name);
        Frame frame;
        frame.scopes.emplace_back();
        for (size_t k = 0; k < fn.params.size(); ++k)
            frame.scopes.back()[fn.params[k].name] = std::move(args[k]);
        Flow flow = Flow::Normal;
        for (const auto& s : fn.body) {
            flow = exec_stmt(frame, *s);
            if (flow == Flow::Return) break;
        }
        --call_depth;
        EvalResult result;
        result.result = flow == Flow::Return ? std::move(frame.return_value) : Value::void_();
        for (const auto& p : fn.params)
            result.args_after.push_back(frame.scopes.front().at(p.name));
        return result;
    }
};

bool value_matches_type(const Value& v, const Type& t, const ShaderModule& module) {
    switch (t.kind) {
    case Type::Kind::Scalar:
        switch (t.scalar) {
        case ScalarKind::Int: return v.kind == Value::Kind::Int;
        case ScalarKind::Float: return v.kind == Value::Kind::Float;
        case ScalarKind::Bool: return v.kind == Value::Kind::Bool;
        case ScalarKind::Void: return v.kind == Value::Kind::Void;
        }
        return false;
    case Type::Kind::Vector: return v.kind == Value::Kind::Vec && v.dim == t.dim;
    case Type::Kind::Matrix: return v.kind == Value::Kind::Mat && v.dim == t.dim;
    case Type::Kind::Array: {
        if (v.kind != Value::Kind::Array) return false;
        if (t.array_size && *t.array_size != static_cast<long long>(v.items.size()))
            return false;
        for (const auto& item : v.items)
            if (!value_matches_type(item, *t.element, module)) return false;
        return true;
    }
    case Type::Kind::Named: {
        if (v.kind != Value::Kind::Record) return false;
        const StructDecl* s = module.find_struct(t.name);
        if (!s || s->members.size() != v.fields.size()) return false;
        for (size_t k = 0; k < s->members.size(); ++k) {
            if (s->members[k].name != v.fields[k].first) return false;
            if (!value_matches_type(v.fields[k].second, s->members[k].type, module))
                return false;
        }
        return true;
    }
    case Type::Kind::Sampler2D: return false;
    }
    return false;
}

} // namespace

EvalResult eval_function_full(const ShaderModule& module, const std::string& name,
                              std::vector<Value> args, const EvalOptions& options) {
    const FunctionDecl* fn = module.find_function(name);
    if (!fn) throw EvalError(EvalError::Kind::Other, "no function named " + name);
    if (fn->params.size() != args.size())
        throw EvalError(EvalError::Kind::Other,
                        name + " expects " + std::to_string(fn->params.size()) + " arguments");
    Interpreter interp(module, options);
    if (fn->stage == Stage::Compute) {
        if (options.compute_bindings.empty())
            throw EvalError(EvalError::Kind::Other,
                            "compute function " + name +
                                " requires thread-index bindings to evaluate");
        for (const auto& builtin : compute_builtin_names()) {
            auto it = options.compute_bindings.find(builtin);
            interp.globals[builtin] = Value::int_(it == options.compute_bindings.end()
                                                      ? 0
                                                      : it->second);
        }
    }
    for (size_t k = 0; k < args.size(); ++k) {
        if (fn->params[k].type.is_float() && args[k].kind == Value::Kind::Int)
            args[k] = Value::float_(static_cast<double>(args[k].i));
        if (!value_matches_type(args[k], fn->params[k].type, module))
            throw EvalError(EvalError::Kind::Other,
                            "argument " + std::to_string(k + 1) + " of " + name +
                                " does not match " + type_to_string(fn->params[k].type));
    }
    return interp.call_function(*fn, std::move(args));
}

Value eval_function(const ShaderModule& module, const std::string& name,
                    std::vector<Value> args, const EvalOptions& options) {
    return eval_function_full(module, name, std::move(args), options).result;
}

Value eval_expression(const ShaderModule& module, const std::map<std::string, Value>& env,
                      const Expr& expr) {
    EvalOptions options;
    Interpreter interp(module, options);
    Interpreter::Frame frame;
    frame.scopes.emplace_back(env.begin(), env.end());
    return interp.eval_expr(frame, expr);
}

} // namespace crossgl
