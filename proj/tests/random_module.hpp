#pragma once

// Seeded generator of random valid modules, used by the round-trip and
// equivalence property tests. Programs are type-correct by construction:
// every expression is generated against a requested type.

#include <random>
#include <string>
#include <vector>

#include "crossgl/ir.hpp"

namespace testgen {

using namespace crossgl;

class ModuleGen {
  public:
    explicit ModuleGen(uint32_t seed) : rng_(seed) {}

    ShaderModule module() {
        ShaderModule m;
        m.name = "Gen" + std::to_string(pick(1000));
        int nstructs = pick(3);
        for (int i = 0; i < nstructs; ++i) m.structs.push_back(struct_decl(i));
        int nconsts = pick(3);
        for (int i = 0; i < nconsts; ++i) {
            GlobalDecl g;
            g.name = "c" + std::to_string(i);
            g.qualifier = GlobalQualifier::Const;
            g.type = chance(2) ? Type::float_() : Type::vec(2 + pick(3));
            g.init = literal_of(g.type);
            m.globals.push_back(std::move(g));
        }
        int nfuncs = 1 + pick(4);
        for (int i = 0; i < nfuncs; ++i) m.functions.push_back(function(m, i));
        return m;
    }

  private:
    std::mt19937 rng_;

    int pick(int n) { return static_cast<int>(rng_() % static_cast<uint32_t>(n)); }
    bool chance(int one_in) { return pick(one_in) == 0; }

    Type scalar_or_vec() {
        switch (pick(5)) {
        case 0: return Type::int_();
        case 1: return Type::float_();
        default: return Type::vec(2 + pick(3));
        }
    }

    StructDecl struct_decl(int index) {
        StructDecl s;
        s.name = "S" + std::to_string(index);
        int n = 1 + pick(4);
        for (int i = 0; i < n; ++i) {
            StructMember m;
            m.name = "m" + std::to_string(i);
            m.type = chance(5) ? Type::array(Type::float_(), 1 + pick(8)) : scalar_or_vec();
            s.members.push_back(std::move(m));
        }
        return s;
    }

    ExprPtr literal_of(const Type& t) {
        if (t.is_int()) return Expr::int_lit(pick(100) - 50);
        if (t.is_float()) return Expr::float_lit((pick(4000) - 2000) / 128.0);
        if (t.is_bool()) return Expr::bool_lit(chance(2));
        if (t.is_vector()) {
            std::vector<ExprPtr> args;
            for (int i = 0; i < t.dim; ++i) args.push_back(literal_of(Type::float_()));
            return Expr::construct(t, std::move(args));
        }
        if (t.is_matrix()) {
            std::vector<ExprPtr> args;
            for (int i = 0; i < t.dim; ++i) args.push_back(literal_of(Type::vec(t.dim)));
            return Expr::construct(t, std::move(args));
        }
        return Expr::float_lit(1.0);
    }

    struct Local {
        std::string name;
        Type type;
        bool is_mutable = true;
    };

    ExprPtr expr_of(const Type& t, const std::vector<Local>& env, int depth) {
        // Candidate locals of the exact type.
        std::vector<const Local*> matching;
        for (const auto& l : env)
            if (l.type == t) matching.push_back(&l);

        if (depth <= 0 || chance(3)) {
            if (!matching.empty() && chance(2))
                return Expr::var_ref(matching[static_cast<size_t>(pick(
                                                  static_cast<int>(matching.size())))]
                                         ->name);
            return literal_of(t);
        }
        if (t.is_bool()) {
            switch (pick(3)) {
            case 0: {
                Type operand = chance(2) ? Type::float_() : Type::int_();
                const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
                return Expr::binary(ops[pick(6)], expr_of(operand, env, depth - 1),
                                    expr_of(operand, env, depth - 1));
            }
            case 1:
                return Expr::binary(chance(2) ? "&&" : "||", expr_of(t, env, depth - 1),
                                    expr_of(t, env, depth - 1));
            default: return Expr::unary("!", expr_of(t, env, depth - 1));
            }
        }
        if (t.is_int() || t.is_float()) {
            switch (pick(5)) {
            case 0: {
                const char* ops[] = {"+", "-", "*"};
                return Expr::binary(ops[pick(3)], expr_of(t, env, depth - 1),
                                    expr_of(t, env, depth - 1));
            }
            case 1: return Expr::unary("-", expr_of(t, env, depth - 1));
            case 2:
                if (t.is_float()) {
                    // Swizzle a vector down to a scalar.
                    Type vt = Type::vec(2 + pick(3));
                    const char* comps[] = {"x", "y"};
                    return Expr::member(expr_of(vt, env, depth - 1), comps[pick(2)]);
                }
                return Expr::ternary(expr_of(Type::bool_(), env, depth - 1),
                                     expr_of(t, env, depth - 1), expr_of(t, env, depth - 1));
            case 3:
                return Expr::ternary(expr_of(Type::bool_(), env, depth - 1),
                                     expr_of(t, env, depth - 1), expr_of(t, env, depth - 1));
            default: return literal_of(t);
            }
        }
        if (t.is_vector()) {
            switch (pick(4)) {
            case 0:
                return Expr::binary(chance(2) ? "+" : "*", expr_of(t, env, depth - 1),
                                    expr_of(t, env, depth - 1));
            case 1:
                return Expr::binary("*", expr_of(t, env, depth - 1),
                                    expr_of(Type::float_(), env, depth - 1));
            case 2: {
                std::vector<ExprPtr> args;
                args.push_back(expr_of(Type::float_(), env, depth - 1));
                for (int i = 1; i < t.dim; ++i) args.push_back(literal_of(Type::float_()));
                return Expr::construct(t, std::move(args));
            }
            default: return literal_of(t);
            }
        }
        return literal_of(t);
    }

    void statements(std::vector<StmtPtr>& out, std::vector<Local>& env, int budget,
                    int& name_counter) {
        while (budget-- > 0) {
            switch (pick(5)) {
            case 0: {
                Type t = scalar_or_vec();
                std::string name = "v" + std::to_string(name_counter++);
                out.push_back(Stmt::var_decl(name, t, expr_of(t, env, 2)));
                env.push_back({name, t, true});
                break;
            }
            case 1: {
                std::vector<const Local*> writable;
                for (const auto& l : env)
                    if (l.is_mutable) writable.push_back(&l);
                if (writable.empty()) break;
                const Local& l = *writable[static_cast<size_t>(
                    pick(static_cast<int>(writable.size())))];
                const char* ops[] = {"=", "+=", "*="};
                std::string op = l.type.is_bool() ? "=" : ops[pick(3)];
                out.push_back(Stmt::assign(Expr::var_ref(l.name), op, expr_of(l.type, env, 2)));
                break;
            }
            case 2: {
                auto s = std::make_unique<Stmt>();
                s->kind = StmtKind::If;
                s->expr = expr_of(Type::bool_(), env, 2);
                std::vector<Local> inner = env;
                statements(s->body, inner, 1 + pick(2), name_counter);
                if (chance(2)) {
                    std::vector<Local> inner2 = env;
                    statements(s->else_body, inner2, 1 + pick(2), name_counter);
                }
                if (s->body.empty())
                    s->body.push_back(Stmt::expr_stmt(expr_of(Type::float_(), env, 1)));
                out.push_back(std::move(s));
                break;
            }
            case 3: {
                auto s = std::make_unique<Stmt>();
                s->kind = StmtKind::For;
                std::string iv = "i" + std::to_string(name_counter++);
                s->init = Stmt::var_decl(iv, Type::int_(), Expr::int_lit(0));
                s->expr = Expr::binary("<", Expr::var_ref(iv), Expr::int_lit(1 + pick(8)));
                s->step = Stmt::assign(Expr::var_ref(iv), "=",
                                       Expr::binary("+", Expr::var_ref(iv), Expr::int_lit(1)));
                std::vector<Local> inner = env;
                inner.push_back({iv, Type::int_(), true});
                statements(s->body, inner, 1 + pick(2), name_counter);
                if (s->body.empty() && chance(2)) {
                    auto br = std::make_unique<Stmt>();
                    br->kind = StmtKind::Break;
                    s->body.push_back(std::move(br));
                }
                if (s->body.empty())
                    s->body.push_back(Stmt::expr_stmt(expr_of(Type::float_(), inner, 1)));
                out.push_back(std::move(s));
                break;
            }
            default:
                out.push_back(Stmt::expr_stmt(expr_of(scalar_or_vec(), env, 2)));
                break;
            }
        }
    }

    FunctionDecl function(const ShaderModule& m, int index) {
        FunctionDecl f;
        f.name = "f" + std::to_string(index);
        Type ret = scalar_or_vec();
        f.return_type = ret;
        int nparams = pick(4);
        std::vector<Local> env;
        for (const auto& g : m.globals) env.push_back({g.name, g.type, false});
        for (int i = 0; i < nparams; ++i) {
            Param p;
            p.name = "p" + std::to_string(i);
            p.type = scalar_or_vec();
            env.push_back({p.name, p.type, true});
            f.params.push_back(std::move(p));
        }
        int name_counter = 0;
        statements(f.body, env, 1 + pick(4), name_counter);
        f.body.push_back(Stmt::ret(expr_of(ret, env, 2)));
        return f;
    }
};

} // namespace testgen
