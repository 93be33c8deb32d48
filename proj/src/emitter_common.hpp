#pragma once

// Shared statement/expression emitter for the C-family targets. Each backend
// subclasses and overrides the type spelling, constructor/builtin call forms,
// and identifier renaming for its reserved words.

#include <set>
#include <sstream>
#include <string>

#include "crossgl/codegen.hpp"
#include "crossgl/ir.hpp"

namespace crossgl {

// Expression precedence used to decide parenthesization; mirrors the parser.
int expr_precedence(const Expr& e);

// Names of functions reachable from the given roots through calls.
std::set<std::string> reachable_functions(const ShaderModule& module,
                                          const std::vector<std::string>& roots);

// Set of globals (uniform or plain) referenced, transitively, by a function.
std::set<std::string> used_globals(const ShaderModule& module, const FunctionDecl& fn);

// True when the function body mentions any reserved thread-index builtin.
bool uses_compute_builtins(const FunctionDecl& fn);

// The designated clip-position member of a vertex-output record: a vec4
// member named `position` or `clipPosition`.
const StructMember* find_clip_member(const StructDecl& s);

struct CEmitter {
    const ShaderModule& module;
    std::ostringstream out;
    int depth = 0;

    explicit CEmitter(const ShaderModule& m) : module(m) {}
    virtual ~CEmitter() = default;

    std::string pad() const { return std::string(static_cast<size_t>(depth) * 4, ' '); }

    void line(const std::string& s) { out << pad() << s << "\n"; }
    void blank() { out << "\n"; }

    // -- hooks ---------------------------------------------------------------

    virtual std::string type_name(const Type& t) = 0;

    // C-style declarator: element type first, array suffixes after the name.
    virtual std::string declare(const Type& t, const std::string& name);

    // Identifier spelling, renaming the target's reserved words.
    virtual std::string ident(const std::string& name) { return name; }

    // Variable reference spelling; backends hook this for globals threading.
    virtual std::string var_ref(const Expr& e) { return ident(e.text); }

    virtual std::string call_expr(const Expr& e);
    virtual std::string binary_expr(const Expr& e);
    virtual std::string construct_expr(const Expr& e);
    virtual std::string member_expr(const Expr& e);
    virtual std::string index_expr(const Expr& e);
    virtual std::string ternary_expr(const Expr& e);
    virtual std::string int_literal(const Expr& e) { return std::to_string(e.int_value); }
    virtual std::string float_literal(const Expr& e) { return format_float(e.float_value); }
    virtual std::string bool_literal(const Expr& e) { return e.bool_value ? "true" : "false"; }

    // -- core ----------------------------------------------------------------

    std::string expr(const Expr& e);
    // Child expression, parenthesized when its precedence is too low.
    std::string sub_expr(const Expr& e, int min_prec, bool parens_on_equal = false);
    std::string call_args(const Expr& e);

    virtual void stmt(const Stmt& s);
    virtual void var_decl_stmt(const Stmt& s);
    virtual void assign_stmt(const Stmt& s);
    virtual void if_stmt(const Stmt& s);
    virtual void for_stmt(const Stmt& s);
    virtual void while_stmt(const Stmt& s);
    virtual void return_stmt(const Stmt& s);
    virtual void expr_stmt(const Stmt& s);
    virtual void block_stmt(const Stmt& s);

    // Simple statement without trailing semicolon (for-init / for-step).
    virtual std::string simple_stmt(const Stmt& s);

    void body(const std::vector<StmtPtr>& stmts) {
        ++depth;
        for (const auto& s : stmts) stmt(*s);
        --depth;
    }
};

} // namespace crossgl
