#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crossgl/diagnostics.hpp"
#include "crossgl/types.hpp"

namespace crossgl {

enum class Stage { None, Vertex, Fragment, Compute };

const char* stage_name(Stage s);

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

// One attribute argument: a decimal integer or a bare identifier.
struct AttrArg {
    bool is_int = false;
    long long int_value = 0;
    std::string text;

    static AttrArg integer(long long v) {
        AttrArg a;
        a.is_int = true;
        a.int_value = v;
        return a;
    }
    static AttrArg ident(std::string s) {
        AttrArg a;
        a.text = std::move(s);
        return a;
    }
};

// Opaque name + args pair. Backends consume the attributes they understand
// and ignore the rest.
struct Attribute {
    std::string name;
    std::vector<AttrArg> args;
};

const Attribute* find_attribute(const std::vector<Attribute>& attrs, const std::string& name);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
    IntLit,
    FloatLit,
    BoolLit,
    VarRef,
    Binary,
    Unary,
    Call,
    Construct,
    MemberAccess,
    Swizzle,
    MemberOrSwizzle, // parser output; specialized by the typechecker
    Index,
    Ternary,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind{};
    SourceLocation loc;

    // Resolved type, filled in by the typechecker.
    std::optional<Type> type;

    long long int_value = 0;
    double float_value = 0.0;
    bool bool_value = false;

    // VarRef name, Binary/Unary operator spelling, Call callee,
    // MemberAccess/Swizzle/MemberOrSwizzle component text.
    std::string text;

    // Construct target type.
    Type ctor_type;

    // Operands: Binary [lhs, rhs]; Unary [operand]; Call/Construct arguments;
    // MemberAccess/Swizzle [base]; Index [base, index]; Ternary [cond, then, else].
    std::vector<ExprPtr> args;

    ExprPtr clone() const;

    static ExprPtr int_lit(long long v, SourceLocation loc = {});
    static ExprPtr float_lit(double v, SourceLocation loc = {});
    static ExprPtr bool_lit(bool v, SourceLocation loc = {});
    static ExprPtr var_ref(std::string name, SourceLocation loc = {});
    static ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc = {});
    static ExprPtr unary(std::string op, ExprPtr operand, SourceLocation loc = {});
    static ExprPtr call(std::string callee, std::vector<ExprPtr> args, SourceLocation loc = {});
    static ExprPtr construct(Type type, std::vector<ExprPtr> args, SourceLocation loc = {});
    static ExprPtr member(ExprPtr base, std::string name, SourceLocation loc = {});
    static ExprPtr index(ExprPtr base, ExprPtr idx, SourceLocation loc = {});
    static ExprPtr ternary(ExprPtr cond, ExprPtr t, ExprPtr f, SourceLocation loc = {});
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
    VarDecl,
    Assign,
    If,
    For,
    While,
    Return,
    Break,
    Continue,
    ExprStmt,
    Block,
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    StmtKind kind{};
    SourceLocation loc;

    std::string text;              // VarDecl name; Assign operator spelling
    std::optional<Type> decl_type; // VarDecl declared type
    ExprPtr lvalue;                // Assign target
    ExprPtr expr;                  // VarDecl init / Assign value / If-While-For cond / Return value / ExprStmt
    StmtPtr init;                  // For init (VarDecl or Assign)
    StmtPtr step;                  // For step (Assign or ExprStmt)
    std::vector<StmtPtr> body;     // If then / loop body / Block statements
    std::vector<StmtPtr> else_body;

    StmtPtr clone() const;

    static StmtPtr var_decl(std::string name, Type type, ExprPtr init, SourceLocation loc = {});
    static StmtPtr assign(ExprPtr lvalue, std::string op, ExprPtr value, SourceLocation loc = {});
    static StmtPtr ret(ExprPtr value, SourceLocation loc = {});
    static StmtPtr expr_stmt(ExprPtr e, SourceLocation loc = {});
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct StructMember {
    std::string name;
    Type type;
    SourceLocation loc;
};

struct StructDecl {
    std::string name;
    std::vector<StructMember> members;
    std::vector<Attribute> attributes;
    SourceLocation loc;

    const StructMember* find_member(const std::string& name) const;
};

struct Param {
    std::string name;
    Type type;
    std::vector<Attribute> attributes;
    SourceLocation loc;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    Type return_type = Type::void_();
    std::vector<StmtPtr> body;
    Stage stage = Stage::None;
    std::vector<Attribute> attributes;
    SourceLocation loc;

    // A stage-tagged function named `main` is a pipeline entry point.
    bool is_entry_point() const { return stage != Stage::None && name == "main"; }

    FunctionDecl clone() const;
};

enum class GlobalQualifier { Plain, Uniform, Const };

struct GlobalDecl {
    std::string name;
    Type type;
    GlobalQualifier qualifier = GlobalQualifier::Plain;
    ExprPtr init; // required for Const, absent otherwise
    std::vector<Attribute> attributes;
    SourceLocation loc;

    GlobalDecl clone() const;
};

struct ShaderModule {
    std::string name;
    std::vector<StructDecl> structs;
    std::vector<GlobalDecl> globals;
    std::vector<FunctionDecl> functions;

    const StructDecl* find_struct(const std::string& name) const;
    const FunctionDecl* find_function(const std::string& name) const;
    const GlobalDecl* find_global(const std::string& name) const;

    ShaderModule clone() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Structural validation: Named-type resolution, name uniqueness, array sizes,
// struct recursion, entry-point multiplicity. Expression typechecking lives in
// the semantics layer. Diagnostics are ordered by source location.
std::vector<Diagnostic> validate_program(const ShaderModule& module);

// Structural equality ignoring source locations. A Block wrapping a single
// statement compares equal to that statement, and member access compares by
// spelling regardless of member/swizzle specialization (specialization is a
// typecheck artifact, not structure).
bool ast_equal(const ShaderModule& a, const ShaderModule& b);
bool ast_equal(const Expr& a, const Expr& b);
bool ast_equal(const Stmt& a, const Stmt& b);

// Line-oriented debug dump, one node per line, indented by depth.
// Test-golden aid only, not a stability contract.
std::string dump_module(const ShaderModule& module);

} // namespace crossgl
