#pragma once

#include <map>
#include <string>
#include <vector>

#include "crossgl/ir.hpp"

namespace crossgl {

enum class SymbolKind { Param, Local, Global, Function, Struct, Builtin };

struct Symbol {
    Type type;
    SymbolKind kind = SymbolKind::Local;
};

// Scope stack. Inner scopes shadow outer ones; lookup searches innermost
// first. Function and struct names live in the module scope only.
class SymbolTable {
  public:
    SymbolTable() { push(); }

    void push() { scopes_.emplace_back(); }
    void pop() { scopes_.pop_back(); }

    // False when the name already exists in the current scope.
    bool declare(const std::string& name, Symbol symbol) {
        return scopes_.back().emplace(name, std::move(symbol)).second;
    }

    const Symbol* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

  private:
    std::vector<std::map<std::string, Symbol>> scopes_;
};

struct BuiltinSignature {
    std::string name;
    std::vector<Type> params;
    Type result;
};

// Builtin function table: dot, cross, normalize, length, max, min, pow, sqrt,
// mix, clamp, abs, floor, sin, cos, texture.
const std::vector<BuiltinSignature>& builtin_signatures();

// Reserved thread-index identifiers, int-typed and visible only inside
// compute-stage functions: thread_id_*, block_id_*, block_dim_* for x/y/z.
const std::vector<std::string>& compute_builtin_names();
bool is_compute_builtin(const std::string& name);

// Result type of `left op right` per the promotion table: int op float
// promotes, vecN broadcasts against scalars, matN*matN / matN*vecN /
// vecN*matN are the matrix forms, comparisons yield bool, % is int-only,
// && and || want bool. Throws TypeError when no rule applies.
Type unify_types(const Type& left, const Type& right, const std::string& op);

// Swizzle result type; throws TypeError on an out-of-range component, or on
// a repeated component when the swizzle is an assignment target.
Type resolve_swizzle(const Type& base, const std::string& components,
                     const SourceLocation& loc, bool as_write = false);

// Constructor result type: vector constructors flatten components or splat a
// single scalar, scalar constructors convert int<->float, matrix constructors
// take matching column vectors. Throws TypeError on mismatch.
Type check_constructor(const Type& type, const std::vector<Type>& arg_types,
                       const SourceLocation& loc);

// Name resolution, typechecking, member/swizzle specialization, control-flow
// legality, and entry-point signature checks. On an empty diagnostic list,
// every expression node carries its resolved type. Never throws; all
// failures are diagnostics. Expects validate_program to have passed.
std::vector<Diagnostic> typecheck_module(ShaderModule& module);

} // namespace crossgl
