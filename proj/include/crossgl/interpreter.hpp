#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crossgl/ir.hpp"

namespace crossgl {

// Runtime value. Shape always matches its static type: vectors carry dim
// floats, matrices dim*dim floats in column-major order, records hold one
// value per declared member in declaration order.
struct Value {
    enum class Kind { Void, Int, Float, Bool, Vec, Mat, Array, Record };

    Kind kind = Kind::Void;
    long long i = 0;   // Int (32-bit wrapping semantics)
    double f = 0.0;    // Float
    bool b = false;
    int dim = 0;                     // Vec dim or Mat rows
    std::vector<double> elems;       // Vec (dim) or Mat (dim*dim, column-major)
    std::vector<Value> items;        // Array
    std::vector<std::pair<std::string, Value>> fields; // Record, declaration order

    static Value void_();
    static Value int_(long long v);
    static Value float_(double v);
    static Value bool_(bool v);
    static Value vec(std::vector<double> components);
    static Value mat(int dim, std::vector<double> column_major);
    static Value array(std::vector<Value> items);
    static Value record(std::vector<std::pair<std::string, Value>> fields);

    // Zero value of the given shape; records resolved through the module.
    static Value zero_of(const Type& type, const ShaderModule& module);

    Value* field(const std::string& name);
    const Value* field(const std::string& name) const;

    std::string str() const; // printable form, e.g. vec3(1.0, 0.0, 0.5)
};

bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

class EvalError : public std::runtime_error {
  public:
    enum class Kind { DivisionByZero, IndexOutOfBounds, CallDepthExceeded, StepBudgetExceeded,
                      Other };

    EvalError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

inline constexpr int kMaxCallDepth = 1024;
inline constexpr long long kStepBudget = 10'000'000;

// Bindings for the reserved compute thread-index identifiers plus the
// post-call state of every argument, so kernel effects on array parameters
// are observable.
struct EvalOptions {
    std::map<std::string, long long> compute_bindings;
};

struct EvalResult {
    Value result;
    std::vector<Value> args_after;
};

// Strict eager evaluation of a typechecked function; && and || short-circuit,
// builtins follow the semantics table, recursion is capped at depth 1024 and
// 10^7 statements per call. Compute functions require thread-index bindings.
Value eval_function(const ShaderModule& module, const std::string& name,
                    std::vector<Value> args, const EvalOptions& options = {});

EvalResult eval_function_full(const ShaderModule& module, const std::string& name,
                              std::vector<Value> args, const EvalOptions& options = {});

// Evaluates one typechecked expression against named bindings; exposed for
// unit tests.
Value eval_expression(const ShaderModule& module, const std::map<std::string, Value>& env,
                      const Expr& expr);

} // namespace crossgl
