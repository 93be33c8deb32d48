#pragma once

#include <memory>
#include <optional>
#include <string>

namespace crossgl {

enum class ScalarKind { Int, Float, Bool, Void };

// The unified type language: scalars, float vectors, square float matrices,
// arrays (optionally unsized), named records, and 2D samplers.
struct Type {
    enum class Kind { Scalar, Vector, Matrix, Array, Named, Sampler2D };

    Kind kind = Kind::Scalar;
    ScalarKind scalar = ScalarKind::Void;          // Scalar kind, or vector element kind
    int dim = 0;                                   // Vector dim, or Matrix rows (= cols)
    std::shared_ptr<Type> element;                 // Array element type
    std::optional<long long> array_size;           // nullopt = unsized array
    std::string name;                              // Named record

    static Type void_() { return scalar_type(ScalarKind::Void); }
    static Type int_() { return scalar_type(ScalarKind::Int); }
    static Type float_() { return scalar_type(ScalarKind::Float); }
    static Type bool_() { return scalar_type(ScalarKind::Bool); }

    static Type scalar_type(ScalarKind k) {
        Type t;
        t.kind = Kind::Scalar;
        t.scalar = k;
        return t;
    }

    static Type vec(int dim) {
        Type t;
        t.kind = Kind::Vector;
        t.scalar = ScalarKind::Float;
        t.dim = dim;
        return t;
    }

    static Type mat(int dim) {
        Type t;
        t.kind = Kind::Matrix;
        t.scalar = ScalarKind::Float;
        t.dim = dim;
        return t;
    }

    static Type array(Type element, std::optional<long long> size) {
        Type t;
        t.kind = Kind::Array;
        t.element = std::make_shared<Type>(std::move(element));
        t.array_size = size;
        return t;
    }

    static Type named(std::string name) {
        Type t;
        t.kind = Kind::Named;
        t.name = std::move(name);
        return t;
    }

    static Type sampler2d() {
        Type t;
        t.kind = Kind::Sampler2D;
        return t;
    }

    bool is_scalar() const { return kind == Kind::Scalar; }
    bool is_void() const { return kind == Kind::Scalar && scalar == ScalarKind::Void; }
    bool is_int() const { return kind == Kind::Scalar && scalar == ScalarKind::Int; }
    bool is_float() const { return kind == Kind::Scalar && scalar == ScalarKind::Float; }
    bool is_bool() const { return kind == Kind::Scalar && scalar == ScalarKind::Bool; }
    bool is_numeric_scalar() const { return is_int() || is_float(); }
    bool is_vector() const { return kind == Kind::Vector; }
    bool is_matrix() const { return kind == Kind::Matrix; }
    bool is_array() const { return kind == Kind::Array; }
    bool is_named() const { return kind == Kind::Named; }
    bool is_sampler() const { return kind == Kind::Sampler2D; }
};

bool operator==(const Type& a, const Type& b);
inline bool operator!=(const Type& a, const Type& b) { return !(a == b); }

// CrossGL spelling of a type, used in diagnostics and the CrossGL printer.
std::string type_to_string(const Type& t);

// Shortest round-trip decimal representation with a forced decimal point
// (1 -> "1.0"), valid as a float literal in every target language.
std::string format_float(double value);

} // namespace crossgl
