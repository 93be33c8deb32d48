#include <doctest.h>

#include "crossgl/semantics.hpp"
#include "test_support.hpp"

using namespace crossgl;

TEST_CASE("unify_types promotion table") {
    CHECK(unify_types(Type::float_(), Type::float_(), "+") == Type::float_());
    CHECK(unify_types(Type::int_(), Type::float_(), "+") == Type::float_());
    CHECK(unify_types(Type::int_(), Type::int_(), "+") == Type::int_());
    CHECK(unify_types(Type::vec(3), Type::float_(), "*") == Type::vec(3));
    CHECK(unify_types(Type::float_(), Type::vec(3), "*") == Type::vec(3));
    CHECK(unify_types(Type::vec(3), Type::vec(3), "+") == Type::vec(3));
    CHECK(unify_types(Type::mat(4), Type::mat(4), "*") == Type::mat(4));
    CHECK(unify_types(Type::mat(4), Type::vec(4), "*") == Type::vec(4));
    CHECK(unify_types(Type::vec(4), Type::mat(4), "*") == Type::vec(4));
    CHECK(unify_types(Type::int_(), Type::int_(), "%") == Type::int_());
    CHECK(unify_types(Type::float_(), Type::float_(), "<") == Type::bool_());
    CHECK(unify_types(Type::int_(), Type::float_(), "==") == Type::bool_());
    CHECK(unify_types(Type::vec(2), Type::vec(2), "==") == Type::bool_());
    CHECK(unify_types(Type::bool_(), Type::bool_(), "&&") == Type::bool_());

    CHECK_THROWS_AS(unify_types(Type::bool_(), Type::float_(), "+"), TypeError);
    CHECK_THROWS_AS(unify_types(Type::float_(), Type::float_(), "%"), TypeError);
    CHECK_THROWS_AS(unify_types(Type::vec(2), Type::vec(3), "+"), TypeError);
    CHECK_THROWS_AS(unify_types(Type::mat(3), Type::vec(4), "*"), TypeError);
    CHECK_THROWS_AS(unify_types(Type::float_(), Type::bool_(), "&&"), TypeError);
}

TEST_CASE("unify_types is commutative where the table says so") {
    std::vector<Type> types = {Type::int_(), Type::float_(), Type::bool_(),
                               Type::vec(2), Type::vec(3),   Type::vec(4),
                               Type::mat(2), Type::mat(3),   Type::mat(4)};
    for (const std::string& op : {"+", "*", "==", "!=", "&&", "||"}) {
        for (const Type& a : types) {
            for (const Type& b : types) {
                std::optional<Type> ab, ba;
                try {
                    ab = unify_types(a, b, op);
                } catch (const TypeError&) {
                }
                try {
                    ba = unify_types(b, a, op);
                } catch (const TypeError&) {
                }
                CHECK(ab.has_value() == ba.has_value());
                if (ab && ba) CHECK(*ab == *ba);
            }
        }
    }
}

TEST_CASE("resolve_swizzle") {
    CHECK(resolve_swizzle(Type::vec(4), "xyz", {}) == Type::vec(3));
    CHECK(resolve_swizzle(Type::vec(2), "x", {}) == Type::float_());
    CHECK(resolve_swizzle(Type::vec(3), "zzz", {}) == Type::vec(3));
    CHECK_THROWS_AS(resolve_swizzle(Type::vec(2), "z", {}), TypeError);
    CHECK_THROWS_AS(resolve_swizzle(Type::vec(3), "xx", {}, /*as_write=*/true), TypeError);
    CHECK(resolve_swizzle(Type::vec(3), "xy", {}, /*as_write=*/true) == Type::vec(2));
    CHECK_THROWS_AS(resolve_swizzle(Type::vec(4), "xyzwx", {}), TypeError);
}

TEST_CASE("check_constructor") {
    CHECK(check_constructor(Type::vec(4), {Type::vec(3), Type::float_()}, {}) == Type::vec(4));
    CHECK(check_constructor(Type::vec(3), {Type::float_()}, {}) == Type::vec(3)); // splat
    CHECK(check_constructor(Type::vec(3), {Type::int_()}, {}) == Type::vec(3));
    CHECK(check_constructor(Type::float_(), {Type::int_()}, {}) == Type::float_());
    CHECK(check_constructor(Type::int_(), {Type::float_()}, {}) == Type::int_());
    CHECK(check_constructor(Type::mat(2), {Type::vec(2), Type::vec(2)}, {}) == Type::mat(2));
    CHECK_THROWS_AS(check_constructor(Type::vec(4), {Type::vec(2), Type::vec(3)}, {}),
                    TypeError);
    CHECK_THROWS_AS(check_constructor(Type::mat(3), {Type::vec(3), Type::vec(3)}, {}),
                    TypeError);
    CHECK_THROWS_AS(check_constructor(Type::bool_(), {Type::int_()}, {}), TypeError);
}

TEST_CASE("typecheck: ImageProcessor is clean and annotates types") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    REQUIRE(validate_program(m).empty());
    auto diags = typecheck_module(m);
    for (const auto& d : diags) MESSAGE(d.str());
    REQUIRE(diags.empty());

    // Fragment return expression resolves to vec4.
    const FunctionDecl& fs = m.functions[1];
    REQUIRE(fs.body[0]->kind == StmtKind::Return);
    REQUIRE(fs.body[0]->expr->type.has_value());
    CHECK(*fs.body[0]->expr->type == Type::vec(4));
}

TEST_CASE("typecheck specializes member access and swizzles") {
    ShaderModule m = compile_ok(kImageProcessorSource);
    const FunctionDecl& vs = m.functions[0];
    // output.uv = input.texCoord;
    CHECK(vs.body[1]->lvalue->kind == ExprKind::MemberAccess);
    const FunctionDecl& fs = m.functions[1];
    // return vec4(uv.x, uv.y, 0.5, 1.0);
    const Expr& ctor = *fs.body[0]->expr;
    CHECK(ctor.args[0]->kind == ExprKind::Swizzle);
}

TEST_CASE("typecheck is a fixpoint") {
    ShaderModule m = compile_ok(kImageProcessorSource);
    std::string before = dump_module(m);
    auto diags = typecheck_module(m);
    CHECK(diags.empty());
    CHECK(dump_module(m) == before);
}

TEST_CASE("typecheck: rank mismatch") {
    ShaderModule m = parse_ok("shader S { float f(vec3 v) { float x = v; return x; } }");
    auto diags = typecheck_module(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message == "cannot assign vec3 to float");
}

TEST_CASE("typecheck: missing return value") {
    ShaderModule m = parse_ok("shader S { float f() { return; } }");
    auto diags = typecheck_module(m);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message == "missing return value");
}

TEST_CASE("typecheck: not all paths return") {
    ShaderModule m = parse_ok("shader S { float f(bool b) { if (b) { return 1.0; } } }");
    auto diags = typecheck_module(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("not every path returns") != std::string::npos);

    ShaderModule ok = parse_ok("shader S { float f(bool b) { if (b) { return 1.0; } "
                               "else { return 2.0; } } }");
    CHECK(typecheck_module(ok).empty());
}

TEST_CASE("typecheck: break and continue placement") {
    ShaderModule bad = parse_ok("shader S { void f() { break; } }");
    auto diags = typecheck_module(bad);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message == "break outside of a loop");

    ShaderModule good = parse_ok("shader S { void f() { while (true) { break; } "
                                 "for (int i = 0; i < 2; i = i + 1) { continue; } } }");
    CHECK(typecheck_module(good).empty());
}

TEST_CASE("typecheck: writes to uniform and const globals are rejected") {
    ShaderModule m = parse_ok("shader S { uniform float u; const float c = 1.0; "
                              "void f() { u = 2.0; c = 3.0; } }");
    auto diags = typecheck_module(m);
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].message.find("uniform global") != std::string::npos);
    CHECK(diags[1].message.find("const global") != std::string::npos);
}

TEST_CASE("typecheck: swizzle write rules") {
    ShaderModule ok = parse_ok("shader S { void f(vec3 n) { vec4 p = vec4(n, 1.0); "
                               "p.xyz += n; } }");
    CHECK(typecheck_module(ok).empty());

    ShaderModule bad = parse_ok("shader S { void f(vec4 p) { p.xx = vec2(1.0, 2.0); } }");
    auto diags = typecheck_module(bad);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("repeats component") != std::string::npos);
}

TEST_CASE("typecheck: entry-point signatures") {
    ShaderModule bad_vs = parse_ok("shader S { vertex { vec4 main(vec4 p) { return p; } } }");
    auto diags = typecheck_module(bad_vs);
    bool saw = false;
    for (const auto& d : diags)
        if (d.message.find("vertex entry point") != std::string::npos) saw = true;
    CHECK(saw);

    ShaderModule bad_cs =
        parse_ok("shader S { struct T { float x; } compute { void k(T t) { } } }");
    diags = typecheck_module(bad_cs);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("non-bindable") != std::string::npos);
}

TEST_CASE("compute builtins resolve only in compute functions") {
    ShaderModule ok = parse_ok("shader S { compute { void k(float out_data[4]) "
                               "{ out_data[thread_id_x] = 1.0; } } }");
    CHECK(typecheck_module(ok).empty());

    ShaderModule bad = parse_ok("shader S { float f() { return float(thread_id_x); } }");
    auto diags = typecheck_module(bad);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message == "undeclared identifier thread_id_x");
}

TEST_CASE("builtin table: declared signatures typecheck, rank perturbations fail") {
    auto type_expr_source = [](const Type& t, int salt) -> std::string {
        if (t.is_int()) return std::to_string(salt);
        if (t.is_float()) return std::to_string(salt) + ".5";
        if (t.is_bool()) return "true";
        if (t.is_vector()) return "vec" + std::to_string(t.dim) + "(" +
                                  std::to_string(salt) + ".5)";
        if (t.is_sampler()) return "tex";
        return "?";
    };
    auto try_call = [&](const std::string& name, const std::vector<Type>& params) {
        std::string args;
        for (size_t i = 0; i < params.size(); ++i)
            args += (i ? ", " : "") + type_expr_source(params[i], static_cast<int>(i) + 1);
        std::string source = "shader S { uniform sampler2D tex; void f() { " + name + "(" +
                             args + "); } }";
        ShaderModule m = parse_ok(source);
        return typecheck_module(m).empty();
    };
    auto in_table = [](const std::string& name, const std::vector<Type>& params) {
        for (const auto& sig : builtin_signatures()) {
            if (sig.name != name || sig.params.size() != params.size()) continue;
            bool same = true;
            for (size_t i = 0; i < params.size(); ++i)
                if (!(sig.params[i] == params[i])) same = false;
            if (same) return true;
        }
        return false;
    };
    auto bump_rank = [](const Type& t) -> Type {
        // float -> vec2 -> vec3 -> vec4 -> float
        if (t.is_float()) return Type::vec(2);
        if (t.is_vector()) return t.dim == 4 ? Type::float_() : Type::vec(t.dim + 1);
        if (t.is_int()) return Type::vec(2);
        return t;
    };

    for (const auto& sig : builtin_signatures()) {
        CHECK_MESSAGE(try_call(sig.name, sig.params), "signature of ", sig.name);
        for (size_t i = 0; i < sig.params.size(); ++i) {
            if (sig.params[i].is_sampler() || sig.params[i].is_bool()) continue;
            std::vector<Type> perturbed = sig.params;
            perturbed[i] = bump_rank(perturbed[i]);
            if (in_table(sig.name, perturbed)) continue; // landed on another valid overload
            CHECK_MESSAGE(!try_call(sig.name, perturbed), "perturbed arg ", i, " of ",
                          sig.name);
        }
    }
}

TEST_CASE("implicit int to float conversion in arithmetic and constructors") {
    ShaderModule m = parse_ok("shader S { float f() { float x = 1; vec2 v = vec2(1, 2); "
                              "return x * 2 + v.x; } }");
    CHECK(typecheck_module(m).empty());
}

TEST_CASE("recursion is permitted") {
    ShaderModule m = parse_ok("shader S { int fact(int n) { if (n <= 1) { return 1; } "
                              "return n * fact(n - 1); } }");
    CHECK(typecheck_module(m).empty());
}
