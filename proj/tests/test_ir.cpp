#include <doctest.h>

#include "crossgl/ir.hpp"
#include "test_support.hpp"

using namespace crossgl;

TEST_CASE("validate: unresolved struct reference") {
    ShaderModule m = parse_ok("shader S { Foo f(Foo x) { return x; } }");
    auto diags = validate_program(m);
    REQUIRE(diags.size() == 2); // parameter and return type
    CHECK(diags[0].message == "unresolved type Foo");
}

TEST_CASE("validate: ImageProcessor is clean") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    CHECK(validate_program(m).empty());
}

TEST_CASE("validate: recursive struct") {
    ShaderModule m = parse_ok("shader S { struct Node { float v; Node next; } }");
    auto diags = validate_program(m);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message == "recursive struct Node");
}

TEST_CASE("validate: indirect struct recursion") {
    ShaderModule m =
        parse_ok("shader S { struct A { B b; } struct B { A a[2]; } }");
    auto diags = validate_program(m);
    CHECK(!diags.empty());
    CHECK(diags[0].message.find("recursive struct") != std::string::npos);
}

TEST_CASE("validate: duplicate names and void members") {
    ShaderModule m = parse_ok("shader S { struct T { float x; float x; } "
                              "float T; void g() { } void g() { } }");
    auto diags = validate_program(m);
    REQUIRE(diags.size() == 3);
    CHECK(diags[0].message.find("duplicate member x") != std::string::npos);
    CHECK(diags[1].message.find("duplicate top-level name T") != std::string::npos);
    CHECK(diags[2].message.find("duplicate top-level name g") != std::string::npos);
}

TEST_CASE("validate: two vertex entry points") {
    ShaderModule m = parse_ok("shader S { vertex { vec4 main(vec4 p) { return p; } } "
                              "vertex { vec4 main(vec4 p) { return p; } } }");
    auto diags = validate_program(m);
    bool found_dup_name = false, found_dup_entry = false;
    for (const auto& d : diags) {
        if (d.message.find("duplicate top-level name") != std::string::npos)
            found_dup_name = true;
        if (d.message.find("multiple entry points") != std::string::npos)
            found_dup_entry = true;
    }
    CHECK(found_dup_name);
    CHECK(found_dup_entry);
}

TEST_CASE("validate is deterministic and location-ordered") {
    ShaderModule m = parse_ok("shader S { Foo a; Bar b; }");
    auto first = validate_program(m);
    auto second = validate_program(m);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) CHECK(first[i].message == second[i].message);
    for (size_t i = 1; i < first.size(); ++i) CHECK(!(first[i].loc < first[i - 1].loc));
}

TEST_CASE("ast_equal: reflexive on a parsed module") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    CHECK(ast_equal(m, m));
}

TEST_CASE("ast_equal: ignores source locations") {
    ShaderModule a = parse_ok(kImageProcessorSource);
    std::string padded = std::string("\n\n\n\n") + kImageProcessorSource;
    ShaderModule b = parse_ok(padded);
    CHECK(ast_equal(a, b));
    CHECK(ast_equal(b, a));
}

TEST_CASE("ast_equal: literal difference breaks equality") {
    ShaderModule a = parse_ok("shader S { float f() { return 1.0; } }");
    ShaderModule b = parse_ok("shader S { float f() { return 2.0; } }");
    CHECK(!ast_equal(a, b));
}

TEST_CASE("ast_equal: single-statement block wrapping is transparent") {
    ShaderModule a = parse_ok("shader S { float f(float x) { if (x > 0.0) x = 1.0; "
                              "return x; } }");
    ShaderModule b = parse_ok("shader S { float f(float x) { if (x > 0.0) { x = 1.0; } "
                              "return x; } }");
    CHECK(ast_equal(a, b));
}

TEST_CASE("ast_equal: transitivity across reparses") {
    ShaderModule a = parse_ok(kImageProcessorSource);
    ShaderModule b = parse_ok(kImageProcessorSource);
    ShaderModule c = parse_ok(std::string("  ") + kImageProcessorSource);
    CHECK(ast_equal(a, b));
    CHECK(ast_equal(b, c));
    CHECK(ast_equal(a, c));
}

TEST_CASE("clone produces an equal module") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    ShaderModule copy = m.clone();
    CHECK(ast_equal(m, copy));
}

TEST_CASE("dump golden for a tiny module") {
    ShaderModule m = parse_ok("shader Tiny { float half_of(float x) { return x / 2.0; } }");
    const char* expected = "module Tiny\n"
                           "  function half_of stage=none return=float\n"
                           "    param x float\n"
                           "    return\n"
                           "      binary /\n"
                           "        var-ref x\n"
                           "        float-lit 2.000000\n";
    CHECK(dump_module(m) == expected);
}
