#include <doctest.h>

#include "crossgl/codegen.hpp"
#include "crossgl/lexer.hpp"
#include "crossgl/parser.hpp"
#include "random_module.hpp"
#include "test_support.hpp"

using namespace crossgl;

TEST_CASE("CrossGL print/parse round trip on the ImageProcessor listing") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    std::string printed = print_crossgl(m);
    ShaderModule again = parse_ok(printed, "printed.cgl");
    CHECK(ast_equal(m, again));
}

TEST_CASE("round trip survives typechecking (member/swizzle specialization)") {
    ShaderModule m = compile_ok(kImageProcessorSource);
    ShaderModule again = parse_ok(print_crossgl(m), "printed.cgl");
    CHECK(ast_equal(m, again));
}

TEST_CASE("printer is deterministic") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    CHECK(print_crossgl(m) == print_crossgl(m));
}

TEST_CASE("property: random modules round-trip through print and parse") {
    for (uint32_t seed = 1; seed <= 60; ++seed) {
        testgen::ModuleGen gen(seed);
        ShaderModule m = gen.module();
        REQUIRE_MESSAGE(validate_program(m).empty(), "seed ", seed);
        {
            ShaderModule copy = m.clone();
            auto diags = typecheck_module(copy);
            std::string all;
            for (const auto& d : diags) all += d.str() + "\n";
            REQUIRE_MESSAGE(diags.empty(), "seed ", seed, "\n", print_crossgl(m), all);
        }
        std::string printed = print_crossgl(m);
        ShaderModule again = [&] {
            try {
                return parse_ok(printed, "gen.cgl");
            } catch (const CompileError& e) {
                FAIL("seed ", seed, ": ", e.what(), "\n", printed);
                throw;
            }
        }();
        CHECK_MESSAGE(ast_equal(m, again), "seed ", seed, "\n", printed);

        // Idempotence: printing the reparse gives identical text.
        CHECK_MESSAGE(print_crossgl(again) == printed, "seed ", seed);
    }
}

TEST_CASE("property: lexer idempotence on printed modules") {
    for (uint32_t seed = 1; seed <= 20; ++seed) {
        testgen::ModuleGen gen(seed * 7919);
        std::string printed = print_crossgl(gen.module());
        auto first = tokenize(printed, "a.cgl");
        std::string joined;
        for (const auto& t : first) {
            joined += t.text;
            joined += ' ';
        }
        auto second = tokenize(joined, "b.cgl");
        REQUIRE(first.size() == second.size());
        for (size_t i = 0; i < first.size(); ++i) CHECK(first[i].kind == second[i].kind);
    }
}

TEST_CASE("property: ast_equal is an equivalence relation on reparses") {
    for (uint32_t seed = 100; seed < 110; ++seed) {
        testgen::ModuleGen gen(seed);
        ShaderModule a = gen.module();
        ShaderModule b = parse_ok(print_crossgl(a), "b.cgl");
        ShaderModule c = parse_ok(print_crossgl(b), "c.cgl");
        CHECK(ast_equal(a, a));
        CHECK(ast_equal(a, b));
        CHECK(ast_equal(b, a));
        CHECK(ast_equal(b, c));
        CHECK(ast_equal(a, c));
    }
}

TEST_CASE("float literals survive printing exactly") {
    ShaderModule m = parse_ok("shader S { float f() { return 0.1; } "
                              "float g() { return 12345.6789; } }");
    ShaderModule again = parse_ok(print_crossgl(m));
    CHECK(ast_equal(m, again));
    CHECK(format_float(1.0) == "1.0");
    CHECK(format_float(0.5) == "0.5");
    CHECK(format_float(-2.0) == "-2.0");
    // Exponent forms keep a decimal point.
    double big = 1e20;
    std::string s = format_float(big);
    CHECK(s.find('.') != std::string::npos);
    CHECK(std::strtod(s.c_str(), nullptr) == big);
}
