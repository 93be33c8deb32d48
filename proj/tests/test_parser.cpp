#include <doctest.h>

#include "crossgl/parser.hpp"
#include "test_support.hpp"

using namespace crossgl;

TEST_CASE("empty module") {
    ShaderModule m = parse_ok("shader S { }");
    CHECK(m.name == "S");
    CHECK(m.structs.empty());
    CHECK(m.functions.empty());
}

TEST_CASE("ImageProcessor listing") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    CHECK(m.name == "ImageProcessor");
    REQUIRE(m.structs.size() == 2);
    CHECK(m.structs[0].name == "VertexInput");
    CHECK(m.structs[1].name == "VertexOutput");
    REQUIRE(m.functions.size() == 2);

    const FunctionDecl& vs = m.functions[0];
    CHECK(vs.stage == Stage::Vertex);
    CHECK(vs.is_entry_point());
    REQUIRE(vs.body.size() == 4);

    // output.position = vec4(input.position, 1.0);
    const Stmt& assign = *vs.body[2];
    REQUIRE(assign.kind == StmtKind::Assign);
    const Expr& rhs = *assign.expr;
    REQUIRE(rhs.kind == ExprKind::Construct);
    CHECK(rhs.ctor_type == Type::vec(4));
    REQUIRE(rhs.args.size() == 2);
    CHECK(rhs.args[0]->kind == ExprKind::MemberOrSwizzle);
    CHECK(rhs.args[0]->text == "position");
    CHECK(rhs.args[0]->args[0]->kind == ExprKind::VarRef);
    CHECK(rhs.args[0]->args[0]->text == "input");
    CHECK(rhs.args[1]->kind == ExprKind::FloatLit);
    CHECK(rhs.args[1]->float_value == 1.0);
    CHECK(vs.body[3]->kind == StmtKind::Return);

    const FunctionDecl& fs = m.functions[1];
    CHECK(fs.stage == Stage::Fragment);
    REQUIRE(fs.params.size() == 1);
    CHECK(fs.params[0].type == Type::vec(2));
}

TEST_CASE("missing brace is a parse error") {
    CHECK_THROWS_AS(parse_ok("shader S { struct T { float x; }"), ParseError);
    try {
        parse_ok("shader S { struct T { float x; }");
    } catch (const ParseError& e) {
        CHECK(e.expected() == "\"}\"");
        CHECK(e.found() == "end of input");
    }
}

TEST_CASE("precedence: a + b * c") {
    ShaderModule m = parse_ok("shader S { float f(float a, float b, float c) "
                              "{ return a + b * c; } }");
    const Expr& e = *m.functions[0].body[0]->expr;
    REQUIRE(e.kind == ExprKind::Binary);
    CHECK(e.text == "+");
    CHECK(e.args[0]->kind == ExprKind::VarRef);
    REQUIRE(e.args[1]->kind == ExprKind::Binary);
    CHECK(e.args[1]->text == "*");
}

TEST_CASE("precedence: -a.x is unary over postfix") {
    ShaderModule m = parse_ok("shader S { float f(vec2 a) { return -a.x; } }");
    const Expr& e = *m.functions[0].body[0]->expr;
    REQUIRE(e.kind == ExprKind::Unary);
    CHECK(e.text == "-");
    CHECK(e.args[0]->kind == ExprKind::MemberOrSwizzle);
}

TEST_CASE("ternary and logic precedence") {
    ShaderModule m = parse_ok("shader S { float f(bool a, bool b, float x) "
                              "{ return a || b ? x : x + 1.0; } }");
    const Expr& e = *m.functions[0].body[0]->expr;
    REQUIRE(e.kind == ExprKind::Ternary);
    CHECK(e.args[0]->kind == ExprKind::Binary);
    CHECK(e.args[0]->text == "||");
}

TEST_CASE("for loop with declaration init") {
    ShaderModule m = parse_ok(
        "shader S { float f() { float s = 0.0; for (int i = 0; i < 4; i = i + 1) "
        "{ s = s + 1.0; } return s; } }");
    const Stmt& loop = *m.functions[0].body[1];
    REQUIRE(loop.kind == StmtKind::For);
    CHECK(loop.init->kind == StmtKind::VarDecl);
    CHECK(loop.expr->kind == ExprKind::Binary);
    CHECK(loop.step->kind == StmtKind::Assign);
}

TEST_CASE("unbraced single-statement if bodies") {
    ShaderModule m = parse_ok("shader S { float f(float x) { if (x > 0.0) x = 1.0; "
                              "else x = 2.0; return x; } }");
    const Stmt& branch = *m.functions[0].body[0];
    REQUIRE(branch.kind == StmtKind::If);
    CHECK(branch.body.size() == 1);
    CHECK(branch.else_body.size() == 1);
}

TEST_CASE("attributes are recorded") {
    ShaderModule m = parse_ok("shader S { compute { @workgroup_size(8, 8, 1) "
                              "void run(float data[64]) { data[0] = 1.0; } } }");
    const FunctionDecl& f = m.functions[0];
    CHECK(f.stage == Stage::Compute);
    const Attribute* wg = find_attribute(f.attributes, "workgroup_size");
    REQUIRE(wg != nullptr);
    REQUIRE(wg->args.size() == 3);
    CHECK(wg->args[0].int_value == 8);
    CHECK(wg->args[2].int_value == 1);
}

TEST_CASE("uniforms inside stage blocks are hoisted to module scope") {
    ShaderModule m = parse_ok("shader S { struct Scene { float t; } "
                              "vertex { uniform Scene scene; "
                              "vec4 main(vec4 p) { return p; } } }");
    REQUIRE(m.globals.size() == 1);
    CHECK(m.globals[0].name == "scene");
    CHECK(m.globals[0].qualifier == GlobalQualifier::Uniform);
    CHECK(m.globals[0].type == Type::named("Scene"));
}

TEST_CASE("global declarations") {
    ShaderModule m = parse_ok("shader S { const float PI = 3.14159; float buf[8]; "
                              "uniform sampler2D tex; }");
    REQUIRE(m.globals.size() == 3);
    CHECK(m.globals[0].qualifier == GlobalQualifier::Const);
    REQUIRE(m.globals[0].init);
    CHECK(m.globals[1].qualifier == GlobalQualifier::Plain);
    CHECK(m.globals[1].type.is_array());
    CHECK(m.globals[2].type.is_sampler());
}

TEST_CASE("nested array declarations") {
    ShaderModule m = parse_ok("shader S { float f() { float grid[4][2]; "
                              "grid[0][1] = 3.0; return grid[0][1]; } }");
    const Stmt& decl = *m.functions[0].body[0];
    const Type& t = *decl.decl_type;
    REQUIRE(t.is_array());
    CHECK(*t.array_size == 4);
    REQUIRE(t.element->is_array());
    CHECK(*t.element->array_size == 2);
    CHECK(t.element->element->is_float());
}

TEST_CASE("every parsed node carries a positive location") {
    ShaderModule m = parse_ok(kImageProcessorSource);
    for (const auto& f : m.functions) {
        CHECK(f.loc.line >= 1);
        CHECK(f.loc.column >= 1);
        for (const auto& s : f.body) {
            CHECK(s->loc.line >= 1);
            CHECK(s->loc.column >= 1);
        }
    }
}

TEST_CASE("constructor call vs declaration disambiguation") {
    ShaderModule m = parse_ok("shader S { vec3 f() { vec3 v = vec3(1.0); vec3(2.0); "
                              "return v; } }");
    CHECK(m.functions[0].body[0]->kind == StmtKind::VarDecl);
    CHECK(m.functions[0].body[1]->kind == StmtKind::ExprStmt);
}
