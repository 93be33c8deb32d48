#include <doctest.h>

#include "crossgl/lexer.hpp"

using namespace crossgl;

TEST_CASE("tokenize shader header") {
    auto tokens = tokenize("shader ImageProcessor {", "t.cgl");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].is(TokenKind::Keyword, "shader"));
    CHECK(tokens[1].is(TokenKind::Identifier, "ImageProcessor"));
    CHECK(tokens[2].is(TokenKind::Punct, "{"));
    CHECK(tokens[3].kind == TokenKind::Eof);
}

TEST_CASE("tokenize single float literal") {
    auto tokens = tokenize("1.0", "t.cgl");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].is(TokenKind::FloatLit, "1.0"));
    CHECK(tokens[1].kind == TokenKind::Eof);
}

TEST_CASE("tokenize array declaration") {
    auto tokens = tokenize("float values[1024];", "t.cgl");
    REQUIRE(tokens.size() == 7);
    CHECK(tokens[0].is(TokenKind::Keyword, "float"));
    CHECK(tokens[1].is(TokenKind::Identifier, "values"));
    CHECK(tokens[2].is(TokenKind::Punct, "["));
    CHECK(tokens[3].is(TokenKind::IntLit, "1024"));
    CHECK(tokens[4].is(TokenKind::Punct, "]"));
    CHECK(tokens[5].is(TokenKind::Punct, ";"));
    CHECK(tokens[6].kind == TokenKind::Eof);
}

TEST_CASE("locations point at first character") {
    auto tokens = tokenize("a\n  bc", "t.cgl");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].loc.line == 1);
    CHECK(tokens[0].loc.column == 1);
    CHECK(tokens[1].loc.line == 2);
    CHECK(tokens[1].loc.column == 3);
}

TEST_CASE("comments and whitespace are skipped") {
    auto tokens = tokenize("// line\n1 /* block\nstill */ 2.5e-3", "t.cgl");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].is(TokenKind::IntLit, "1"));
    CHECK(tokens[1].is(TokenKind::FloatLit, "2.5e-3"));
}

TEST_CASE("two-character operators") {
    auto tokens = tokenize("a+=b==c&&d||!e<=f>=g!=h", "t.cgl");
    std::vector<std::string> ops;
    for (const auto& t : tokens)
        if (t.kind == TokenKind::Operator) ops.push_back(t.text);
    CHECK(ops == std::vector<std::string>{"+=", "==", "&&", "||", "!", "<=", ">=", "!="});
}

TEST_CASE("lex errors") {
    CHECK_THROWS_AS(tokenize("a $ b", "t.cgl"), LexError);
    CHECK_THROWS_AS(tokenize("/* never ends", "t.cgl"), LexError);
    CHECK_THROWS_AS(tokenize("99999999999999999999999", "t.cgl"), LexError);
}

TEST_CASE("lexer idempotence on its own output") {
    const char* source = "shader S { vertex { vec4 main(vec2 uv) { return vec4(uv.x, uv.y, "
                         "0.5, 1.0); } } }";
    auto first = tokenize(source, "t.cgl");
    std::string joined;
    for (const auto& t : first) {
        joined += t.text;
        joined += ' ';
    }
    auto second = tokenize(joined, "t.cgl");
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].kind == second[i].kind);
        CHECK(first[i].text == second[i].text);
    }
}
