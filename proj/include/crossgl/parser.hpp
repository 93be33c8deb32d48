#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "crossgl/ir.hpp"
#include "crossgl/lexer.hpp"

namespace crossgl {

// Recursive-descent parser over a token stream. Fails fast: the first syntax
// error raises ParseError, no recovery. The expression/statement/type layers
// are public so the source frontends for C-like languages can reuse them.
class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    const Token& peek(int off = 0) const;
    const Token& advance();
    bool check(TokenKind k, std::string_view text = {}) const;
    bool accept(TokenKind k, std::string_view text = {});
    Token expect(TokenKind k, std::string_view text, std::string_view what);
    bool at_eof() const { return peek().kind == TokenKind::Eof; }
    [[noreturn]] void fail(const std::string& expected) const;

    ShaderModule parse_shader_module();

    // Precedence, lowest to highest: ternary, ||, &&, equality, relational,
    // additive, multiplicative, unary, postfix.
    ExprPtr parse_expression();
    StmtPtr parse_statement();
    std::vector<StmtPtr> parse_brace_block();

    // A type spelling without array suffix: builtin keyword or record name.
    Type parse_type_prefix();
    // Trailing `[N]` / `[]` suffixes; outermost dimension first in source order.
    Type apply_array_suffixes(Type base);
    // True when the cursor sits on a builtin type keyword.
    bool at_builtin_type() const;
    std::vector<Attribute> parse_attributes();

  private:
    StmtPtr parse_simple_statement(); // no trailing ';' (for-init / for-step)
    StmtPtr parse_var_decl_tail(Type base_type);
    ExprPtr parse_ternary();
    ExprPtr parse_binary(int min_level);
    ExprPtr parse_unary();
    ExprPtr parse_postfix();
    ExprPtr parse_primary();
    std::vector<ExprPtr> parse_call_args();
    void parse_stage_block(ShaderModule& module, Stage stage);
    FunctionDecl parse_function(Type return_type, Token name, Stage stage,
                                std::vector<Attribute> attrs);
    std::vector<StmtPtr> parse_stmt_or_block();

    const std::vector<Token>& tokens_;
    size_t pos_ = 0;
};

// Parses a CrossGL token stream into a ShaderModule. Stage blocks are
// lowered to stage-tagged FunctionDecls; the IR has no stage-block node.
ShaderModule parse_module(const std::vector<Token>& tokens);

// Convenience: tokenize + parse.
ShaderModule parse_source(std::string_view source, const std::string& file);

} // namespace crossgl
