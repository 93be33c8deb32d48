#include "crossgl/parser.hpp"

#include <cstdlib>

namespace crossgl {

namespace {

std::string describe(const Token& t) {
    if (t.kind == TokenKind::Eof) return "end of input";
    return "'" + t.text + "'";
}

bool is_assign_op(const Token& t) {
    return t.kind == TokenKind::Operator &&
           (t.text == "=" || t.text == "+=" || t.text == "-=" || t.text == "*=" ||
            t.text == "/=");
}

bool is_lvalue_shape(const Expr& e) {
    switch (e.kind) {
    case ExprKind::VarRef: return true;
    case ExprKind::MemberAccess:
    case ExprKind::Swizzle:
    case ExprKind::MemberOrSwizzle: return is_lvalue_shape(*e.args[0]);
    case ExprKind::Index: return is_lvalue_shape(*e.args[0]);
    default: return false;
    }
}

} // namespace

const Token& Parser::peek(int off) const {
    size_t i = pos_ + static_cast<size_t>(off);
    if (i >= tokens_.size()) i = tokens_.size() - 1; // EOF token
    return tokens_[i];
}

const Token& Parser::advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

bool Parser::check(TokenKind k, std::string_view text) const {
    const Token& t = peek();
    return t.kind == k && (text.empty() || t.text == text);
}

bool Parser::accept(TokenKind k, std::string_view text) {
    if (!check(k, text)) return false;
    advance();
    return true;
}

Token Parser::expect(TokenKind k, std::string_view text, std::string_view what) {
    if (!check(k, text)) {
        std::string expected = what.empty() ? std::string(text) : std::string(what);
        throw ParseError(peek().loc, "\"" + expected + "\"", describe(peek()));
    }
    return advance();
}

void Parser::fail(const std::string& expected) const {
    throw ParseError(peek().loc, expected, describe(peek()));
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

bool Parser::at_builtin_type() const {
    if (!check(TokenKind::Keyword)) return false;
    const std::string& t = peek().text;
    return t == "void" || t == "int" || t == "float" || t == "bool" || t == "vec2" ||
           t == "vec3" || t == "vec4" || t == "mat2" || t == "mat3" || t == "mat4" ||
           t == "sampler2D";
}

Type Parser::parse_type_prefix() {
    if (at_builtin_type()) {
        std::string t = advance().text;
        if (t == "void") return Type::void_();
        if (t == "int") return Type::int_();
        if (t == "float") return Type::float_();
        if (t == "bool") return Type::bool_();
        if (t == "vec2") return Type::vec(2);
        if (t == "vec3") return Type::vec(3);
        if (t == "vec4") return Type::vec(4);
        if (t == "mat2") return Type::mat(2);
        if (t == "mat3") return Type::mat(3);
        if (t == "mat4") return Type::mat(4);
        return Type::sampler2d();
    }
    if (check(TokenKind::Identifier)) return Type::named(advance().text);
    fail("a type");
}

Type Parser::apply_array_suffixes(Type base) {
    // `float a[4][2]` reads as an array of 4 arrays of 2 floats.
    std::vector<std::optional<long long>> sizes;
    while (accept(TokenKind::Punct, "[")) {
        if (accept(TokenKind::Punct, "]")) {
            sizes.push_back(std::nullopt);
            continue;
        }
        Token n = expect(TokenKind::IntLit, {}, "array size");
        sizes.push_back(std::strtoll(n.text.c_str(), nullptr, 10));
        expect(TokenKind::Punct, "]", "]");
    }
    for (auto it = sizes.rbegin(); it != sizes.rend(); ++it)
        base = Type::array(std::move(base), *it);
    return base;
}

// ---------------------------------------------------------------------------
// Attributes: @name or @name(arg, ...) immediately before a declaration
// ---------------------------------------------------------------------------

std::vector<Attribute> Parser::parse_attributes() {
    std::vector<Attribute> attrs;
    while (accept(TokenKind::Punct, "@")) {
        Attribute a;
        a.name = expect(TokenKind::Identifier, {}, "attribute name").text;
        if (accept(TokenKind::Punct, "(")) {
            if (!check(TokenKind::Punct, ")")) {
                do {
                    if (check(TokenKind::IntLit)) {
                        a.args.push_back(
                            AttrArg::integer(std::strtoll(advance().text.c_str(), nullptr, 10)));
                    } else if (check(TokenKind::Identifier)) {
                        a.args.push_back(AttrArg::ident(advance().text));
                    } else {
                        fail("an attribute argument");
                    }
                } while (accept(TokenKind::Punct, ","));
            }
            expect(TokenKind::Punct, ")", ")");
        }
        attrs.push_back(std::move(a));
    }
    return attrs;
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

ExprPtr Parser::parse_expression() { return parse_ternary(); }

ExprPtr Parser::parse_ternary() {
    ExprPtr cond = parse_binary(0);
    if (!accept(TokenKind::Punct, "?")) return cond;
    SourceLocation loc = cond->loc;
    ExprPtr then = parse_expression();
    expect(TokenKind::Punct, ":", ":");
    ExprPtr otherwise = parse_ternary();
    return Expr::ternary(std::move(cond), std::move(then), std::move(otherwise), loc);
}

namespace {
// Binary precedence levels, lowest first.
const std::vector<std::vector<std::string>> kBinaryLevels = {
    {"||"}, {"&&"}, {"==", "!="}, {"<", "<=", ">", ">="}, {"+", "-"}, {"*", "/", "%"}};
} // namespace

ExprPtr Parser::parse_binary(int min_level) {
    if (min_level >= static_cast<int>(kBinaryLevels.size())) return parse_unary();
    ExprPtr lhs = parse_binary(min_level + 1);
    for (;;) {
        bool matched = false;
        for (const std::string& op : kBinaryLevels[min_level]) {
            if (check(TokenKind::Operator, op)) {
                SourceLocation loc = peek().loc;
                advance();
                ExprPtr rhs = parse_binary(min_level + 1);
                lhs = Expr::binary(op, std::move(lhs), std::move(rhs), loc);
                matched = true;
                break;
            }
        }
        if (!matched) return lhs;
    }
}

ExprPtr Parser::parse_unary() {
    if (check(TokenKind::Operator, "-") || check(TokenKind::Operator, "!")) {
        Token op = advance();
        return Expr::unary(op.text, parse_unary(), op.loc);
    }
    return parse_postfix();
}

ExprPtr Parser::parse_postfix() {
    ExprPtr e = parse_primary();
    for (;;) {
        if (accept(TokenKind::Punct, ".")) {
            Token member = expect(TokenKind::Identifier, {}, "member name");
            e = Expr::member(std::move(e), member.text, member.loc);
        } else if (check(TokenKind::Punct, "[")) {
            SourceLocation loc = advance().loc;
            ExprPtr idx = parse_expression();
            expect(TokenKind::Punct, "]", "]");
            e = Expr::index(std::move(e), std::move(idx), loc);
        } else {
            return e;
        }
    }
}

std::vector<ExprPtr> Parser::parse_call_args() {
    std::vector<ExprPtr> args;
    expect(TokenKind::Punct, "(", "(");
    if (!check(TokenKind::Punct, ")")) {
        do {
            args.push_back(parse_expression());
        } while (accept(TokenKind::Punct, ","));
    }
    expect(TokenKind::Punct, ")", ")");
    return args;
}

ExprPtr Parser::parse_primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::IntLit) {
        advance();
        return Expr::int_lit(std::strtoll(t.text.c_str(), nullptr, 10), t.loc);
    }
    if (t.kind == TokenKind::FloatLit) {
        advance();
        return Expr::float_lit(std::strtod(t.text.c_str(), nullptr), t.loc);
    }
    if (t.is(TokenKind::Keyword, "true") || t.is(TokenKind::Keyword, "false")) {
        advance();
        return Expr::bool_lit(t.text == "true", t.loc);
    }
    if (accept(TokenKind::Punct, "(")) {
        ExprPtr inner = parse_expression();
        expect(TokenKind::Punct, ")", ")");
        return inner;
    }
    if (at_builtin_type()) {
        SourceLocation loc = t.loc;
        Type type = parse_type_prefix();
        if (type.is_void()) throw ParseError(loc, "a constructible type", "'void'");
        return Expr::construct(std::move(type), parse_call_args(), loc);
    }
    if (t.kind == TokenKind::Identifier) {
        advance();
        if (check(TokenKind::Punct, "("))
            return Expr::call(t.text, parse_call_args(), t.loc);
        return Expr::var_ref(t.text, t.loc);
    }
    fail("an expression");
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

std::vector<StmtPtr> Parser::parse_brace_block() {
    expect(TokenKind::Punct, "{", "{");
    std::vector<StmtPtr> stmts;
    while (!check(TokenKind::Punct, "}")) {
        if (at_eof()) fail("\"}\"");
        stmts.push_back(parse_statement());
    }
    advance();
    return stmts;
}

std::vector<StmtPtr> Parser::parse_stmt_or_block() {
    if (check(TokenKind::Punct, "{")) return parse_brace_block();
    std::vector<StmtPtr> one;
    one.push_back(parse_statement());
    return one;
}

StmtPtr Parser::parse_var_decl_tail(Type base_type) {
    Token name = expect(TokenKind::Identifier, {}, "variable name");
    Type type = apply_array_suffixes(std::move(base_type));
    ExprPtr init;
    if (accept(TokenKind::Operator, "=")) init = parse_expression();
    return Stmt::var_decl(name.text, std::move(type), std::move(init), name.loc);
}

StmtPtr Parser::parse_simple_statement() {
    // A builtin type keyword followed by anything but '(' starts a declaration;
    // `vec3(...)` is a constructor expression. `Name ident` is a record-typed
    // declaration, anything else starting with an identifier is an expression.
    bool is_decl = (at_builtin_type() && !peek(1).is(TokenKind::Punct, "(")) ||
                   (check(TokenKind::Identifier) && peek(1).kind == TokenKind::Identifier);
    if (is_decl) return parse_var_decl_tail(parse_type_prefix());

    ExprPtr e = parse_expression();
    if (is_assign_op(peek())) {
        Token op = advance();
        if (!is_lvalue_shape(*e))
            throw ParseError(e->loc, "an assignable expression", "'" + op.text + "' target");
        ExprPtr value = parse_expression();
        return Stmt::assign(std::move(e), op.text, std::move(value), op.loc);
    }
    SourceLocation loc = e->loc;
    return Stmt::expr_stmt(std::move(e), loc);
}

StmtPtr Parser::parse_statement() {
    const Token& t = peek();
    if (t.is(TokenKind::Punct, "{")) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Block;
        s->loc = t.loc;
        s->body = parse_brace_block();
        return s;
    }
    if (t.is(TokenKind::Keyword, "if")) {
        SourceLocation loc = advance().loc;
        expect(TokenKind::Punct, "(", "(");
        ExprPtr cond = parse_expression();
        expect(TokenKind::Punct, ")", ")");
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::If;
        s->loc = loc;
        s->expr = std::move(cond);
        s->body = parse_stmt_or_block();
        if (accept(TokenKind::Keyword, "else")) s->else_body = parse_stmt_or_block();
        return s;
    }
    if (t.is(TokenKind::Keyword, "for")) {
        SourceLocation loc = advance().loc;
        expect(TokenKind::Punct, "(", "(");
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::For;
        s->loc = loc;
        if (!check(TokenKind::Punct, ";")) s->init = parse_simple_statement();
        expect(TokenKind::Punct, ";", ";");
        if (!check(TokenKind::Punct, ";")) s->expr = parse_expression();
        expect(TokenKind::Punct, ";", ";");
        if (!check(TokenKind::Punct, ")")) s->step = parse_simple_statement();
        expect(TokenKind::Punct, ")", ")");
        s->body = parse_stmt_or_block();
        return s;
    }
    if (t.is(TokenKind::Keyword, "while")) {
        SourceLocation loc = advance().loc;
        expect(TokenKind::Punct, "(", "(");
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::While;
        s->loc = loc;
        s->expr = parse_expression();
        expect(TokenKind::Punct, ")", ")");
        s->body = parse_stmt_or_block();
        return s;
    }
    if (t.is(TokenKind::Keyword, "return")) {
        SourceLocation loc = advance().loc;
        ExprPtr value;
        if (!check(TokenKind::Punct, ";")) value = parse_expression();
        expect(TokenKind::Punct, ";", ";");
        return Stmt::ret(std::move(value), loc);
    }
    if (t.is(TokenKind::Keyword, "break") || t.is(TokenKind::Keyword, "continue")) {
        SourceLocation loc = advance().loc;
        auto s = std::make_unique<Stmt>();
        s->kind = t.text == "break" ? StmtKind::Break : StmtKind::Continue;
        s->loc = loc;
        expect(TokenKind::Punct, ";", ";");
        return s;
    }
    StmtPtr s = parse_simple_statement();
    expect(TokenKind::Punct, ";", ";");
    return s;
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

FunctionDecl Parser::parse_function(Type return_type, Token name, Stage stage,
                                    std::vector<Attribute> attrs) {
    FunctionDecl f;
    f.name = name.text;
    f.loc = name.loc;
    f.return_type = std::move(return_type);
    f.stage = stage;
    f.attributes = std::move(attrs);
    expect(TokenKind::Punct, "(", "(");
    if (!check(TokenKind::Punct, ")")) {
        do {
            Param p;
            p.attributes = parse_attributes();
            Type base = parse_type_prefix();
            Token pname = expect(TokenKind::Identifier, {}, "parameter name");
            p.name = pname.text;
            p.loc = pname.loc;
            p.type = apply_array_suffixes(std::move(base));
            f.params.push_back(std::move(p));
        } while (accept(TokenKind::Punct, ","));
    }
    expect(TokenKind::Punct, ")", ")");
    f.body = parse_brace_block();
    return f;
}

void Parser::parse_stage_block(ShaderModule& module, Stage stage) {
    expect(TokenKind::Punct, "{", "{");
    while (!check(TokenKind::Punct, "}")) {
        if (at_eof()) fail("\"}\"");
        std::vector<Attribute> attrs = parse_attributes();
        // Stage blocks hold functions and may also declare uniforms, which are
        // hoisted to module scope.
        if (check(TokenKind::Keyword, "uniform") || check(TokenKind::Keyword, "const")) {
            GlobalDecl g;
            g.qualifier = advance().text == "uniform" ? GlobalQualifier::Uniform
                                                      : GlobalQualifier::Const;
            Type base = parse_type_prefix();
            Token name = expect(TokenKind::Identifier, {}, "global name");
            g.name = name.text;
            g.loc = name.loc;
            g.type = apply_array_suffixes(std::move(base));
            if (accept(TokenKind::Operator, "=")) g.init = parse_expression();
            expect(TokenKind::Punct, ";", ";");
            g.attributes = std::move(attrs);
            module.globals.push_back(std::move(g));
            continue;
        }
        Type return_type = parse_type_prefix();
        Token name = expect(TokenKind::Identifier, {}, "function name");
        module.functions.push_back(
            parse_function(std::move(return_type), name, stage, std::move(attrs)));
    }
    advance();
}

ShaderModule Parser::parse_shader_module() {
    ShaderModule module;
    expect(TokenKind::Keyword, "shader", "shader");
    module.name = expect(TokenKind::Identifier, {}, "shader name").text;
    expect(TokenKind::Punct, "{", "{");
    while (!check(TokenKind::Punct, "}")) {
        if (at_eof()) fail("\"}\"");
        std::vector<Attribute> attrs = parse_attributes();
        if (accept(TokenKind::Keyword, "struct")) {
            StructDecl s;
            Token name = expect(TokenKind::Identifier, {}, "struct name");
            s.name = name.text;
            s.loc = name.loc;
            s.attributes = std::move(attrs);
            expect(TokenKind::Punct, "{", "{");
            while (!check(TokenKind::Punct, "}")) {
                if (at_eof()) fail("\"}\"");
                StructMember m;
                Type base = parse_type_prefix();
                Token mname = expect(TokenKind::Identifier, {}, "member name");
                m.name = mname.text;
                m.loc = mname.loc;
                m.type = apply_array_suffixes(std::move(base));
                expect(TokenKind::Punct, ";", ";");
                s.members.push_back(std::move(m));
            }
            advance();
            accept(TokenKind::Punct, ";"); // tolerated, not required
            module.structs.push_back(std::move(s));
            continue;
        }
        if (check(TokenKind::Keyword, "vertex") || check(TokenKind::Keyword, "fragment") ||
            check(TokenKind::Keyword, "compute")) {
            std::string kw = advance().text;
            Stage stage = kw == "vertex"     ? Stage::Vertex
                          : kw == "fragment" ? Stage::Fragment
                                             : Stage::Compute;
            parse_stage_block(module, stage);
            continue;
        }
        if (check(TokenKind::Keyword, "uniform") || check(TokenKind::Keyword, "const")) {
            GlobalDecl g;
            g.qualifier = advance().text == "uniform" ? GlobalQualifier::Uniform
                                                      : GlobalQualifier::Const;
            Type base = parse_type_prefix();
            Token name = expect(TokenKind::Identifier, {}, "global name");
            g.name = name.text;
            g.loc = name.loc;
            g.type = apply_array_suffixes(std::move(base));
            if (accept(TokenKind::Operator, "=")) g.init = parse_expression();
            expect(TokenKind::Punct, ";", ";");
            g.attributes = std::move(attrs);
            module.globals.push_back(std::move(g));
            continue;
        }
        // Remaining forms: `Type name;` (plain global) or `Type name(...)` (function).
        Type base = parse_type_prefix();
        Token name = expect(TokenKind::Identifier, {}, "a name");
        if (check(TokenKind::Punct, "(")) {
            module.functions.push_back(
                parse_function(std::move(base), name, Stage::None, std::move(attrs)));
        } else {
            GlobalDecl g;
            g.name = name.text;
            g.loc = name.loc;
            g.type = apply_array_suffixes(std::move(base));
            if (accept(TokenKind::Operator, "=")) g.init = parse_expression();
            expect(TokenKind::Punct, ";", ";");
            g.attributes = std::move(attrs);
            module.globals.push_back(std::move(g));
        }
    }
    advance();
    if (!at_eof()) fail("end of input");
    return module;
}

ShaderModule parse_module(const std::vector<Token>& tokens) {
    Parser p(tokens);
    return p.parse_shader_module();
}

ShaderModule parse_source(std::string_view source, const std::string& file) {
    return parse_module(tokenize(source, file));
}

} // namespace crossgl
