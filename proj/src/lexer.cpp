#include "crossgl/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_set>

namespace crossgl {

const char* token_kind_name(TokenKind k) {
    switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLit: return "integer literal";
    case TokenKind::FloatLit: return "float literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::Eof: return "end of input";
    }
    return "?";
}

const std::vector<std::string>& crossgl_keywords() {
    static const std::vector<std::string> kw = {
        "shader", "struct", "vertex", "fragment", "compute", "uniform", "const",
        "if",     "else",   "for",    "while",    "return",  "break",   "continue",
        "true",   "false",  "void",   "int",      "float",   "bool",    "vec2",
        "vec3",   "vec4",   "mat2",   "mat3",     "mat4",    "sampler2D"};
    return kw;
}

namespace {

struct Lexer {
    std::string_view src;
    std::string file;
    const std::unordered_set<std::string>& keywords;
    size_t pos = 0;
    int line = 1;
    int column = 1;

    SourceLocation here() const { return {file, line, column}; }

    char peek(size_t off = 0) const {
        return pos + off < src.size() ? src[pos + off] : '\0';
    }

    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (peek() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                SourceLocation start = here();
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (!peek()) throw LexError(start, "unterminated block comment");
                    advance();
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    Token lex_number() {
        SourceLocation loc = here();
        size_t start = pos;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        bool is_float = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_float = true;
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            size_t look = 1;
            if (peek(1) == '+' || peek(1) == '-') look = 2;
            if (std::isdigit(static_cast<unsigned char>(peek(look)))) {
                is_float = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            }
        }
        std::string text(src.substr(start, pos - start));
        if (!is_float) {
            long long value = 0;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || p != text.data() + text.size())
                throw LexError(loc, "integer literal out of range: " + text);
        }
        return {is_float ? TokenKind::FloatLit : TokenKind::IntLit, std::move(text), loc};
    }

    Token lex_word() {
        SourceLocation loc = here();
        size_t start = pos;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        std::string text(src.substr(start, pos - start));
        TokenKind kind = keywords.count(text) ? TokenKind::Keyword : TokenKind::Identifier;
        return {kind, std::move(text), loc};
    }

    Token lex_symbol() {
        SourceLocation loc = here();
        char c = peek();
        auto two = [&](char second) { return peek(1) == second; };
        auto make = [&](TokenKind k, int len) {
            std::string text(src.substr(pos, len));
            for (int i = 0; i < len; ++i) advance();
            return Token{k, std::move(text), loc};
        };
        switch (c) {
        case '+': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '-': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '*': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '/': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '%': return make(TokenKind::Operator, 1);
        case '=': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '!': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '<': return make(TokenKind::Operator, two('=') ? 2 : 1);
        case '>': return make(TokenKind::Operator, two('=') ? 2 : 1);
        // Single & and | lex for the C-family importers; the CrossGL grammar
        // rejects them at parse time.
        case '&': return make(TokenKind::Operator, two('&') ? 2 : 1);
        case '|': return make(TokenKind::Operator, two('|') ? 2 : 1);
        case '.':
        case ',':
        case ';':
        case '(':
        case ')':
        case '[':
        case ']':
        case '{':
        case '}':
        case '?':
        case ':':
        case '@': return make(TokenKind::Punct, 1);
        default:
            throw LexError(loc, std::string("unrecognized character '") + c + "'");
        }
    }

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            skip_trivia();
            if (pos >= src.size()) {
                tokens.push_back({TokenKind::Eof, "", here()});
                return tokens;
            }
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                tokens.push_back(lex_number());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tokens.push_back(lex_word());
            } else {
                tokens.push_back(lex_symbol());
            }
        }
    }
};

} // namespace

std::vector<Token> tokenize_with_keywords(std::string_view source, const std::string& file,
                                          const std::vector<std::string>& keywords) {
    std::unordered_set<std::string> kw(keywords.begin(), keywords.end());
    Lexer lexer{source, file, kw};
    return lexer.run();
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    return tokenize_with_keywords(source, file, crossgl_keywords());
}

} // namespace crossgl
