#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crossgl/diagnostics.hpp"

namespace crossgl {

enum class TokenKind { Keyword, Identifier, IntLit, FloatLit, Operator, Punct, Eof };

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;
    SourceLocation loc;

    bool is(TokenKind k) const { return kind == k; }
    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

const char* token_kind_name(TokenKind k);

// CrossGL keyword set. Source frontends for other languages tokenize with
// their own sets through tokenize_with_keywords.
const std::vector<std::string>& crossgl_keywords();

// Tokenizes CrossGL source. Line and block comments and whitespace are
// skipped; the stream always ends in an EOF token. Throws LexError on an
// unrecognized character or an unterminated block comment.
std::vector<Token> tokenize(std::string_view source, const std::string& file);

std::vector<Token> tokenize_with_keywords(std::string_view source, const std::string& file,
                                          const std::vector<std::string>& keywords);

} // namespace crossgl
