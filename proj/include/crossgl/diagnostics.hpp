#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crossgl {

struct SourceLocation {
    std::string file;
    int line = 1;
    int column = 1;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

inline bool operator<(const SourceLocation& a, const SourceLocation& b) {
    if (a.file != b.file) return a.file < b.file;
    if (a.line != b.line) return a.line < b.line;
    return a.column < b.column;
}

enum class Severity { Error, Warning };

struct Diagnostic {
    SourceLocation loc;
    Severity severity = Severity::Error;
    std::string message;

    std::string str() const {
        return loc.str() + ": " + (severity == Severity::Error ? "error" : "warning") + ": " +
               message;
    }
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Base for all translation-time failures that carry a source position.
class CompileError : public std::runtime_error {
  public:
    CompileError(SourceLocation loc, const std::string& message)
        : std::runtime_error(loc.str() + ": error: " + message), loc_(std::move(loc)),
          message_(message) {}

    const SourceLocation& location() const { return loc_; }
    const std::string& message() const { return message_; }

  private:
    SourceLocation loc_;
    std::string message_;
};

class LexError : public CompileError {
  public:
    using CompileError::CompileError;
};

class ParseError : public CompileError {
  public:
    ParseError(SourceLocation loc, std::string expected, std::string found)
        : CompileError(std::move(loc), "expected " + expected + ", found " + found),
          expected_(std::move(expected)), found_(std::move(found)) {}

    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

  private:
    std::string expected_;
    std::string found_;
};

class TypeError : public CompileError {
  public:
    using CompileError::CompileError;
};

class UnsupportedConstruct : public CompileError {
  public:
    using CompileError::CompileError;
};

class UnsupportedType : public CompileError {
  public:
    using CompileError::CompileError;
};

class DuplicateBackend : public std::runtime_error {
  public:
    explicit DuplicateBackend(const std::string& name)
        : std::runtime_error("backend already registered: " + name) {}
};

class UnknownExtension : public std::runtime_error {
  public:
    explicit UnknownExtension(const std::string& filename)
        : std::runtime_error("unknown file extension: " + filename) {}
};

} // namespace crossgl
