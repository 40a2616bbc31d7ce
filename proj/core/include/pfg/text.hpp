#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfg {

/// Error thrown by the text-format readers. Carries the 1-based line
/// number of the offending input line (0 when not line-oriented).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace text {

/// Splits input into lines, stripping '#' comments and surrounding
/// whitespace. Returns (1-based line number, content) pairs for the
/// non-empty lines only.
std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view input);

/// Minimal token cursor over one line: identifiers ([A-Za-z0-9_]+) and
/// single-character punctuation. Used by the term, grammar and forest
/// readers.
class Cursor {
public:
    Cursor(std::string_view input, std::size_t line_no)
        : input_(input), line_(line_no) {}

    bool at_end();
    /// Next token without consuming it ("" at end).
    std::string_view peek();
    std::string_view next();
    /// Consumes `expected` or throws.
    void expect(std::string_view expected);
    bool try_consume(std::string_view tok);
    std::size_t line() const { return line_; }
    [[noreturn]] void fail(const std::string& message) const;

private:
    void skip_space();
    std::string_view input_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

bool is_ident(std::string_view tok);

}  // namespace text
}  // namespace pfg
