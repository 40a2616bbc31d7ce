#include "pfg/text.hpp"

#include <cctype>

namespace pfg::text {

std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view input) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= input.size()) {
        std::size_t end = input.find('\n', start);
        std::string_view line = end == std::string_view::npos
                                    ? input.substr(start)
                                    : input.substr(start, end - start);
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        if (e > b) out.emplace_back(line_no, std::string(line.substr(b, e - b)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

// '/' is an identifier character so functor/arity names like "r/4"
// (context-free skeletons) stay single tokens.
static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/';
}

bool is_ident(std::string_view tok) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (!ident_char(c)) return false;
    return true;
}

void Cursor::skip_space() {
    while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_])))
        ++pos_;
}

bool Cursor::at_end() {
    skip_space();
    return pos_ >= input_.size();
}

std::string_view Cursor::peek() {
    skip_space();
    if (pos_ >= input_.size()) return {};
    std::size_t start = pos_;
    if (ident_char(input_[start])) {
        std::size_t end = start;
        while (end < input_.size() && ident_char(input_[end])) ++end;
        return input_.substr(start, end - start);
    }
    // "->" is one token; everything else is a single character.
    if (input_[start] == '-' && start + 1 < input_.size() && input_[start + 1] == '>')
        return input_.substr(start, 2);
    return input_.substr(start, 1);
}

std::string_view Cursor::next() {
    std::string_view tok = peek();
    pos_ += tok.size();
    return tok;
}

void Cursor::expect(std::string_view expected) {
    std::string_view tok = next();
    if (tok != expected)
        fail("expected '" + std::string(expected) + "', got '" +
             (tok.empty() ? std::string("end of line") : std::string(tok)) + "'");
}

bool Cursor::try_consume(std::string_view tok) {
    if (peek() == tok) {
        next();
        return true;
    }
    return false;
}

void Cursor::fail(const std::string& message) const {
    throw ParseError(message, line_);
}

}  // namespace pfg::text
