#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fc::python {

enum class TokenKind {
    Name,
    Number,
    String,
    Op,
    Comment,
    Newline,  // end of a logical line
    NL,       // line break that does not end a logical line
    Indent,
    Dedent,
    EndMarker,
};

struct Token {
    TokenKind kind;
    std::size_t begin = 0;  // byte offsets into the source
    std::size_t end = 0;
    int line = 1;           // 1-based line of `begin`
    int end_line = 1;
    int col = 0;
    std::string_view text;  // view into the tokenized source
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& message, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Tokenizes Python source roughly the way the `tokenize` module does:
// INDENT/DEDENT are produced only for logical lines, comments and
// blank lines never change indentation, and bracketed continuation lines
// are joined. String prefixes (r, b, f, u and combinations) are accepted;
// f-string bodies are treated as opaque string content.
//
// The returned tokens reference `source`, which must outlive them.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace fc::python
