#include "fc/python/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace fc::python {

namespace {

constexpr std::array<std::string_view, 35> kKeywords{
    "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
    "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
    "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};

constexpr std::array<std::string_view, 22> kLongOps{
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "==", "!=", "<=", ">=",
    "**",  "//",  "<<",  ">>",  "+=",  "-=", "*=", "/=", "%=", "&=", "|="};

constexpr std::array<std::string_view, 2> kMoreLongOps{"^=", "@="};

bool is_name_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_string_prefix(std::string_view p) {
    if (p.size() > 2) {
        return false;
    }
    std::string lower;
    for (char c : p) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    static constexpr std::array<std::string_view, 12> kPrefixes{
        "r", "u", "b", "f", "br", "rb", "fr", "rf", "", "", "", ""};
    return std::find(kPrefixes.begin(), kPrefixes.begin() + 8, lower) != kPrefixes.begin() + 8;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        indents_.push_back(0);
        bool at_line_start = true;
        while (pos_ < src_.size()) {
            if (at_line_start && brackets_.empty() && !continuation_) {
                if (!handle_line_start()) {
                    // Blank or comment-only line consumed.
                    continue;
                }
            }
            continuation_ = false;
            at_line_start = false;
            const unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (c == '\n') {
                emit_line_break();
                ++pos_;
                ++line_;
                line_start_ = pos_;
                at_line_start = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
                ++pos_;
                continue;
            }
            if (c == '\\') {
                std::size_t p = pos_ + 1;
                if (p < src_.size() && src_[p] == '\r') {
                    ++p;
                }
                if (p < src_.size() && src_[p] == '\n') {
                    pos_ = p + 1;
                    ++line_;
                    line_start_ = pos_;
                    continuation_ = true;
                    at_line_start = true;
                    continue;
                }
                throw SyntaxError("unexpected character after line continuation character", line_);
            }
            if (c == '#') {
                lex_comment();
                continue;
            }
            if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                    std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number();
                continue;
            }
            if (is_name_start(c)) {
                lex_name_or_string();
                continue;
            }
            if (c == '"' || c == '\'') {
                lex_string(pos_, pos_);
                continue;
            }
            lex_op();
        }
        if (!brackets_.empty()) {
            throw SyntaxError(std::string("'") + brackets_.back().ch + "' was never closed", brackets_.back().line);
        }
        if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
            tokens_.back().kind != TokenKind::NL && tokens_.back().kind != TokenKind::Dedent &&
            has_logical_content_) {
            push(TokenKind::Newline, pos_, pos_);
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            push(TokenKind::Dedent, pos_, pos_);
        }
        push(TokenKind::EndMarker, pos_, pos_);
        return std::move(tokens_);
    }

private:
    struct Bracket {
        char ch;
        int line;
    };

    void push(TokenKind kind, std::size_t b, std::size_t e, int start_line = -1) {
        Token t;
        t.kind = kind;
        t.begin = b;
        t.end = e;
        t.line = start_line < 0 ? line_ : start_line;
        t.end_line = line_;
        t.col = static_cast<int>(b >= line_start_ ? b - line_start_ : 0);
        t.text = src_.substr(b, e - b);
        tokens_.push_back(t);
    }

    // Returns false when the line was blank / comment-only and has been consumed.
    bool handle_line_start() {
        int col = 0;
        std::size_t p = pos_;
        while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\f')) {
            if (src_[p] == '\t') {
                col = (col / 8 + 1) * 8;
            } else if (src_[p] == ' ') {
                ++col;
            } else {
                col = 0;
            }
            ++p;
        }
        if (p < src_.size() && src_[p] == '\r') {
            ++p;
        }
        if (p >= src_.size()) {
            pos_ = p;
            return false;
        }
        if (src_[p] == '\n' || src_[p] == '#') {
            pos_ = p;
            if (src_[p] == '#') {
                lex_comment();
            }
            if (pos_ < src_.size() && src_[pos_] == '\r') {
                ++pos_;
            }
            if (pos_ < src_.size() && src_[pos_] == '\n') {
                push(TokenKind::NL, pos_, pos_ + 1);
                ++pos_;
                ++line_;
                line_start_ = pos_;
            }
            return false;
        }
        pos_ = p;
        if (col > indents_.back()) {
            indents_.push_back(col);
            push(TokenKind::Indent, line_start_, pos_);
        } else {
            while (col < indents_.back()) {
                indents_.pop_back();
                push(TokenKind::Dedent, pos_, pos_);
            }
            if (col != indents_.back()) {
                throw SyntaxError("unindent does not match any outer indentation level", line_);
            }
        }
        return true;
    }

    void emit_line_break() {
        if (brackets_.empty() && has_logical_content_) {
            push(TokenKind::Newline, pos_, pos_ + 1);
            has_logical_content_ = false;
        } else {
            push(TokenKind::NL, pos_, pos_ + 1);
        }
    }

    void lex_comment() {
        const std::size_t b = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            ++pos_;
        }
        std::size_t e = pos_;
        if (e > b && src_[e - 1] == '\r') {
            --e;
        }
        push(TokenKind::Comment, b, e);
    }

    void lex_number() {
        const std::size_t b = pos_;
        while (pos_ < src_.size()) {
            const unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (std::isalnum(c) || c == '_' || c == '.') {
                const bool exponent = (c == 'e' || c == 'E');
                ++pos_;
                const bool hex = (pos_ - b >= 2 && (src_[b + 1] == 'x' || src_[b + 1] == 'X'));
                if (exponent && !hex && pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                    ++pos_;
                }
                continue;
            }
            break;
        }
        has_logical_content_ = true;
        push(TokenKind::Number, b, pos_);
    }

    void lex_name_or_string() {
        const std::size_t b = pos_;
        while (pos_ < src_.size() && is_name_char(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') &&
            is_string_prefix(src_.substr(b, pos_ - b))) {
            lex_string(b, pos_);
            return;
        }
        has_logical_content_ = true;
        push(TokenKind::Name, b, pos_);
    }

    void lex_string(std::size_t token_begin, std::size_t quote_pos) {
        const int start_line = line_;
        const std::size_t start_line_begin = line_start_;
        const char q = src_[quote_pos];
        const bool triple = quote_pos + 2 < src_.size() && src_[quote_pos + 1] == q && src_[quote_pos + 2] == q;
        std::size_t p = quote_pos + (triple ? 3 : 1);
        while (true) {
            if (p >= src_.size()) {
                throw SyntaxError(triple ? "unterminated triple-quoted string literal"
                                         : "unterminated string literal",
                                  start_line);
            }
            const char c = src_[p];
            if (c == '\\') {
                if (p + 1 < src_.size() && src_[p + 1] == '\n') {
                    ++line_;
                    line_start_ = p + 2;
                }
                p += 2;
                continue;
            }
            if (c == '\n') {
                if (!triple) {
                    throw SyntaxError("unterminated string literal", start_line);
                }
                ++line_;
                line_start_ = p + 1;
                ++p;
                continue;
            }
            if (c == q) {
                if (!triple) {
                    ++p;
                    break;
                }
                if (p + 2 < src_.size() && src_[p + 1] == q && src_[p + 2] == q) {
                    p += 3;
                    break;
                }
            }
            ++p;
        }
        pos_ = p;
        has_logical_content_ = true;
        push(TokenKind::String, token_begin, pos_, start_line);
        tokens_.back().col = static_cast<int>(token_begin - start_line_begin);
    }

    void lex_op() {
        const std::size_t b = pos_;
        const auto rest = src_.substr(pos_);
        for (auto op : kLongOps) {
            if (rest.substr(0, op.size()) == op) {
                pos_ += op.size();
                has_logical_content_ = true;
                push(TokenKind::Op, b, pos_);
                return;
            }
        }
        for (auto op : kMoreLongOps) {
            if (rest.substr(0, op.size()) == op) {
                pos_ += op.size();
                has_logical_content_ = true;
                push(TokenKind::Op, b, pos_);
                return;
            }
        }
        const char c = src_[pos_];
        static constexpr std::string_view kSingle = "+-*/%@&|^~<>()[]{},:;.=!";
        if (kSingle.find(c) == std::string_view::npos) {
            throw SyntaxError(std::string("invalid character '") + c + "'", line_);
        }
        if (c == '(' || c == '[' || c == '{') {
            brackets_.push_back({c, line_});
        } else if (c == ')' || c == ']' || c == '}') {
            const char open = c == ')' ? '(' : (c == ']' ? '[' : '{');
            if (brackets_.empty()) {
                throw SyntaxError(std::string("unmatched '") + c + "'", line_);
            }
            if (brackets_.back().ch != open) {
                throw SyntaxError(std::string("closing parenthesis '") + c +
                                      "' does not match opening parenthesis '" + brackets_.back().ch + "'",
                                  line_);
            }
            brackets_.pop_back();
        }
        ++pos_;
        has_logical_content_ = true;
        push(TokenKind::Op, b, pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
    bool continuation_ = false;
    bool has_logical_content_ = false;
    std::vector<int> indents_;
    std::vector<Bracket> brackets_;
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    return Lexer(source).run();
}

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

}  // namespace fc::python
