#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fc/python/lexer.hpp"

namespace fc::python {

enum class ParamKind { Positional, VarPositional, KeywordOnly, VarKeyword };

struct Param {
    std::string name;
    std::string annotation;  // source text, empty when unannotated
    bool has_default = false;
    ParamKind kind = ParamKind::Positional;
};

struct FunctionDef {
    std::string name;
    bool is_async = false;
    bool is_generator = false;
    bool inline_body = false;  // `def f(): return 1`
    std::vector<std::string> decorators;  // decorator expressions without '@'
    std::vector<Param> params;
    std::string return_annotation;

    std::size_t decorators_begin = 0;  // first '@', or == begin
    std::size_t begin = 0;             // 'def' or 'async'
    std::size_t header_colon = 0;      // offset of the ':' closing the header
    std::size_t end = 0;               // end of the last body token
    std::size_t line_begin = 0;        // start of the physical line holding `begin`
    int line = 0;
    int end_line = 0;
    std::string indent;       // leading whitespace of the def line
    std::string body_indent;  // leading whitespace of the first body line (block bodies)

    std::size_t first_token = 0;   // 'def' / 'async'
    std::size_t colon_token = 0;
    std::size_t last_token = 0;    // last significant body token

    std::vector<std::string> scope;  // enclosing class/def names, outermost first
    int parent_class = -1;     // immediate scope is this class
    int parent_function = -1;  // immediate scope is this function

    bool has_decorator(std::string_view name) const;
};

struct ClassDef {
    std::string name;
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 0;
    std::vector<std::string> scope;
    int parent_class = -1;
    int parent_function = -1;
};

struct ImportStmt {
    std::string text;
    int line = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct LogicalLine {
    std::size_t first_token = 0;  // first significant token
    std::size_t last_token = 0;   // last significant token (comments excluded)
    std::size_t depth = 0;        // number of enclosing indented blocks
    int line = 0;
};

struct CallSite {
    std::string name;  // simple callee name (last attribute)
    std::size_t arity = 0;
    int line = 0;
    std::size_t token = 0;  // index of the callee name token
};

// Syntax-aware model of one Python source file. Not a full grammar: it checks
// tokenization, bracket balance, indentation structure, block headers and
// def/class header shapes, which is what downstream consumers rely on.
class Module {
public:
    static Module parse(std::string source);

    const std::string& source() const { return *source_; }
    const std::vector<Token>& tokens() const { return tokens_; }
    const std::vector<FunctionDef>& functions() const { return functions_; }
    const std::vector<ClassDef>& classes() const { return classes_; }
    const std::vector<LogicalLine>& lines() const { return lines_; }

    // Module-level import statements, verbatim, in file order.
    std::vector<ImportStmt> imports() const;

    // Logical lines at indentation depth zero.
    std::vector<LogicalLine> top_level_lines() const;

    std::vector<CallSite> calls_between(std::size_t first_token, std::size_t last_token) const;

    std::string_view text(std::size_t begin, std::size_t end) const {
        return std::string_view(*source_).substr(begin, end - begin);
    }

    // Offsets of string tokens spanning more than one line; a line starting
    // inside one of them is string content, not code.
    bool offset_inside_string(std::size_t offset) const;

private:
    Module() = default;

    std::shared_ptr<const std::string> source_;
    std::vector<Token> tokens_;
    std::vector<FunctionDef> functions_;
    std::vector<ClassDef> classes_;
    std::vector<LogicalLine> lines_;
    std::vector<std::pair<std::size_t, std::size_t>> multiline_strings_;

    friend class ModuleBuilder;
};

inline bool is_significant(const Token& t) {
    return t.kind == TokenKind::Name || t.kind == TokenKind::Number || t.kind == TokenKind::String ||
           t.kind == TokenKind::Op;
}

// Index of the bracket closing the one at `open` (which must be an opening
// bracket token).
std::size_t matching_bracket(const std::vector<Token>& tokens, std::size_t open);

}  // namespace fc::python
