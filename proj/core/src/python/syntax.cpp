#include "fc/python/syntax.hpp"

#include <algorithm>
#include <array>

#include "fc/util/text.hpp"

namespace fc::python {

bool FunctionDef::has_decorator(std::string_view name) const {
    return std::any_of(decorators.begin(), decorators.end(), [&](const std::string& d) {
        return d == name || (d.size() > name.size() && d.compare(d.size() - name.size() - 1, std::string::npos,
                                                                 "." + std::string(name)) == 0);
    });
}

std::size_t matching_bracket(const std::vector<Token>& tokens, std::size_t open) {
    int depth = 0;
    for (std::size_t k = open; k < tokens.size(); ++k) {
        const auto& t = tokens[k];
        if (t.kind != TokenKind::Op) {
            continue;
        }
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            ++depth;
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            if (--depth == 0) {
                return k;
            }
        }
    }
    throw SyntaxError("unbalanced brackets", tokens[open].line);
}

namespace {

bool is_op(const Token& t, std::string_view op) {
    return t.kind == TokenKind::Op && t.text == op;
}

bool is_name(const Token& t, std::string_view name) {
    return t.kind == TokenKind::Name && t.text == name;
}

constexpr std::array<std::string_view, 12> kCompoundKeywords{
    "if", "elif", "else", "for", "while", "try", "except", "finally", "with", "def", "class", "async"};

bool is_compound_keyword(const Token& t) {
    return t.kind == TokenKind::Name &&
           std::find(kCompoundKeywords.begin(), kCompoundKeywords.end(), t.text) != kCompoundKeywords.end();
}

}  // namespace

class ModuleBuilder {
public:
    explicit ModuleBuilder(Module& m) : m_(m) {}

    void build() {
        const auto& toks = m_.tokens_;
        std::size_t i = 0;
        while (i < toks.size() && toks[i].kind != TokenKind::EndMarker) {
            const auto& t = toks[i];
            if (t.kind == TokenKind::NL || t.kind == TokenKind::Comment || t.kind == TokenKind::Newline) {
                ++i;
                continue;
            }
            if (t.kind == TokenKind::Indent) {
                if (!pending_) {
                    throw SyntaxError("unexpected indent", t.line);
                }
                Block b = *pending_;
                b.body_first = i + 1;
                if (b.kind == Block::Kind::Def) {
                    auto& fn = m_.functions_[static_cast<std::size_t>(b.index)];
                    const auto& first = toks[i + 1];
                    fn.body_indent = std::string(m_.text(line_start(first.begin), first.begin));
                }
                stack_.push_back(b);
                pending_.reset();
                ++i;
                continue;
            }
            if (pending_) {
                throw SyntaxError("expected an indented block", t.line);
            }
            if (t.kind == TokenKind::Dedent) {
                pop_block();
                ++i;
                continue;
            }
            std::size_t j = i;
            while (toks[j].kind != TokenKind::Newline && toks[j].kind != TokenKind::EndMarker) {
                ++j;
            }
            process_line(i, j);
            i = j + 1;
        }
        if (pending_) {
            throw SyntaxError("expected an indented block", toks.back().line);
        }
        while (!stack_.empty()) {
            pop_block();
        }
        compute_generators();
        for (const auto& t : toks) {
            if (t.kind == TokenKind::String && t.end_line > t.line) {
                m_.multiline_strings_.emplace_back(t.begin, t.end);
            }
        }
    }

private:
    struct Block {
        enum class Kind { Def, Class, Other } kind = Kind::Other;
        int index = -1;
        std::size_t body_first = 0;
        std::size_t last_token = 0;
        bool has_line = false;
    };

    std::size_t line_start(std::size_t offset) const {
        const auto& src = m_.source();
        const auto nl = src.rfind('\n', offset == 0 ? 0 : offset - 1);
        if (offset == 0 || nl == std::string::npos) {
            return 0;
        }
        return nl + 1;
    }

    std::vector<std::string> current_scope() const {
        std::vector<std::string> scope;
        for (const auto& b : stack_) {
            if (b.kind == Block::Kind::Def) {
                scope.push_back(m_.functions_[static_cast<std::size_t>(b.index)].name);
            } else if (b.kind == Block::Kind::Class) {
                scope.push_back(m_.classes_[static_cast<std::size_t>(b.index)].name);
            }
        }
        return scope;
    }

    void immediate_parents(int& parent_class, int& parent_function) const {
        parent_class = -1;
        parent_function = -1;
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            if (it->kind == Block::Kind::Def) {
                parent_function = it->index;
                return;
            }
            if (it->kind == Block::Kind::Class) {
                parent_class = it->index;
                return;
            }
        }
    }

    void pop_block() {
        if (stack_.empty()) {
            return;
        }
        Block b = stack_.back();
        stack_.pop_back();
        if (!b.has_line) {
            return;
        }
        const auto& last = m_.tokens_[b.last_token];
        if (b.kind == Block::Kind::Def) {
            auto& fn = m_.functions_[static_cast<std::size_t>(b.index)];
            fn.end = last.end;
            fn.end_line = last.end_line;
            fn.last_token = b.last_token;
        } else if (b.kind == Block::Kind::Class) {
            auto& cls = m_.classes_[static_cast<std::size_t>(b.index)];
            cls.end = last.end;
        }
        if (!stack_.empty()) {
            stack_.back().last_token = std::max(stack_.back().last_token, b.last_token);
            stack_.back().has_line = true;
        }
    }

    void process_line(std::size_t from, std::size_t newline) {
        const auto& toks = m_.tokens_;
        std::vector<std::size_t> sig;
        for (std::size_t k = from; k < newline; ++k) {
            if (is_significant(toks[k])) {
                sig.push_back(k);
            }
        }
        if (sig.empty()) {
            return;
        }
        LogicalLine ll;
        ll.first_token = sig.front();
        ll.last_token = sig.back();
        ll.depth = stack_.size();
        ll.line = toks[sig.front()].line;
        m_.lines_.push_back(ll);
        for (auto& b : stack_) {
            b.last_token = sig.back();
            b.has_line = true;
        }

        const auto& head = toks[sig.front()];
        if (is_op(head, "@")) {
            if (!decorators_begin_) {
                decorators_begin_ = head.begin;
            }
            decorators_.emplace_back(m_.text(toks[sig[1 < sig.size() ? 1 : 0]].begin, toks[sig.back()].end));
            if (sig.size() < 2) {
                throw SyntaxError("invalid decorator", head.line);
            }
            return;
        }

        const bool ends_with_colon = is_op(toks[sig.back()], ":");
        if (is_name(head, "def") || (is_name(head, "async") && sig.size() > 1 && is_name(toks[sig[1]], "def"))) {
            parse_def(sig, ends_with_colon);
        } else if (is_name(head, "class")) {
            parse_class(sig, ends_with_colon);
        } else {
            if (!decorators_.empty()) {
                throw SyntaxError("decorator must precede a def or class", head.line);
            }
            if (is_compound_keyword(head) && !has_depth0_colon(sig)) {
                throw SyntaxError("expected ':'", head.line);
            }
            if (ends_with_colon) {
                if (!is_compound_keyword(head) && !is_name(head, "match") && !is_name(head, "case")) {
                    throw SyntaxError("invalid syntax", toks[sig.back()].line);
                }
                pending_ = Block{Block::Kind::Other, -1, 0, 0, false};
            }
        }
    }

    bool has_depth0_colon(const std::vector<std::size_t>& sig) const {
        int depth = 0;
        for (auto k : sig) {
            const auto& t = m_.tokens_[k];
            if (t.kind != TokenKind::Op) {
                continue;
            }
            if (t.text == "(" || t.text == "[" || t.text == "{") {
                ++depth;
            } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                --depth;
            } else if (t.text == ":" && depth == 0) {
                return true;
            }
        }
        return false;
    }

    void parse_def(const std::vector<std::size_t>& sig, bool ends_with_colon) {
        const auto& toks = m_.tokens_;
        FunctionDef fn;
        std::size_t p = 0;
        if (is_name(toks[sig[0]], "async")) {
            fn.is_async = true;
            p = 1;
        }
        fn.first_token = sig[0];
        fn.begin = toks[sig[0]].begin;
        fn.line = toks[sig[0]].line;
        fn.line_begin = line_start(fn.begin);
        fn.indent = std::string(m_.text(fn.line_begin, fn.begin));
        fn.decorators_begin = decorators_begin_.value_or(fn.begin);
        fn.decorators = std::move(decorators_);
        decorators_.clear();
        decorators_begin_.reset();

        const int line = toks[sig[p]].line;
        if (p + 2 >= sig.size() || toks[sig[p + 1]].kind != TokenKind::Name ||
            is_keyword(toks[sig[p + 1]].text) || !is_op(toks[sig[p + 2]], "(")) {
            throw SyntaxError("invalid function definition", line);
        }
        fn.name = std::string(toks[sig[p + 1]].text);
        const std::size_t open = sig[p + 2];
        const std::size_t close = matching_bracket(toks, open);
        fn.params = parse_params(open, close);

        // Position of `close` inside sig.
        auto it = std::find(sig.begin(), sig.end(), close);
        if (it == sig.end() || it + 1 == sig.end()) {
            throw SyntaxError("expected ':'", line);
        }
        ++it;
        if (is_op(toks[*it], "->")) {
            const auto ann_first = it + 1;
            auto colon = ann_first;
            int depth = 0;
            for (; colon != sig.end(); ++colon) {
                const auto& t = toks[*colon];
                if (t.kind == TokenKind::Op) {
                    if (t.text == "(" || t.text == "[" || t.text == "{") {
                        ++depth;
                    } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                        --depth;
                    } else if (t.text == ":" && depth == 0) {
                        break;
                    }
                }
            }
            if (colon == sig.end() || colon == ann_first) {
                throw SyntaxError("expected ':'", line);
            }
            fn.return_annotation = std::string(m_.text(toks[*ann_first].begin, toks[*(colon - 1)].end));
            it = colon;
        }
        if (!is_op(toks[*it], ":")) {
            throw SyntaxError("expected ':'", line);
        }
        fn.colon_token = *it;
        fn.header_colon = toks[*it].begin;
        fn.scope = current_scope();
        immediate_parents(fn.parent_class, fn.parent_function);

        const int index = static_cast<int>(m_.functions_.size());
        if (ends_with_colon) {
            fn.end = toks[*it].end;
            fn.end_line = toks[*it].end_line;
            fn.last_token = *it;
            m_.functions_.push_back(std::move(fn));
            pending_ = Block{Block::Kind::Def, index, 0, 0, false};
        } else {
            fn.inline_body = true;
            fn.end = toks[sig.back()].end;
            fn.end_line = toks[sig.back()].end_line;
            fn.last_token = sig.back();
            m_.functions_.push_back(std::move(fn));
        }
    }

    std::vector<Param> parse_params(std::size_t open, std::size_t close) const {
        const auto& toks = m_.tokens_;
        std::vector<Param> params;
        std::vector<std::vector<std::size_t>> pieces(1);
        int depth = 0;
        for (std::size_t k = open + 1; k < close; ++k) {
            const auto& t = toks[k];
            if (!is_significant(t)) {
                continue;
            }
            if (t.kind == TokenKind::Op) {
                if (t.text == "(" || t.text == "[" || t.text == "{") {
                    ++depth;
                } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                    --depth;
                } else if (t.text == "," && depth == 0) {
                    pieces.emplace_back();
                    continue;
                }
            }
            pieces.back().push_back(k);
        }
        if (pieces.back().empty()) {
            pieces.pop_back();  // trailing comma or empty list
        }
        bool keyword_only = false;
        for (const auto& piece : pieces) {
            const int line = toks[open].line;
            if (piece.empty()) {
                throw SyntaxError("invalid parameter list", line);
            }
            std::size_t q = 0;
            Param p;
            if (is_op(toks[piece[0]], "/")) {
                if (piece.size() != 1) {
                    throw SyntaxError("invalid parameter list", line);
                }
                continue;
            }
            if (is_op(toks[piece[0]], "*")) {
                if (piece.size() == 1) {
                    keyword_only = true;
                    continue;
                }
                p.kind = ParamKind::VarPositional;
                keyword_only = true;
                q = 1;
            } else if (is_op(toks[piece[0]], "**")) {
                p.kind = ParamKind::VarKeyword;
                q = 1;
            } else if (keyword_only) {
                p.kind = ParamKind::KeywordOnly;
            }
            if (q >= piece.size() || toks[piece[q]].kind != TokenKind::Name || is_keyword(toks[piece[q]].text)) {
                throw SyntaxError("invalid parameter list", line);
            }
            p.name = std::string(toks[piece[q]].text);
            ++q;
            if (q < piece.size() && is_op(toks[piece[q]], ":")) {
                const std::size_t ann_first = q + 1;
                std::size_t ann_last = ann_first;
                int d = 0;
                for (; ann_last < piece.size(); ++ann_last) {
                    const auto& t = toks[piece[ann_last]];
                    if (t.kind == TokenKind::Op) {
                        if (t.text == "(" || t.text == "[" || t.text == "{") {
                            ++d;
                        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                            --d;
                        } else if (t.text == "=" && d == 0) {
                            break;
                        }
                    }
                }
                if (ann_last == ann_first) {
                    throw SyntaxError("invalid parameter annotation", line);
                }
                p.annotation =
                    std::string(m_.text(toks[piece[ann_first]].begin, toks[piece[ann_last - 1]].end));
                q = ann_last;
            }
            if (q < piece.size()) {
                if (!is_op(toks[piece[q]], "=") || q + 1 >= piece.size()) {
                    throw SyntaxError("invalid parameter list", line);
                }
                p.has_default = true;
            }
            params.push_back(std::move(p));
        }
        return params;
    }

    void parse_class(const std::vector<std::size_t>& sig, bool ends_with_colon) {
        const auto& toks = m_.tokens_;
        decorators_.clear();
        decorators_begin_.reset();
        const int line = toks[sig[0]].line;
        if (sig.size() < 3 || toks[sig[1]].kind != TokenKind::Name || is_keyword(toks[sig[1]].text)) {
            throw SyntaxError("invalid class definition", line);
        }
        std::size_t p = 2;
        if (is_op(toks[sig[p]], "(")) {
            const auto close = matching_bracket(toks, sig[p]);
            auto it = std::find(sig.begin(), sig.end(), close);
            p = static_cast<std::size_t>(it - sig.begin()) + 1;
        }
        if (p >= sig.size() || !is_op(toks[sig[p]], ":")) {
            throw SyntaxError("expected ':'", line);
        }
        ClassDef cls;
        cls.name = std::string(toks[sig[1]].text);
        cls.begin = toks[sig[0]].begin;
        cls.line = line;
        cls.scope = current_scope();
        immediate_parents(cls.parent_class, cls.parent_function);
        const int index = static_cast<int>(m_.classes_.size());
        cls.end = toks[sig.back()].end;
        m_.classes_.push_back(std::move(cls));
        if (ends_with_colon && p == sig.size() - 1) {
            pending_ = Block{Block::Kind::Class, index, 0, 0, false};
        }
    }

    // A def is a generator when `yield` appears in its own body, outside
    // nested defs and lambdas.
    void compute_generators() {
        const auto& toks = m_.tokens_;
        for (auto& fn : m_.functions_) {
            for (std::size_t k = fn.colon_token + 1; k <= fn.last_token && k < toks.size(); ++k) {
                if (!is_name(toks[k], "yield")) {
                    continue;
                }
                bool nested = false;
                for (const auto& other : m_.functions_) {
                    if (&other != &fn && other.first_token > fn.colon_token && other.first_token <= k &&
                        k <= other.last_token) {
                        nested = true;
                        break;
                    }
                }
                if (!nested) {
                    fn.is_generator = true;
                    break;
                }
            }
        }
    }

    Module& m_;
    std::vector<Block> stack_;
    std::optional<Block> pending_;
    std::vector<std::string> decorators_;
    std::optional<std::size_t> decorators_begin_;
};

Module Module::parse(std::string source) {
    Module m;
    m.source_ = std::make_shared<const std::string>(std::move(source));
    m.tokens_ = tokenize(*m.source_);
    ModuleBuilder(m).build();
    return m;
}

std::vector<ImportStmt> Module::imports() const {
    std::vector<ImportStmt> out;
    for (const auto& ll : lines_) {
        if (ll.depth != 0) {
            continue;
        }
        const auto& head = tokens_[ll.first_token];
        if (head.kind != TokenKind::Name || (head.text != "import" && head.text != "from")) {
            continue;
        }
        ImportStmt stmt;
        stmt.begin = head.begin;
        stmt.end = tokens_[ll.last_token].end;
        stmt.line = head.line;
        stmt.text = std::string(text(stmt.begin, stmt.end));
        out.push_back(std::move(stmt));
    }
    return out;
}

std::vector<LogicalLine> Module::top_level_lines() const {
    std::vector<LogicalLine> out;
    std::copy_if(lines_.begin(), lines_.end(), std::back_inserter(out),
                 [](const LogicalLine& l) { return l.depth == 0; });
    return out;
}

std::vector<CallSite> Module::calls_between(std::size_t first_token, std::size_t last_token) const {
    std::vector<CallSite> calls;
    const std::size_t stop = std::min(last_token, tokens_.size() - 1);
    std::size_t prev_sig = first_token;
    bool have_prev = false;
    for (std::size_t k = first_token; k <= stop; ++k) {
        const auto& t = tokens_[k];
        if (!is_significant(t)) {
            continue;
        }
        const bool after_def = have_prev && tokens_[prev_sig].kind == TokenKind::Name &&
                               (tokens_[prev_sig].text == "def" || tokens_[prev_sig].text == "class");
        have_prev = true;
        prev_sig = k;
        if (t.kind != TokenKind::Name || is_keyword(t.text) || after_def) {
            continue;
        }
        std::size_t next = k + 1;
        while (next < tokens_.size() && !is_significant(tokens_[next])) {
            ++next;
        }
        if (next >= tokens_.size() || !is_op(tokens_[next], "(")) {
            continue;
        }
        const auto close = matching_bracket(tokens_, next);
        std::size_t commas = 0;
        bool any = false;
        bool trailing_comma = false;
        int depth = 0;
        for (std::size_t a = next + 1; a < close; ++a) {
            const auto& at = tokens_[a];
            if (!is_significant(at)) {
                continue;
            }
            any = true;
            trailing_comma = false;
            if (at.kind == TokenKind::Op) {
                if (at.text == "(" || at.text == "[" || at.text == "{") {
                    ++depth;
                } else if (at.text == ")" || at.text == "]" || at.text == "}") {
                    --depth;
                } else if (at.text == "," && depth == 0) {
                    ++commas;
                    trailing_comma = true;
                }
            }
        }
        CallSite cs;
        cs.name = std::string(t.text);
        cs.arity = any ? commas + 1 - (trailing_comma ? 1 : 0) : 0;
        cs.line = t.line;
        cs.token = k;
        calls.push_back(std::move(cs));
    }
    return calls;
}

bool Module::offset_inside_string(std::size_t offset) const {
    for (const auto& [b, e] : multiline_strings_) {
        if (offset > b && offset < e) {
            return true;
        }
    }
    return false;
}

}  // namespace fc::python
