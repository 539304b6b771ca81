#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "fc/python/lexer.hpp"
#include "fc/python/syntax.hpp"

namespace {

using fc::python::Module;
using fc::python::SyntaxError;
using fc::python::TokenKind;

TEST(Lexer, SplitsNamesNumbersOperatorsAndStrings) {
    const std::string src = "x = foo(1, 'a') + 2.5\n";
    const auto toks = fc::python::tokenize(src);
    std::vector<std::string> texts;
    for (const auto& t : toks) {
        if (fc::python::is_significant(t)) {
            texts.emplace_back(t.text);
        }
    }
    const std::vector<std::string> expected{"x", "=", "foo", "(", "1", ",", "'a'", ")", "+", "2.5"};
    EXPECT_EQ(texts, expected);
}

TEST(Lexer, TripleQuotedStringSpansLines) {
    const std::string src = "s = \"\"\"a\n  b\n\"\"\"\nt = 1\n";
    const auto toks = fc::python::tokenize(src);
    const auto it = std::find_if(toks.begin(), toks.end(), [](const auto& t) { return t.kind == TokenKind::String; });
    ASSERT_NE(it, toks.end());
    EXPECT_EQ(it->line, 1);
    EXPECT_EQ(it->end_line, 3);
}

TEST(Lexer, PrefixedStringsAreSingleTokens) {
    for (const std::string lit : {"b'x'", "rb\"\\d\"", "f'{a}'", "u'z'"}) {
        const auto toks = fc::python::tokenize("v = " + lit + "\n");
        ASSERT_GE(toks.size(), 3U);
        EXPECT_EQ(toks[2].kind, TokenKind::String) << lit;
        EXPECT_EQ(toks[2].text, lit);
    }
}

TEST(Lexer, UnterminatedStringIsAnError) { EXPECT_THROW(fc::python::tokenize("x = 'abc\n"), SyntaxError); }

TEST(Syntax, UnbalancedBracketIsAnError) { EXPECT_THROW(Module::parse("x = (1,\n"), SyntaxError); }

TEST(Syntax, UnexpectedIndentIsAnError) { EXPECT_THROW(Module::parse("x = 1\n    y = 2\n"), SyntaxError); }

TEST(Syntax, MissingBlockIsAnError) { EXPECT_THROW(Module::parse("def f():\nx = 1\n"), SyntaxError); }

TEST(Syntax, MissingColonIsAnError) { EXPECT_THROW(Module::parse("def f()\n    return 1\n"), SyntaxError); }

TEST(Syntax, FunctionsRecordScopeDecoratorsAndParams) {
    const auto m = Module::parse(
        "class A:\n"
        "    @staticmethod\n"
        "    def s(x: int, *rest, key=None, **kw) -> 'A':\n"
        "        return x\n"
        "\n"
        "    async def a(self):\n"
        "        await g()\n"
        "\n"
        "    def gen(self):\n"
        "        yield 1\n"
        "\n"
        "    def inline(self): return 2\n");
    const auto& fns = m.functions();
    ASSERT_EQ(fns.size(), 4U);
    EXPECT_EQ(fns[0].name, "s");
    EXPECT_TRUE(fns[0].has_decorator("staticmethod"));
    ASSERT_EQ(fns[0].params.size(), 4U);
    EXPECT_EQ(fns[0].params[0].annotation, "int");
    EXPECT_EQ(fns[0].params[1].kind, fc::python::ParamKind::VarPositional);
    EXPECT_EQ(fns[0].params[2].kind, fc::python::ParamKind::KeywordOnly);
    EXPECT_TRUE(fns[0].params[2].has_default);
    EXPECT_EQ(fns[0].params[3].kind, fc::python::ParamKind::VarKeyword);
    EXPECT_EQ(fns[0].return_annotation, "'A'");
    EXPECT_EQ(fns[0].scope, std::vector<std::string>{"A"});
    EXPECT_TRUE(fns[1].is_async);
    EXPECT_FALSE(fns[1].is_generator);
    EXPECT_TRUE(fns[2].is_generator);
    EXPECT_TRUE(fns[3].inline_body);
    EXPECT_EQ(m.text(fns[3].begin, fns[3].end), "def inline(self): return 2");
}

TEST(Syntax, YieldInNestedFunctionDoesNotMakeOuterAGenerator) {
    const auto m = Module::parse(
        "def outer():\n"
        "    def inner():\n"
        "        yield 1\n"
        "    return list(inner())\n");
    ASSERT_EQ(m.functions().size(), 2U);
    EXPECT_FALSE(m.functions()[0].is_generator);
    EXPECT_TRUE(m.functions()[1].is_generator);
    EXPECT_EQ(m.functions()[1].parent_function, 0);
}

TEST(Syntax, ImportsAreVerbatimAndOrdered) {
    const auto m = Module::parse(
        "\"\"\"doc\"\"\"\n"
        "import os\n"
        "from a.b import (c,\n"
        "    d)\n"
        "import os\n"
        "def f():\n"
        "    import inner\n");
    const auto imports = m.imports();
    ASSERT_EQ(imports.size(), 3U);
    EXPECT_EQ(imports[0].text, "import os");
    EXPECT_EQ(imports[1].text, "from a.b import (c,\n    d)");
    EXPECT_EQ(imports[2].text, "import os");
}

TEST(Syntax, CallArityCountsTopLevelArguments) {
    const auto m = Module::parse("x = f(a, g(b, c), [d, e], k=1)\ny = h()\nz = q(1,)\n");
    const auto calls = m.calls_between(0, m.tokens().size() - 1);
    std::map<std::string, std::size_t> arity;
    for (const auto& c : calls) {
        arity[c.name] = c.arity;
    }
    EXPECT_EQ(arity["f"], 4U);
    EXPECT_EQ(arity["g"], 2U);
    EXPECT_EQ(arity["h"], 0U);
    EXPECT_EQ(arity["q"], 1U);
}

TEST(Syntax, OffsetsInsideMultilineStringsAreReported) {
    const std::string src = "s = '''one\ntwo\n'''\nx = 1\n";
    const auto m = Module::parse(src);
    EXPECT_TRUE(m.offset_inside_string(src.find("two")));
    EXPECT_FALSE(m.offset_inside_string(src.find("x =")));
}

TEST(Syntax, ClassesNestedInFunctionsAreMarked) {
    const auto m = Module::parse(
        "def factory():\n"
        "    class Local:\n"
        "        def m(self):\n"
        "            pass\n"
        "    return Local\n");
    ASSERT_EQ(m.classes().size(), 1U);
    EXPECT_EQ(m.classes()[0].parent_function, 0);
}

}  // namespace
