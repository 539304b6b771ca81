#include "fc/instrument/diff.hpp"

#include <algorithm>
#include <set>

#include "fc/instrument/instrumenter.hpp"
#include "fc/python/syntax.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/text.hpp"

namespace fc::instrument {

using python::FunctionDef;
using python::Module;
using python::TokenKind;

namespace {

std::size_t line_end_after(const std::string& src, std::size_t offset) {
    const auto nl = src.find('\n', offset);
    return nl == std::string::npos ? src.size() : nl + 1;
}

std::size_t line_start_of(const std::string& src, std::size_t offset) {
    if (offset == 0) {
        return 0;
    }
    const auto nl = src.rfind('\n', offset - 1);
    return nl == std::string::npos ? 0 : nl + 1;
}

std::string dispatch_signature(const Module& m, const FunctionDef& outer, std::size_t from_token) {
    const auto& toks = m.tokens();
    for (std::size_t i = from_token; i + 3 <= outer.last_token; ++i) {
        if (toks[i].text == "_fc" && toks[i + 1].text == "." && toks[i + 2].text == "dispatch" &&
            toks[i + 3].text == "(" && i + 4 <= outer.last_token && toks[i + 4].kind == TokenKind::String) {
            auto lit = toks[i + 4].text;
            if (lit.size() >= 2) {
                return std::string(lit.substr(1, lit.size() - 2));
            }
        }
    }
    throw InstrumentError("wrapper without a dispatch call in " + outer.name);
}

// Original text of one wrapped method, from `def` to the end of its body.
std::string unwrap(const Module& m, const FunctionDef& outer, const FunctionDef& body) {
    const auto& src = m.source();
    const auto& toks = m.tokens();
    const auto header_end = line_end_after(src, toks[outer.colon_token].end);
    const auto body_line = line_start_of(src, body.begin);
    const auto body_header_end = line_end_after(src, toks[body.colon_token].end);

    const auto inline_tag = std::string("# fc-inline ");
    const auto header_line = src.substr(body_line, body_header_end - body_line);
    if (const auto at = header_line.find(inline_tag); at != std::string::npos) {
        const auto gap = std::stoul(header_line.substr(at + inline_tag.size()));
        auto stmt_line = src.substr(body_header_end, body.end - body_header_end);
        stmt_line = stmt_line.substr(stmt_line.find_first_not_of(" \t"));
        const auto colon_end = toks[outer.colon_token].end;
        return src.substr(outer.begin, colon_end - outer.begin) + std::string(gap, ' ') + stmt_line;
    }

    std::string out = src.substr(outer.begin, body_line - outer.begin);
    const auto& B = body.indent;
    const auto unit = body.body_indent.size() > B.size() ? body.body_indent.substr(B.size()) : std::string("    ");
    std::string inner;
    std::size_t pos = body_header_end;
    while (pos < body.end) {
        const auto nl = src.find('\n', pos);
        const auto stop = std::min(nl == std::string::npos ? src.size() : nl, body.end);
        auto line = src.substr(pos, stop - pos);
        if (util::trim(line).empty() || m.offset_inside_string(pos)) {
            inner += line + "\n";
        } else if (util::starts_with(line, unit)) {
            line.erase(0, unit.size());
            // The body ends at its last token, so the marker comment lies past `stop`.
            const auto full = src.substr(pos, (nl == std::string::npos ? src.size() : nl) - pos);
            if (util::trim(full) != "pass  # fc-empty-body") {
                inner += line + "\n";
            }
        } else {
            throw InstrumentError("inner body line not indented by the wrapper unit in " + outer.name);
        }
        pos = stop + 1;
    }
    out += inner;
    // The original body ends at its last token; drop the newline we added.
    if (!out.empty() && out.back() == '\n') {
        out.pop_back();
    }
    if (out.size() < header_end - outer.begin) {
        throw InstrumentError("malformed wrapper in " + outer.name);
    }
    return out;
}

}  // namespace

std::string uninstrument_source(const std::string& instrumented, std::vector<std::string>* signatures) {
    if (!has_marker(instrumented)) {
        throw InstrumentError("missing instrumentation marker");
    }
    std::string text = instrumented.substr(line_end_after(instrumented, 0));
    const auto m = Module::parse(text);

    struct Edit {
        std::size_t begin;
        std::size_t end;
        std::string text;
    };
    std::vector<Edit> edits;
    const auto& fns = m.functions();
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const auto& fn = fns[i];
        if (fn.name != "_fc_body" || fn.parent_function < 0) {
            continue;
        }
        const auto& outer = fns[static_cast<std::size_t>(fn.parent_function)];
        edits.push_back(Edit{outer.begin, outer.end, unwrap(m, outer, fn)});
        if (signatures != nullptr) {
            signatures->push_back(dispatch_signature(m, outer, fn.last_token + 1));
        }
    }
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin > b.begin; });
    for (const auto& e : edits) {
        text.replace(e.begin, e.end - e.begin, e.text);
    }

    const std::string import_line = std::string(kImportLine) + "\n";
    const auto at = text.find(import_line);
    if (at == std::string::npos || (at != 0 && text[at - 1] != '\n')) {
        throw InstrumentError("missing runtime import");
    }
    text.erase(at, import_line.size());
    return text;
}

DiffReport uninstrument_diff(const std::filesystem::path& original, const std::filesystem::path& instrumented) {
    DiffReport report;
    const auto orig_files = util::list_files(original);
    const auto inst_files = util::list_files(instrumented);
    std::set<std::string> orig_set;
    for (const auto& f : orig_files) {
        orig_set.insert(f.generic_string());
    }
    for (const auto& f : inst_files) {
        if (orig_set.count(f.generic_string()) == 0) {
            report.added_files.push_back(f.generic_string());
        }
    }
    for (const auto& f : orig_files) {
        const auto rel = f.generic_string();
        if (!std::filesystem::exists(instrumented / f)) {
            report.corrupted.push_back(rel + ": missing from the instrumented tree");
            continue;
        }
        const auto a = util::read_file(original / f);
        const auto b = util::read_file(instrumented / f);
        if (a == b) {
            continue;
        }
        if (!rel.ends_with(".py")) {
            report.corrupted.push_back(rel + ": non-Python file modified");
            continue;
        }
        try {
            std::vector<std::string> sigs;
            const auto recovered = uninstrument_source(b, &sigs);
            if (recovered != a) {
                report.corrupted.push_back(rel + ": differs outside wrapped methods");
                continue;
            }
            std::sort(sigs.begin(), sigs.end());
            report.wrapped[rel] = std::move(sigs);
        } catch (const std::exception& e) {
            report.corrupted.push_back(rel + ": " + e.what());
        }
    }
    return report;
}

}  // namespace fc::instrument
