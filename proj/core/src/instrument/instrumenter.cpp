#include "fc/instrument/instrumenter.hpp"

#include <algorithm>
#include <set>

#include "fc/instrument/shim_templates.hpp"
#include "fc/pipeline/scaffold.hpp"
#include "fc/python/syntax.hpp"
#include "fc/util/fs.hpp"
#include "fc/util/text.hpp"

namespace fc::instrument {

using python::FunctionDef;
using python::Module;
using python::ParamKind;
using python::TokenKind;

bool has_marker(std::string_view source) {
    return util::starts_with(source, kMarker) &&
           (source.size() == kMarker.size() || source[kMarker.size()] == '\n' || source[kMarker.size()] == '\r');
}

InstrumentationPlan InstrumentationPlan::build(std::vector<pipeline::CheckerArtifact> checkers,
                                               const subject::SubjectProject& project, fs::path output_root,
                                               std::string on_violation) {
    InstrumentationPlan plan;
    std::sort(checkers.begin(), checkers.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& c : checkers) {
        for (const auto& sig : c.instrumented_signatures()) {
            if (project.method_index.count(sig) == 0) {
                throw InstrumentError("targeted method not found: " + sig + " (checker " + c.id + ")");
            }
            plan.targets[sig].push_back(c.id);
        }
    }
    for (auto& [sig, ids] : plan.targets) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    plan.checkers = std::move(checkers);
    plan.output_root = std::move(output_root);
    plan.on_violation = std::move(on_violation);
    return plan;
}

namespace {

std::size_t line_start_of(const std::string& src, std::size_t offset) {
    if (offset == 0) {
        return 0;
    }
    const auto nl = src.rfind('\n', offset - 1);
    return nl == std::string::npos ? 0 : nl + 1;
}

std::size_t line_end_after(const std::string& src, std::size_t offset) {
    const auto nl = src.find('\n', offset);
    return nl == std::string::npos ? src.size() : nl + 1;
}

std::string quote_py(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '\\' || c == '"') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string wrap_method(const Module& m, const FunctionDef& fn, const MethodTarget& target) {
    const auto& src = m.source();
    const auto& toks = m.tokens();
    if (fn.is_generator) {
        throw InstrumentError("cannot instrument generator method " + target.signature);
    }
    const bool is_static = fn.has_decorator("staticmethod");
    if (!is_static && fn.params.empty()) {
        throw InstrumentError("method without a receiver parameter: " + target.signature);
    }

    std::vector<std::string> names;
    for (const auto& p : fn.params) {
        names.push_back(p.name);
    }
    const auto params = util::join(names, ", ");
    std::vector<std::string> arg_names(names.begin() + (is_static ? 0 : 1), names.end());
    std::string args_tuple = "(" + util::join(arg_names, ", ") + (arg_names.size() == 1 ? ",)" : ")");
    const std::string base = is_static ? "_fc.ABSENT" : names.front();
    std::vector<std::string> quoted_ids;
    for (const auto& id : target.checker_ids) {
        quoted_ids.push_back(quote_py(id));
    }
    const std::string ids_tuple =
        "(" + util::join(quoted_ids, ", ") + (quoted_ids.size() == 1 ? ",)" : ")");

    std::string out;
    std::string B;
    std::string unit;
    std::string inner;  // already indented inner body lines, each ending in '\n'
    std::string def_suffix;

    if (fn.inline_body) {
        // `def f(self): stmt` becomes a block; the gap after ':' is recorded
        // in the inner header so the original line can be recovered.
        const auto colon_end = toks[fn.colon_token].end;
        const auto first = colon_end + (src.find_first_not_of(" \t", colon_end) - colon_end);
        out += src.substr(fn.begin, colon_end - fn.begin) + "\n";
        B = fn.indent + "    ";
        unit = "    ";
        def_suffix = "  # fc-inline " + std::to_string(first - colon_end);
        inner = B + unit + src.substr(first, fn.end - first) + "\n";
    } else {
        const auto header_end = line_end_after(src, toks[fn.colon_token].end);
        out += src.substr(fn.begin, header_end - fn.begin);
        B = fn.body_indent;
        unit = util::starts_with(B, fn.indent) && B.size() > fn.indent.size() ? B.substr(fn.indent.size()) : "    ";

        // A leading docstring stays in the outer function.
        std::size_t inner_begin = header_end;
        std::size_t k = fn.colon_token + 1;
        while (k <= fn.last_token && !python::is_significant(toks[k])) {
            ++k;
        }
        if (k <= fn.last_token && toks[k].kind == TokenKind::String) {
            std::size_t after = k + 1;
            while (after < toks.size() && toks[after].kind == TokenKind::Comment) {
                ++after;
            }
            if (after < toks.size() &&
                (toks[after].kind == TokenKind::Newline || toks[after].kind == TokenKind::Dedent ||
                 toks[after].kind == TokenKind::EndMarker)) {
                inner_begin = std::min(line_end_after(src, toks[k].end), fn.end);
                out += src.substr(header_end, inner_begin - header_end);
                if (inner_begin == fn.end) {
                    out += "\n";
                }
            }
        }
        bool any_code = false;
        std::size_t pos = inner_begin;
        while (pos < fn.end) {
            const auto nl = src.find('\n', pos);
            const auto stop = std::min(nl == std::string::npos ? src.size() : nl, fn.end);
            const auto line = src.substr(pos, stop - pos);
            if (util::trim(line).empty() || m.offset_inside_string(pos)) {
                inner += line + "\n";
            } else {
                inner += unit + line + "\n";
                any_code = true;
            }
            pos = stop + 1;
        }
        if (!any_code) {
            inner += B + unit + "pass  # fc-empty-body\n";
        }
    }

    const std::string kw_def = fn.is_async ? "async def" : "def";
    const std::string call = std::string(fn.is_async ? "await " : "") + "_fc_body(" + params + ")";
    out += B + kw_def + " _fc_body(" + params + "):" + def_suffix + "\n";
    out += inner;
    const std::string dispatch = "_fc.dispatch(" + quote_py(target.signature) + ", " + base + ", " + args_tuple +
                                 ", " + (target.is_constructor ? std::string("_fc.ABSENT") : "_fc_ret") + ", " +
                                 ids_tuple + ")";
    if (target.is_constructor) {
        out += B + "try:\n";
        out += B + unit + call + "\n";
        out += B + "finally:\n";
        out += B + unit + dispatch;
    } else {
        out += B + "_fc_ret = _fc.ABSENT\n";
        out += B + "try:\n";
        out += B + unit + "_fc_ret = " + call + "\n";
        out += B + unit + "return _fc_ret\n";
        out += B + "finally:\n";
        out += B + unit + dispatch;
    }
    return out;
}

// Offset just past the module docstring and `from __future__` imports.
std::size_t import_insertion_point(const Module& m) {
    const auto& toks = m.tokens();
    std::size_t point = 0;
    bool first = true;
    for (const auto& line : m.top_level_lines()) {
        const auto& head = toks[line.first_token];
        const bool docstring = first && head.kind == TokenKind::String && line.first_token == line.last_token;
        const bool future = head.kind == TokenKind::Name && head.text == "from" &&
                            line.first_token + 1 <= line.last_token &&
                            toks[line.first_token + 1].text == "__future__";
        first = false;
        if (!docstring && !future) {
            break;
        }
        point = line_end_after(m.source(), toks[line.last_token].end);
    }
    return point;
}

}  // namespace

std::string instrument_source(const std::string& source, const std::vector<MethodTarget>& targets) {
    if (has_marker(source)) {
        throw InstrumentError("source is already instrumented");
    }
    const auto m = Module::parse(source);
    struct Edit {
        std::size_t begin;
        std::size_t end;
        std::string text;
    };
    std::vector<Edit> edits;
    for (const auto& t : targets) {
        const FunctionDef* found = nullptr;
        for (const auto& fn : m.functions()) {
            if (line_start_of(source, fn.decorators_begin) == t.span.begin && fn.end == t.span.end) {
                found = &fn;
                break;
            }
        }
        if (found == nullptr) {
            throw InstrumentError("targeted method not found: " + t.signature);
        }
        edits.push_back(Edit{found->begin, found->end, wrap_method(m, *found, t)});
    }
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin > b.begin; });
    std::string out = source;
    for (const auto& e : edits) {
        out.replace(e.begin, e.end - e.begin, e.text);
    }
    const auto point = import_insertion_point(m);
    std::string import_line(kImportLine);
    import_line += "\n";
    if (point > 0 && source[point - 1] != '\n') {
        import_line = "\n" + import_line;
    }
    out.insert(point, import_line);
    return std::string(kMarker) + "\n" + out;
}

InstrumentResult instrument(const subject::SubjectProject& project, const InstrumentationPlan& plan) {
    for (const auto& c : plan.checkers) {
        if (c.status == pipeline::CheckerStatus::Draft || c.status == pipeline::CheckerStatus::Rejected) {
            throw InstrumentError("checker " + c.id + " is " + std::string(pipeline::status_name(c.status)) +
                                  "; instrumentation needs statically valid checkers");
        }
    }
    std::map<std::string, std::vector<MethodTarget>> per_file;
    for (const auto& [sig, ids] : plan.targets) {
        const auto* mi = project.method(sig);
        if (mi == nullptr) {
            throw InstrumentError("targeted method not found: " + sig);
        }
        per_file[mi->file].push_back(MethodTarget{sig, ids, mi->span, mi->is_constructor});
    }

    std::error_code ec;
    const auto out_root = fs::absolute(plan.output_root);
    try {
        util::reset_directory(out_root);
    } catch (const std::exception& e) {
        throw InfraError("output root not writable: " + out_root.string() + ": " + e.what());
    }
    auto excluded_dirs = util::default_excluded_dirs();
    excluded_dirs.insert(excluded_dirs.end(), project.config.exclude_dirs.begin(), project.config.exclude_dirs.end());
    util::copy_tree(project.root, out_root, excluded_dirs, {out_root});

    InstrumentResult result;
    for (const auto& [file, targets] : per_file) {
        const auto original = util::read_file(project.root / file);
        std::string rewritten;
        try {
            rewritten = instrument_source(original, targets);
        } catch (const python::SyntaxError& e) {
            throw InstrumentError("unparseable target file " + file + ": " + e.what());
        }
        util::write_file(out_root / file, rewritten);
        for (const auto& t : targets) {
            result.wrapped[file].push_back(t.signature);
        }
    }
    emit_shim(out_root, plan.on_violation);
    for (const auto& c : plan.checkers) {
        util::write_file(out_root / kRuntimePackage / "checkers" / (pipeline::checker_module_name(c.id) + ".py"),
                         pipeline::scaffold(c));
    }
    return result;
}

}  // namespace fc::instrument
