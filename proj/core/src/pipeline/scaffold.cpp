#include "fc/pipeline/scaffold.hpp"

#include <stdexcept>

#include "fc/python/syntax.hpp"
#include "fc/util/text.hpp"

namespace fc::pipeline {

std::string checker_module_name(std::string_view checker_id) { return "checker_" + std::string(checker_id); }

std::string checker_class_name(std::string_view checker_id) { return "FcChecker_" + std::string(checker_id); }

std::string scaffold(const CheckerArtifact& artifact) {
    if (artifact.status == CheckerStatus::Draft || artifact.status == CheckerStatus::Rejected) {
        throw std::logic_error("scaffold requires a statically valid checker, got " +
                               std::string(status_name(artifact.status)));
    }
    const auto m = python::Module::parse(artifact.checker_source);
    const python::FunctionDef* fn = nullptr;
    for (const auto& f : m.functions()) {
        if (f.parent_class < 0 && f.parent_function < 0) {
            fn = &f;
            break;
        }
    }
    if (fn == nullptr) {
        throw std::logic_error("checker source has no function");
    }
    const auto cls = checker_class_name(artifact.id);

    std::string out;
    out += "# Checker scaffold for " + artifact.id + " (target: " + artifact.target + ")\n";
    out +=
        "from fc_runtime.shim import (ABSENT, GUARD_MESSAGE, CheckerRecursionError, Operation, ShadowState,\n"
        "                             assertEquals, assertNotNull, assertTrue, checker_scope)\n";
    for (const auto& imp : artifact.imports) {
        out += imp + "\n";
    }
    out += "\n\nclass " + cls + ":\n";
    out += "    CHECKER_ID = \"" + artifact.id + "\"\n\n";
    if (!fn->has_decorator("staticmethod")) {
        out += "    @staticmethod\n";
    }
    // Re-indent the checker by one level; lines inside multi-line strings stay put.
    const auto& src = m.source();
    const auto starts = util::line_starts(src);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto b = starts[i];
        const auto e = i + 1 < starts.size() ? starts[i + 1] : src.size();
        if (b >= e && i + 1 == starts.size()) {
            break;
        }
        std::string line = src.substr(b, e - b);
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
        }
        if (util::trim(line).empty()) {
            out += "\n";
        } else if (m.offset_inside_string(b)) {
            out += line + "\n";
        } else {
            out += "    " + line + "\n";
        }
    }
    out += "\n    @staticmethod\n";
    out += "    def fc_run(op, shadowState):\n";
    out += "        if ShadowState.in_checker:\n";
    out += "            raise CheckerRecursionError(GUARD_MESSAGE)\n";
    out += "        ShadowState.in_checker = True\n";
    out += "        try:\n";
    out += "            with checker_scope(" + cls + ".CHECKER_ID):\n";
    out += "                " + cls + "." + fn->name + "(op, shadowState)\n";
    out += "        finally:\n";
    out += "            ShadowState.in_checker = False\n";
    return out;
}

}  // namespace fc::pipeline
