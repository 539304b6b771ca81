#include "fc/subject/signature.hpp"

#include "fc/util/text.hpp"

namespace fc::subject {

std::string Signature::str() const {
    std::string out = ns + "." + type + "." + method + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += params[i];
    }
    out += ')';
    return out;
}

std::optional<Signature> parse_signature(std::string_view text) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.empty() || text.back() != ')') {
        return std::nullopt;
    }
    const auto head = text.substr(0, open);
    const auto inner = text.substr(open + 1, text.size() - open - 2);

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = head.find('.', start);
        const auto part = head.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (!util::is_identifier(part)) {
            return std::nullopt;
        }
        parts.emplace_back(part);
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    if (parts.size() < 3) {
        return std::nullopt;
    }

    Signature sig;
    sig.method = parts.back();
    sig.type = parts[parts.size() - 2];
    parts.resize(parts.size() - 2);
    sig.ns = util::join(parts, ".");
    if (!inner.empty()) {
        std::size_t p = 0;
        while (true) {
            const auto comma = inner.find(',', p);
            const auto param = inner.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p);
            if (!util::is_identifier(param)) {
                return std::nullopt;
            }
            sig.params.emplace_back(param);
            if (comma == std::string_view::npos) {
                break;
            }
            p = comma + 1;
        }
    }
    return sig;
}

std::string declaring_type_of(std::string_view signature) {
    auto sig = parse_signature(signature);
    return sig ? sig->declaring_type() : std::string();
}

std::string method_name_of(std::string_view signature) {
    auto sig = parse_signature(signature);
    return sig ? sig->method : std::string();
}

std::string simple_type_name(std::string_view annotation) {
    std::string a = util::trim(annotation);
    if (a.size() >= 2 && (a.front() == '\'' || a.front() == '"') && a.back() == a.front()) {
        a = util::trim(std::string_view(a).substr(1, a.size() - 2));
    }
    // Outermost type: strip subscripts and unions (`X | None` keeps X).
    const auto cut = a.find_first_of("[|");
    if (cut != std::string::npos) {
        a = util::trim(std::string_view(a).substr(0, cut));
    }
    const auto dot = a.rfind('.');
    if (dot != std::string::npos) {
        a = a.substr(dot + 1);
    }
    if (a == "None") {
        return "NoneType";
    }
    return util::is_identifier(a) ? a : "object";
}

}  // namespace fc::subject
