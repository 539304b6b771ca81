#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fc::subject {

// `<namespace>.<Type>.<method>(<p1>,<p2>,...)`, no whitespace. The namespace
// has at least one dotted component; parameter types are simple identifiers.
struct Signature {
    std::string ns;
    std::string type;
    std::string method;
    std::vector<std::string> params;

    std::string declaring_type() const { return ns + "." + type; }
    std::string str() const;

    friend bool operator==(const Signature&, const Signature&) = default;
};

std::optional<Signature> parse_signature(std::string_view text);

inline bool is_qualified_signature(std::string_view text) { return parse_signature(text).has_value(); }

// Declaring type of a canonical signature string; empty if it does not parse.
std::string declaring_type_of(std::string_view signature);

// Simple method name of a canonical signature string; empty if it does not parse.
std::string method_name_of(std::string_view signature);

// Maps a Python annotation to the simple type name used in signatures:
// `typing.List[str]` -> `List`, `'DataNode'` -> `DataNode`, empty -> `object`.
std::string simple_type_name(std::string_view annotation);

}  // namespace fc::subject
