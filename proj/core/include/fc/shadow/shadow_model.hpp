#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace fc::shadow {

// Receiver identity. Equal contents never imply equal identity.
using ObjectId = std::uint64_t;

using Value = std::variant<std::monostate, bool, std::int64_t, std::string, std::set<std::string>>;

// Identity-keyed property map; entries are never evicted.
class ShadowState {
public:
    using Properties = std::map<std::string, Value>;

    const Value* find(ObjectId object, const std::string& property) const;
    Value get_or(ObjectId object, const std::string& property, Value fallback) const;
    void put(ObjectId object, const std::string& property, Value value);
    Properties& entry(ObjectId object);

    bool contains(ObjectId object) const { return state_.count(object) != 0; }
    std::size_t size() const { return state_.size(); }

private:
    std::unordered_map<ObjectId, Properties> state_;
};

struct Operation {
    std::string signature;
    ObjectId base = 0;
    std::vector<std::string> arguments;
    std::optional<bool> return_value;  // nullopt: absent
};

// Reference semantics of a children-tracking checker: add inserts the first
// argument into the receiver's "children" set, remove erases it, and every
// other signature leaves the set as is (creating it empty on first sight).
class ChildrenModel {
public:
    ChildrenModel(std::string add_signature, std::string remove_signature);

    void apply(ShadowState& state, const Operation& op) const;

    // The expected children of `object`; empty when never seen.
    static std::set<std::string> children(const ShadowState& state, ObjectId object);

    // Same checks as the checker's assertions: equal size and every expected
    // child present in `actual`.
    static bool consistent(const ShadowState& state, ObjectId object, const std::set<std::string>& actual);

private:
    std::string add_;
    std::string remove_;
};

}  // namespace fc::shadow
