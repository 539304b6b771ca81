#include "fc/shadow/shadow_model.hpp"

namespace fc::shadow {

namespace {
const std::string kChildren = "children";
}

const Value* ShadowState::find(ObjectId object, const std::string& property) const {
    const auto it = state_.find(object);
    if (it == state_.end()) {
        return nullptr;
    }
    const auto p = it->second.find(property);
    return p == it->second.end() ? nullptr : &p->second;
}

Value ShadowState::get_or(ObjectId object, const std::string& property, Value fallback) const {
    const auto* v = find(object, property);
    return v != nullptr ? *v : fallback;
}

void ShadowState::put(ObjectId object, const std::string& property, Value value) {
    state_[object][property] = std::move(value);
}

ShadowState::Properties& ShadowState::entry(ObjectId object) { return state_[object]; }

ChildrenModel::ChildrenModel(std::string add_signature, std::string remove_signature)
    : add_(std::move(add_signature)), remove_(std::move(remove_signature)) {}

void ChildrenModel::apply(ShadowState& state, const Operation& op) const {
    auto& props = state.entry(op.base);
    auto it = props.find(kChildren);
    if (it == props.end() || !std::holds_alternative<std::set<std::string>>(it->second)) {
        it = props.insert_or_assign(kChildren, std::set<std::string>{}).first;
    }
    auto& children = std::get<std::set<std::string>>(it->second);
    if (op.arguments.empty()) {
        return;
    }
    if (op.signature == add_) {
        children.insert(op.arguments.front());
    } else if (op.signature == remove_) {
        children.erase(op.arguments.front());
    }
}

std::set<std::string> ChildrenModel::children(const ShadowState& state, ObjectId object) {
    const auto* v = state.find(object, kChildren);
    if (v == nullptr || !std::holds_alternative<std::set<std::string>>(*v)) {
        return {};
    }
    return std::get<std::set<std::string>>(*v);
}

bool ChildrenModel::consistent(const ShadowState& state, ObjectId object, const std::set<std::string>& actual) {
    const auto expected = children(state, object);
    if (expected.size() != actual.size()) {
        return false;
    }
    for (const auto& c : expected) {
        if (actual.count(c) == 0) {
            return false;
        }
    }
    return true;
}

}  // namespace fc::shadow
