#pragma once

#include <string>
#include <string_view>

#include "fc/pipeline/artifact.hpp"

namespace fc::pipeline {

std::string checker_module_name(std::string_view checker_id);
std::string checker_class_name(std::string_view checker_id);

// Wraps the checker function into an importable module: shim imports, the
// target test's imports, a uniquely named container class holding the
// checker as a static method, and `fc_run`, which refuses to start while
// another checker is active on the thread, sets the guard flag for the body
// and clears it on every exit.
// Requires status >= statically_valid (std::logic_error otherwise).
std::string scaffold(const CheckerArtifact& artifact);

}  // namespace fc::pipeline
