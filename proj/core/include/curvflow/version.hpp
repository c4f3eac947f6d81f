#pragma once

namespace curvflow {

inline constexpr const char* version_string = "curvflow 1.0.0";

}  // namespace curvflow
