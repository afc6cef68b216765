#pragma once

namespace coocnet {

inline constexpr const char* kToolName = "coocnet";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace coocnet
