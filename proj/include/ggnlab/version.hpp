#pragma once

namespace ggnlab {

inline constexpr const char* kToolName = "ggn-lab";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace ggnlab
