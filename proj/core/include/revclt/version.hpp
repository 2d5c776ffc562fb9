#pragma once

namespace revclt {

inline constexpr const char* kBuildVersion = "revclt 0.1.0";

}  // namespace revclt
