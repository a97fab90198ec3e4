#pragma once

namespace kclose {

inline constexpr const char* kVersion = "0.4.0";

}  // namespace kclose
