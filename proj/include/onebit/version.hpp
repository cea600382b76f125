#pragma once

namespace onebit {

inline constexpr const char* kVersion = "onebit-mimo 0.1.0";

}  // namespace onebit
