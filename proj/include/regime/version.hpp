#pragma once

namespace regime {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace regime
