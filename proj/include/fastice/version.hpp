#pragma once

namespace fastice {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fastice
