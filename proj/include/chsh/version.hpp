#pragma once

namespace chsh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chsh
