#pragma once

namespace suparea {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace suparea
