#pragma once

namespace evac {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evac
