#pragma once

namespace ostwave {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

}  // namespace ostwave
