#pragma once

namespace surfact {

inline constexpr const char* kVersion = "surfact 1.0.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace surfact
