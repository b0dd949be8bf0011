#pragma once

namespace kerrgauge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kerrgauge
