#pragma once

namespace riskurn {

inline constexpr const char* version = "0.1.0";

}  // namespace riskurn
