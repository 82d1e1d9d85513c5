#pragma once

namespace betamix {

inline constexpr const char* version = "0.1.0";

} // namespace betamix
