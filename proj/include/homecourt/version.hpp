#pragma once

namespace homecourt {

inline constexpr const char* engine_version = "homecourt 0.1.0";

} // namespace homecourt
