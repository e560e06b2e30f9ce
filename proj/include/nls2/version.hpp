#pragma once

namespace nls2 {
inline constexpr const char* k_version = "0.1.0";
}
