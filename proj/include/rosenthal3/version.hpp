#pragma once

#define ROSENTHAL3_VERSION_MAJOR 1
#define ROSENTHAL3_VERSION_MINOR 0
#define ROSENTHAL3_VERSION_PATCH 0
#define ROSENTHAL3_VERSION "1.0.0"

namespace rosenthal3 {
inline constexpr const char* version() { return ROSENTHAL3_VERSION; }
}
