#pragma once

namespace bellchain {

inline constexpr const char* kVersion = "0.1.0";

}
