#pragma once

namespace hso {
inline constexpr const char* kVersion = "0.1.0";
}
