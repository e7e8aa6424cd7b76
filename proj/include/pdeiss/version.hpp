#pragma once

namespace pdeiss {
inline constexpr const char* kVersion = "0.1.0";
}
