#pragma once

namespace helix {
inline constexpr const char* kVersion = "0.1.0";
}
