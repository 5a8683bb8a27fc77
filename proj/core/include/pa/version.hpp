#pragma once

namespace pa {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pa
