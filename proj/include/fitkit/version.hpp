#pragma once

namespace fitkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fitkit
