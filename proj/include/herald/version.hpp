#pragma once

namespace herald {

inline constexpr const char* kProgramName = "herald";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace herald
