#pragma once

namespace dmlrn {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolkitName = "dmlrn";

}  // namespace dmlrn
