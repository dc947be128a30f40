#pragma once

namespace isinggof {

inline constexpr const char* kVersion = "0.1.0";

} // namespace isinggof
