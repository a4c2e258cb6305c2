#pragma once

namespace clmkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace clmkit
