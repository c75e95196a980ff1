#pragma once

namespace fellq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fellq
