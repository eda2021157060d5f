#pragma once

namespace priornet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace priornet
