#pragma once

namespace pointint {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pointint
