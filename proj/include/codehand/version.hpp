#pragma once

namespace codehand {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace codehand
