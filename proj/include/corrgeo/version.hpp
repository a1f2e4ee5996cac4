#pragma once

namespace corrgeo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace corrgeo
