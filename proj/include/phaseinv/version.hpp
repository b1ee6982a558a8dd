#pragma once

namespace phaseinv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace phaseinv
