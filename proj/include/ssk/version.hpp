#pragma once

namespace ssk {

inline constexpr const char* kToolVersion = "ssklab 0.1.0";

} // namespace ssk
