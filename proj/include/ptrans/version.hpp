#pragma once

namespace ptrans {

inline constexpr const char* kVersion = "0.1.0";

}
