#pragma once

namespace ifsc {
inline constexpr const char* kVersion = "0.1.0";
}
