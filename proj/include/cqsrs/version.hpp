#pragma once

namespace cqsrs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cqsrs
