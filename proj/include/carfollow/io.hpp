#pragma once

#include <string>

namespace carfollow {

/// Fixed 9-significant-digit float formatting shared by every CSV emitter.
std::string format_g9(double value);

}  // namespace carfollow
