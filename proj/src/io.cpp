#include "carfollow/io.hpp"

#include <cstdio>

namespace carfollow {

std::string format_g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

}  // namespace carfollow
