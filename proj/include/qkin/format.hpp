#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace qkin {

// Every number this project writes uses 12 significant digits.
inline std::string fmt12(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// The double nearest to fmt12(value); JSON writers emit it in <= 12 digits.
inline double round12(double value) { return std::strtod(fmt12(value).c_str(), nullptr); }

}  // namespace qkin
