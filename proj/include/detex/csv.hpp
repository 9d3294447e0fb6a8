// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>

namespace detex {

// All floating-point CSV fields use 12 significant digits.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_bool(bool v) { return v ? "1" : "0"; }

}  // namespace detex
