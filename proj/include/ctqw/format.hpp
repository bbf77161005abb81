#pragma once

#include <cstdio>
#include <string>

// Fixed numeric formatting shared by the CLI writers: 12 significant digits
// in scientific notation, '.' decimal separator. Identical flags must
// produce byte-identical files, so all numeric output funnels through here.

namespace ctqw {

inline std::string format_sig12(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

}  // namespace ctqw
