#pragma once

#include <string>

namespace ptbench {

// The one number format used by every text output ("%.12g", 12 significant
// digits), so repeated runs serialize byte-identically.
std::string fmt12(double v);

} // namespace ptbench
