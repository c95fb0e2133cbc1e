#pragma once

#include <string>

namespace anticip {

// A double printed with 17 significant digits (round-trip exact),
// independent of the locale. Non-finite values print as nan, inf, -inf.
std::string format_double(double value);

}  // namespace anticip
