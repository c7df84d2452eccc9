#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ftcausal {

// Exact probabilities. mpq_class keeps values canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

// Accepts "num/den" or a bare integer. Decimal notation is rejected rather
// than rounded.
Rational parse_rational(std::string_view text);

// Serialisation form, always "num/den" (e.g. "1/1", "0/1", "-3/4").
std::string to_fraction_string(const Rational& q);

// Compact display form ("1/2", "0", "-3").
std::string to_display_string(const Rational& q);

}  // namespace ftcausal
