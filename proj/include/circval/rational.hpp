#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace circval {

// Exact rational scalar. All circle geometry is carried out in these;
// doubles appear only at valuation-evaluation boundaries.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

/// Largest integer <= r.
Rat rat_floor(const Rat& r);

/// r reduced into [0,1), i.e. r - floor(r).
Rat mod1(const Rat& r);

/// Canonical "p/q" text (always carries the denominator, e.g. "3/1").
std::string rat_str(const Rat& r);

/// Parses "p/q", "p", or a plain decimal such as "-0.25". Throws
/// std::invalid_argument on malformed input or zero denominator.
Rat parse_rat(std::string_view text);

}  // namespace circval
