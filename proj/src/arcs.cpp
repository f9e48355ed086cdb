#include "circval/arcs.hpp"

#include <algorithm>
#include <stdexcept>

namespace circval {

Arc::Arc(Rat a_, Rat b_) {
  const Rat len = b_ - a_;
  if (len <= 0 || len > 1) throw std::invalid_argument("arc length must be in (0,1]");
  a = mod1(a_);
  b = a + len;
}

bool Arc::contains(const Rat& s) const {
  const Rat s0 = mod1(s);
  if (s0 > a && s0 <= b) return true;
  const Rat s1 = s0 + 1;
  return s1 > a && s1 <= b;
}

ArcSet ArcSet::full_circle() {
  ArcSet set;
  set.arcs_.emplace_back(Rat(0), Rat(1));
  return set;
}

bool ArcSet::is_full_circle() const {
  return arcs_.size() == 1 && arcs_.front().length() == 1;
}

Rat ArcSet::h1() const {
  Rat total(0);
  for (const Arc& arc : arcs_) total += arc.length();
  return total;
}

bool ArcSet::contains(const Rat& s) const {
  return std::any_of(arcs_.begin(), arcs_.end(),
                     [&](const Arc& arc) { return arc.contains(s); });
}

ArcSet ArcSet::from_arcs(std::vector<Arc> input) {
  if (input.empty()) return ArcSet();

  // Cut wrapping arcs at 0 so every piece is a sub-interval of (0,1].
  struct Piece {
    Rat lo, hi;  // (lo, hi], 0 <= lo < hi <= 1
  };
  std::vector<Piece> pieces;
  for (const Arc& arc : input) {
    if (arc.wraps()) {
      pieces.push_back({arc.a, Rat(1)});
      pieces.push_back({Rat(0), arc.b - 1});
    } else {
      pieces.push_back({arc.a, arc.b});
    }
  }

  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  std::vector<Piece> merged;
  for (const Piece& p : pieces) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }

  ArcSet set;
  if (merged.size() == 1 && merged[0].lo == 0 && merged[0].hi == 1) {
    return full_circle();
  }
  // Re-join the two sides of the wrap point into a single wrapping arc.
  if (merged.size() >= 2 && merged.front().lo == 0 && merged.back().hi == 1) {
    const Piece head = merged.front();
    Piece& tail = merged.back();
    tail.hi = 1 + head.hi;
    merged.erase(merged.begin());
  }
  for (const Piece& p : merged) set.arcs_.emplace_back(p.lo, p.hi);
  return set;
}

ArcSet outer_band(const ArcSet& set, const Rat& omega) {
  if (omega <= 0) throw std::invalid_argument("outer_band requires omega > 0");
  if (set.is_empty() || set.is_full_circle()) return ArcSet::empty();

  const auto& arcs = set.arcs();
  const size_t k = arcs.size();
  std::vector<Arc> band;
  for (size_t i = 0; i < k; ++i) {
    // Gap between the end of arc i and the start of the circular successor.
    const Rat gap_lo = arcs[i].b;
    const Rat gap_hi = (i + 1 < k) ? arcs[i + 1].a : arcs[0].a + 1;
    const Rat gap = gap_hi - gap_lo;
    const Rat reach = std::min(omega, gap);
    if (2 * reach >= gap) {
      band.emplace_back(gap_lo, gap_hi);
    } else {
      band.emplace_back(gap_lo, gap_lo + reach);
      band.emplace_back(gap_hi - reach, gap_hi);
    }
  }
  return ArcSet::from_arcs(std::move(band));
}

}  // namespace circval
