#pragma once

#include <vector>

#include "circval/rational.hpp"

namespace circval {

// Half-open circular arc (a, b] in turn coordinates. Stored with
// 0 <= a < 1 and a < b <= a+1; b > 1 means the arc wraps past 0.
struct Arc {
  Rat a;
  Rat b;

  Arc(Rat a_, Rat b_);
  Rat length() const { return b - a; }
  bool wraps() const { return b > 1; }
  bool contains(const Rat& s) const;
};

// Finite union of pairwise disjoint arcs, sorted by left endpoint with
// touching arcs merged (including across the wrap point). H^1 is arc
// length in turns, so the full circle has measure 1.
class ArcSet {
 public:
  ArcSet() = default;
  static ArcSet empty() { return ArcSet(); }
  static ArcSet full_circle();
  /// Union of the given arcs, normalized (sorted, merged).
  static ArcSet from_arcs(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_empty() const { return arcs_.empty(); }
  bool is_full_circle() const;
  Rat h1() const;
  bool contains(const Rat& s) const;

 private:
  std::vector<Arc> arcs_;
};

/// Outer parallel band: points at positive geodesic distance < omega from A.
/// Arcs of the result are the half-open hulls of the (open) band components;
/// endpoint membership is not significant, the measure is exact.
ArcSet outer_band(const ArcSet& set, const Rat& omega);

}  // namespace circval
