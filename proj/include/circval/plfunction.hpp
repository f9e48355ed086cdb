#pragma once

#include <optional>
#include <span>
#include <vector>

#include "circval/arcs.hpp"
#include "circval/rational.hpp"

namespace circval {

struct Breakpoint {
  Rat s;  // turn coordinate in [0,1)
  Rat v;
  bool operator==(const Breakpoint&) const = default;
};

// Piecewise linear function on the circle, parametrized by turns
// (t = 2*pi*s). Breakpoints are strictly increasing in [0,1); between
// consecutive nodes the function interpolates linearly, wrapping from the
// last node back to the first. Canonical form: no node is collinear with
// its circular neighbours, and constants anchor their single node at s=0.
class PLFunction {
 public:
  static PLFunction constant(const Rat& c);
  /// Validates, sorts nothing (input must be strictly increasing in [0,1)),
  /// and canonicalizes. Throws std::invalid_argument on duplicate or
  /// out-of-range abscissae.
  static PLFunction from_breakpoints(std::vector<Breakpoint> nodes);

  const std::vector<Breakpoint>& nodes() const { return nodes_; }
  bool is_constant() const { return nodes_.size() == 1; }

  Rat eval(const Rat& s) const;

  // One derivative segment per node: the arc (s_i, s_{i+1}] with the slope
  // of f on it, in value-per-turn units. The segments partition the circle.
  struct Segment {
    Rat s_begin, s_end;  // lifted: s_end may exceed 1 on the wrap segment
    Rat v_begin, v_end;
    Rat slope;           // per turn
    Rat length() const { return s_end - s_begin; }
    Arc arc() const { return Arc(s_begin, s_end); }
  };
  std::vector<Segment> segments() const;

  PLFunction scaled(const Rat& a) const;
  PLFunction shifted(const Rat& c) const;
  PLFunction rotated(const Rat& theta) const;   // s -> f(s - theta)
  PLFunction reflected() const;                 // s -> f(1 - s)

  friend PLFunction operator+(const PLFunction& f, const PLFunction& g);
  friend PLFunction operator-(const PLFunction& f, const PLFunction& g);

  bool operator==(const PLFunction& other) const { return nodes_ == other.nodes_; }

 private:
  PLFunction() = default;
  std::vector<Breakpoint> nodes_;
};

PLFunction affine(const PLFunction& f, const Rat& a, const Rat& c);

/// from_breakpoints after reducing abscissae mod 1 and sorting; exact
/// duplicate nodes are fused (conflicting values are an error).
PLFunction pl_from_nodes(std::vector<Breakpoint> nodes);

struct LatticePair {
  PLFunction join;
  PLFunction meet;
};
LatticePair lattice(const PLFunction& f, const PLFunction& g);

struct FunctionNorms {
  Rat sup_norm;
  Rat lip_per_turn;
};
FunctionNorms norms(const PLFunction& f);

/// d_tau(f,g) = sup|f-g| + integral |f'-g'| dH^1, slopes per turn, exact.
Rat d_tau(const PLFunction& f, const PLFunction& g);

/// The unique m with H^1{f>=m} >= 1/2 and H^1{f<=m} >= 1/2.
Rat median(const PLFunction& f);

enum class LevelRel { Ge, Le, Eq };
Rat level_measure(const PLFunction& f, LevelRel rel, const Rat& c);

/// Closure of {f != 0}. The returned arcs denote their closures.
ArcSet support(const PLFunction& f);

/// supp(f) contained in the closure of A.
bool is_supported_in(const PLFunction& f, const ArcSet& set);

/// PL interpolant of values at the uniform grid k/n, k = 0..n-1.
PLFunction interpolate_samples(std::span<const Rat> values);

struct SymmetrizePair {
  PLFunction join_sym;
  PLFunction meet_sym;
};
/// (f v f(1-.), f ^ f(1-.)); both symmetric about s = 1/2 and their sum
/// equals f + f(1-.) exactly.
SymmetrizePair symmetrize(const PLFunction& f);

/// True iff f <= g pointwise on the (circular) arc, exact.
bool pl_le_on_arc(const PLFunction& f, const PLFunction& g, const Arc& arc);

}  // namespace circval
