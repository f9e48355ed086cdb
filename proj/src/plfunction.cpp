#include "circval/plfunction.hpp"

#include <algorithm>
#include <stdexcept>

namespace circval {

namespace {

// Sorts by abscissa, fuses exact duplicates (which must agree in value) and
// strips collinear nodes. Constants collapse to a single node anchored at 0.
std::vector<Breakpoint> canonical_nodes(std::vector<Breakpoint> nodes) {
  std::sort(nodes.begin(), nodes.end(),
            [](const Breakpoint& x, const Breakpoint& y) { return x.s < y.s; });
  std::vector<Breakpoint> unique;
  for (const Breakpoint& bp : nodes) {
    if (!unique.empty() && unique.back().s == bp.s) {
      if (unique.back().v != bp.v)
        throw std::invalid_argument("conflicting values at one abscissa");
      continue;
    }
    unique.push_back(bp);
  }
  nodes = std::move(unique);

  bool removed = true;
  while (removed && nodes.size() > 1) {
    removed = false;
    const size_t n = nodes.size();
    for (size_t i = 0; i < n; ++i) {
      const Breakpoint& prev = nodes[(i + n - 1) % n];
      const Breakpoint& cur = nodes[i];
      const Breakpoint& next = nodes[(i + 1) % n];
      Rat ds_in = cur.s - prev.s;
      if (ds_in <= 0) ds_in += 1;
      Rat ds_out = next.s - cur.s;
      if (ds_out <= 0) ds_out += 1;
      if ((cur.v - prev.v) * ds_out == (next.v - cur.v) * ds_in) {
        nodes.erase(nodes.begin() + static_cast<long>(i));
        removed = true;
        break;
      }
    }
  }
  if (nodes.size() == 1) nodes[0].s = 0;
  return nodes;
}

}  // namespace

PLFunction PLFunction::constant(const Rat& c) {
  PLFunction f;
  f.nodes_ = {Breakpoint{Rat(0), c}};
  return f;
}

PLFunction PLFunction::from_breakpoints(std::vector<Breakpoint> nodes) {
  if (nodes.empty()) throw std::invalid_argument("at least one breakpoint required");
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].s < 0 || nodes[i].s >= 1)
      throw std::invalid_argument("node " + std::to_string(i) +
                                  ": abscissa out of [0,1)");
    if (i > 0 && nodes[i].s == nodes[i - 1].s)
      throw std::invalid_argument("node " + std::to_string(i) +
                                  ": duplicate abscissa");
    if (i > 0 && nodes[i].s < nodes[i - 1].s)
      throw std::invalid_argument("node " + std::to_string(i) +
                                  ": abscissae not increasing");
  }
  PLFunction f;
  f.nodes_ = canonical_nodes(std::move(nodes));
  return f;
}

namespace {

// Internal constructor for node lists that are valid by construction
// (canonicalizes, tolerating unsorted input and exact duplicates).
PLFunction make_pl(std::vector<Breakpoint> nodes) {
  std::vector<Breakpoint> reduced;
  reduced.reserve(nodes.size());
  for (Breakpoint& bp : nodes) reduced.push_back({mod1(bp.s), std::move(bp.v)});
  std::sort(reduced.begin(), reduced.end(),
            [](const Breakpoint& x, const Breakpoint& y) { return x.s < y.s; });
  return PLFunction::from_breakpoints(canonical_nodes(std::move(reduced)));
}

}  // namespace

Rat PLFunction::eval(const Rat& s) const {
  const Rat s0 = mod1(s);
  const size_t n = nodes_.size();
  if (n == 1) return nodes_[0].v;

  size_t i;
  Rat x = s0;
  if (s0 < nodes_[0].s) {
    i = n - 1;
    x = s0 + 1;
  } else {
    i = static_cast<size_t>(
            std::upper_bound(nodes_.begin(), nodes_.end(), s0,
                             [](const Rat& val, const Breakpoint& bp) {
                               return val < bp.s;
                             }) -
            nodes_.begin()) -
        1;
  }
  const Breakpoint& a = nodes_[i];
  const Rat bs = (i + 1 < n) ? nodes_[i + 1].s : nodes_[0].s + 1;
  const Rat& bv = (i + 1 < n) ? nodes_[i + 1].v : nodes_[0].v;
  if (x == a.s) return a.v;
  return a.v + (bv - a.v) * (x - a.s) / (bs - a.s);
}

std::vector<PLFunction::Segment> PLFunction::segments() const {
  std::vector<Segment> segs;
  const size_t n = nodes_.size();
  if (n == 1) {
    segs.push_back({nodes_[0].s, nodes_[0].s + 1, nodes_[0].v, nodes_[0].v, Rat(0)});
    return segs;
  }
  segs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Breakpoint& a = nodes_[i];
    const Rat bs = (i + 1 < n) ? nodes_[i + 1].s : nodes_[0].s + 1;
    const Rat& bv = (i + 1 < n) ? nodes_[i + 1].v : nodes_[0].v;
    segs.push_back({a.s, bs, a.v, bv, (bv - a.v) / (bs - a.s)});
  }
  return segs;
}

PLFunction PLFunction::scaled(const Rat& a) const {
  std::vector<Breakpoint> nodes = nodes_;
  for (Breakpoint& bp : nodes) bp.v *= a;
  return make_pl(std::move(nodes));
}

PLFunction PLFunction::shifted(const Rat& c) const {
  std::vector<Breakpoint> nodes = nodes_;
  for (Breakpoint& bp : nodes) bp.v += c;
  PLFunction f;
  f.nodes_ = std::move(nodes);  // shifting preserves canonical form
  return f;
}

PLFunction PLFunction::rotated(const Rat& theta) const {
  if (is_constant()) return *this;
  std::vector<Breakpoint> nodes = nodes_;
  for (Breakpoint& bp : nodes) bp.s = mod1(bp.s + theta);
  return make_pl(std::move(nodes));
}

PLFunction PLFunction::reflected() const {
  if (is_constant()) return *this;
  std::vector<Breakpoint> nodes = nodes_;
  for (Breakpoint& bp : nodes) bp.s = mod1(Rat(1) - bp.s);
  return make_pl(std::move(nodes));
}

PLFunction affine(const PLFunction& f, const Rat& a, const Rat& c) {
  return f.scaled(a).shifted(c);
}

PLFunction pl_from_nodes(std::vector<Breakpoint> nodes) {
  return make_pl(std::move(nodes));
}

namespace {

std::vector<Rat> merged_abscissae(const PLFunction& f, const PLFunction& g) {
  std::vector<Rat> xs;
  xs.reserve(f.nodes().size() + g.nodes().size());
  for (const Breakpoint& bp : f.nodes()) xs.push_back(bp.s);
  for (const Breakpoint& bp : g.nodes()) xs.push_back(bp.s);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

PLFunction operator+(const PLFunction& f, const PLFunction& g) {
  std::vector<Breakpoint> nodes;
  for (const Rat& x : merged_abscissae(f, g))
    nodes.push_back({x, f.eval(x) + g.eval(x)});
  return make_pl(std::move(nodes));
}

PLFunction operator-(const PLFunction& f, const PLFunction& g) {
  std::vector<Breakpoint> nodes;
  for (const Rat& x : merged_abscissae(f, g))
    nodes.push_back({x, f.eval(x) - g.eval(x)});
  return make_pl(std::move(nodes));
}

LatticePair lattice(const PLFunction& f, const PLFunction& g) {
  const std::vector<Rat> partition = merged_abscissae(f, g);
  std::vector<Rat> points = partition;
  const size_t n = partition.size();
  for (size_t i = 0; i < n; ++i) {
    const Rat x0 = partition[i];
    const Rat x1 = (i + 1 < n) ? partition[i + 1] : partition[0] + 1;
    const Rat d0 = f.eval(x0) - g.eval(x0);
    const Rat d1 = f.eval(x1) - g.eval(x1);
    // Strict sign change inside the piece: exact crossing abscissa.
    if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0))
      points.push_back(mod1(x0 + (x1 - x0) * d0 / (d0 - d1)));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<Breakpoint> join_nodes, meet_nodes;
  join_nodes.reserve(points.size());
  meet_nodes.reserve(points.size());
  for (const Rat& x : points) {
    const Rat fv = f.eval(x);
    const Rat gv = g.eval(x);
    join_nodes.push_back({x, std::max(fv, gv)});
    meet_nodes.push_back({x, std::min(fv, gv)});
  }
  return {make_pl(std::move(join_nodes)), make_pl(std::move(meet_nodes))};
}

FunctionNorms norms(const PLFunction& f) {
  Rat sup(0);
  for (const Breakpoint& bp : f.nodes()) sup = std::max(sup, Rat(abs(bp.v)));
  Rat lip(0);
  for (const auto& seg : f.segments()) lip = std::max(lip, Rat(abs(seg.slope)));
  return {sup, lip};
}

Rat d_tau(const PLFunction& f, const PLFunction& g) {
  const PLFunction h = f - g;
  Rat sup(0);
  for (const Breakpoint& bp : h.nodes()) sup = std::max(sup, Rat(abs(bp.v)));
  Rat grad(0);
  for (const auto& seg : h.segments()) grad += abs(seg.slope) * seg.length();
  return sup + grad;
}

Rat level_measure(const PLFunction& f, LevelRel rel, const Rat& c) {
  Rat total(0);
  for (const auto& seg : f.segments()) {
    if (seg.slope == 0) {
      const bool in = rel == LevelRel::Ge   ? seg.v_begin >= c
                      : rel == LevelRel::Le ? seg.v_begin <= c
                                            : seg.v_begin == c;
      if (in) total += seg.length();
      continue;
    }
    if (rel == LevelRel::Eq) continue;  // finite preimage on sloped pieces
    const Rat& v0 = seg.v_begin;
    const Rat& v1 = seg.v_end;
    Rat fraction;  // of the piece lying in the requested region
    if (rel == LevelRel::Ge)
      fraction = (v1 > v0) ? (v1 - c) / (v1 - v0) : (v0 - c) / (v0 - v1);
    else
      fraction = (v1 > v0) ? (c - v0) / (v1 - v0) : (c - v1) / (v0 - v1);
    fraction = std::min(Rat(1), std::max(Rat(0), fraction));
    total += fraction * seg.length();
  }
  return total;
}

Rat median(const PLFunction& f) {
  if (f.is_constant()) return f.nodes()[0].v;

  std::vector<Rat> values;
  for (const Breakpoint& bp : f.nodes()) values.push_back(bp.v);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const Rat half(1, 2);
  for (size_t j = 0; j < values.size(); ++j) {
    const Rat at_most = level_measure(f, LevelRel::Le, values[j]);
    if (at_most < half) continue;
    const Rat strictly_below =
        at_most - level_measure(f, LevelRel::Eq, values[j]);
    if (strictly_below <= half) return values[j];

    // The sublevel measure crosses 1/2 strictly between node values; it is
    // affine in c there, so solve A + B*c = 1/2 exactly.
    const Rat& lo = values[j - 1];
    const Rat& hi = values[j];
    Rat A(0), B(0);
    for (const auto& seg : f.segments()) {
      const Rat vlo = std::min(seg.v_begin, seg.v_end);
      const Rat vhi = std::max(seg.v_begin, seg.v_end);
      if (seg.slope == 0) {
        if (vlo <= lo) A += seg.length();
      } else if (vhi <= lo) {
        A += seg.length();
      } else if (vlo < hi) {  // spans the whole bracket
        A -= seg.length() * vlo / (vhi - vlo);
        B += seg.length() / (vhi - vlo);
      }
    }
    return (half - A) / B;
  }
  // Unreachable: the sublevel measure reaches 1 at the maximum value.
  throw std::logic_error("median bracket not found");
}

ArcSet support(const PLFunction& f) {
  const auto segs = f.segments();
  const size_t n = segs.size();
  std::vector<bool> zero(n);
  size_t zero_count = 0;
  for (size_t i = 0; i < n; ++i) {
    zero[i] = segs[i].slope == 0 && segs[i].v_begin == 0;
    zero_count += zero[i];
  }
  if (zero_count == n) return ArcSet::empty();
  if (zero_count == 0) return ArcSet::full_circle();

  // Maximal circular runs of zero segments; f vanishes on their closures.
  struct Run {
    Rat lo, hi;  // circle points, closed zero stretch [lo, hi]
  };
  std::vector<Run> runs;
  size_t start = 0;
  while (zero[start]) start = (start + 1) % n;  // a nonzero segment exists
  size_t i = start;
  do {
    if (zero[i]) {
      size_t j = i;
      while (zero[(j + 1) % n]) j = (j + 1) % n;
      runs.push_back({mod1(segs[i].s_begin), mod1(segs[j].s_end)});
      i = (j + 1) % n;
    } else {
      i = (i + 1) % n;
    }
  } while (i != start);

  std::sort(runs.begin(), runs.end(),
            [](const Run& x, const Run& y) { return x.lo < y.lo; });
  std::vector<Arc> arcs;
  for (size_t r = 0; r < runs.size(); ++r) {
    const Rat from = runs[r].hi;
    const Rat to = runs[(r + 1) % runs.size()].lo;
    Rat len = mod1(to - from);
    if (len == 0) len = 1;
    arcs.emplace_back(from, from + len);
  }
  return ArcSet::from_arcs(std::move(arcs));
}

bool is_supported_in(const PLFunction& f, const ArcSet& set) {
  const ArcSet supp = support(f);
  if (supp.is_empty()) return true;
  if (set.is_full_circle()) return true;
  if (supp.is_full_circle()) return false;
  for (const Arc& s : supp.arcs()) {
    bool covered = false;
    for (const Arc& c : set.arcs()) {
      const Rat offset = mod1(s.a - c.a);
      if (offset + s.length() <= c.length()) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

PLFunction interpolate_samples(std::span<const Rat> values) {
  if (values.empty()) throw std::invalid_argument("need at least one sample");
  const long n = static_cast<long>(values.size());
  std::vector<Breakpoint> nodes;
  nodes.reserve(values.size());
  for (long k = 0; k < n; ++k) nodes.push_back({rat(k, n), values[k]});
  return make_pl(std::move(nodes));
}

SymmetrizePair symmetrize(const PLFunction& f) {
  const LatticePair pair = lattice(f, f.reflected());
  return {pair.join, pair.meet};
}

bool pl_le_on_arc(const PLFunction& f, const PLFunction& g, const Arc& arc) {
  const PLFunction h = g - f;
  if (h.eval(arc.a) < 0 || h.eval(arc.b) < 0) return false;
  for (const Breakpoint& bp : h.nodes())
    if (arc.contains(bp.s) && bp.v < 0) return false;
  return true;
}

}  // namespace circval
