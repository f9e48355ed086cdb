#include "circval/mcshane.hpp"

#include <algorithm>
#include <stdexcept>

namespace circval {

namespace {

Rat circle_distance(const Rat& p, const Rat& q) {
  const Rat d = mod1(p - q);
  return std::min(d, Rat(Rat(1) - d));
}

PLFunction cone(const Rat& s, const Rat& v, const Rat& L) {
  if (L == 0) return PLFunction::constant(v);
  std::vector<Breakpoint> nodes{{mod1(s), v}, {mod1(s + rat(1, 2)), v - L / 2}};
  if (nodes[1].s < nodes[0].s) std::swap(nodes[0], nodes[1]);
  return PLFunction::from_breakpoints(std::move(nodes));
}

struct Piece {
  std::vector<Breakpoint> nodes;  // lifted abscissae, first in [0,1)
  Rat start, end;                 // lifted, end - start = span in [0,1]
  Rat value_at(const Rat& lifted_s) const {
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (lifted_s <= nodes[i + 1].s) {
        const Breakpoint& a = nodes[i];
        const Breakpoint& b = nodes[i + 1];
        if (lifted_s == a.s) return a.v;
        return a.v + (b.v - a.v) * (lifted_s - a.s) / (b.s - a.s);
      }
    }
    return nodes.back().v;
  }
};

}  // namespace

PLFunction mcshane_extend(std::span<const McShaneDatum> data, const Rat& L,
                          const std::optional<McShaneClamp>& clamp) {
  if (L < 0) throw std::invalid_argument("Lipschitz bound must be >= 0");
  if (data.empty()) throw std::invalid_argument("no data to extend");

  std::vector<Piece> pieces;
  for (const McShaneDatum& datum : data) {
    if (datum.nodes.empty()) throw std::invalid_argument("empty data piece");
    Piece piece;
    piece.nodes = datum.nodes;
    for (size_t i = 1; i < piece.nodes.size(); ++i) {
      if (piece.nodes[i].s <= piece.nodes[i - 1].s)
        throw std::invalid_argument("data piece abscissae not increasing");
    }
    const Rat span = piece.nodes.back().s - piece.nodes.front().s;
    if (span > 1) throw std::invalid_argument("data piece spans more than one turn");
    const Rat shift = piece.nodes.front().s - mod1(piece.nodes.front().s);
    for (Breakpoint& bp : piece.nodes) bp.s -= shift;
    piece.start = piece.nodes.front().s;
    piece.end = piece.nodes.back().s;
    // Restriction slopes must already satisfy the bound.
    for (size_t i = 1; i < piece.nodes.size(); ++i) {
      const Rat dv = abs(piece.nodes[i].v - piece.nodes[i - 1].v);
      const Rat ds = piece.nodes[i].s - piece.nodes[i - 1].s;
      if (dv > L * ds)
        throw std::invalid_argument("data restriction exceeds Lipschitz bound");
    }
    pieces.push_back(std::move(piece));
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.start < y.start; });
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i + 1].start < pieces[i].end)
      throw std::invalid_argument("data pieces overlap");
  }
  if (pieces.size() > 1 && pieces.back().end > pieces.front().start + 1)
    throw std::invalid_argument("data pieces overlap");

  // Feasibility is a finite check: Lipschitz violations of PL data are
  // attained at node pairs or at a node paired with its antipode.
  std::vector<Breakpoint> candidates;
  for (const Piece& piece : pieces)
    for (const Breakpoint& bp : piece.nodes)
      candidates.push_back({mod1(bp.s), bp.v});
  const size_t node_count = candidates.size();
  for (size_t i = 0; i < node_count; ++i) {
    const Rat antipode = mod1(candidates[i].s + rat(1, 2));
    for (const Piece& piece : pieces) {
      const Rat offset = mod1(antipode - piece.start);
      if (offset <= piece.end - piece.start) {
        candidates.push_back({antipode, piece.value_at(piece.start + offset)});
        break;
      }
    }
  }
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (abs(candidates[i].v - candidates[j].v) >
          L * circle_distance(candidates[i].s, candidates[j].s))
        throw std::invalid_argument(
            "no Lipschitz extension with this bound exists for the data");
    }
  }

  // Exact upper envelope of the data cones, then data spliced back in over
  // its own arcs (the envelope never exceeds the data there).
  PLFunction envelope = cone(candidates[0].s, candidates[0].v, L);
  for (size_t i = 1; i < node_count; ++i)
    envelope = lattice(envelope, cone(candidates[i].s, candidates[i].v, L)).join;

  std::vector<Breakpoint> out_nodes;
  for (size_t i = 0; i < pieces.size(); ++i) {
    for (const Breakpoint& bp : pieces[i].nodes) out_nodes.push_back(bp);
    const Rat gap_from = pieces[i].end;
    const Rat gap_to =
        (i + 1 < pieces.size()) ? pieces[i + 1].start : pieces[0].start + 1;
    const Rat gap_len = gap_to - gap_from;
    if (gap_len <= 0) continue;
    for (const Breakpoint& bp : envelope.nodes()) {
      const Rat offset = mod1(bp.s - gap_from);
      if (offset > 0 && offset < gap_len) out_nodes.push_back(bp);
    }
  }
  PLFunction result = pl_from_nodes(std::move(out_nodes));

  if (clamp) {
    if (norms(clamp->lower).lip_per_turn > L || norms(clamp->upper).lip_per_turn > L)
      throw std::invalid_argument("clamp bounds exceed the Lipschitz bound");
    for (const Breakpoint& bp : (clamp->upper - clamp->lower).nodes())
      if (bp.v < 0) throw std::invalid_argument("clamp bounds cross");
    for (const Piece& piece : pieces) {
      if (piece.end == piece.start) {
        const Rat v = piece.nodes.front().v;
        if (clamp->lower.eval(piece.start) > v || clamp->upper.eval(piece.start) < v)
          throw std::invalid_argument("clamp infeasible on the data");
      } else {
        const Arc arc(piece.start, piece.end);
        if (!pl_le_on_arc(clamp->lower, result, arc) ||
            !pl_le_on_arc(result, clamp->upper, arc))
          throw std::invalid_argument("clamp infeasible on the data");
      }
    }
    result = lattice(lattice(result, clamp->lower).join, clamp->upper).meet;
  }
  return result;
}

}  // namespace circval
