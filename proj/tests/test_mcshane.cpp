#include "doctest.h"

#include <cmath>

#include "circval/mcshane.hpp"
#include "circval/random_gen.hpp"

using namespace circval;

TEST_CASE("data covering the full circle comes back unchanged") {
  McShaneDatum datum;
  datum.nodes = {{Rat(0), Rat(0)},
                 {rat(1, 4), Rat(1)},
                 {rat(1, 2), Rat(0)},
                 {Rat(1), Rat(0)}};
  const PLFunction ext = mcshane_extend(std::span(&datum, 1), rat(4));
  CHECK(ext == PLFunction::from_breakpoints(
                   {{Rat(0), Rat(0)}, {rat(1, 4), Rat(1)}, {rat(1, 2), Rat(0)}}));
}

TEST_CASE("single point extends to a cone") {
  McShaneDatum datum;
  datum.nodes = {{Rat(0), Rat(0)}};
  const Rat L(6);
  const PLFunction ext = mcshane_extend(std::span(&datum, 1), L);
  // s -> -L * min(s, 1-s)
  CHECK(ext.eval(Rat(0)) == 0);
  CHECK(ext.eval(rat(1, 2)) == -3);
  CHECK(ext.eval(rat(1, 4)) == rat(-3, 2));
  CHECK(ext.eval(rat(7, 8)) == rat(-3, 4));
}

TEST_CASE("two points against the brute-force cone envelope") {
  const Rat h(1);
  const Rat L(4);  // L >= 2h, a tent through both points exists
  std::vector<McShaneDatum> data(2);
  data[0].nodes = {{Rat(0), Rat(0)}};
  data[1].nodes = {{rat(1, 2), h}};
  const PLFunction ext = mcshane_extend(data, L);

  for (int k = 0; k < 512; ++k) {
    const Rat s = rat(k, 512);
    // envelope of the two cones, distances geodesic
    auto cone_value = [&](const Rat& p, const Rat& v) {
      const Rat d = mod1(s - p);
      const Rat geo = std::min(d, Rat(1 - d));
      return Rat(v - L * geo);
    };
    const Rat expected = std::max(cone_value(Rat(0), Rat(0)), cone_value(rat(1, 2), h));
    CHECK(ext.eval(s) == expected);
  }
}

TEST_CASE("restriction and cross-gap violations are rejected") {
  {
    McShaneDatum steep;
    steep.nodes = {{Rat(0), Rat(0)}, {rat(1, 8), Rat(2)}};  // slope 16
    CHECK_THROWS_AS(mcshane_extend(std::span(&steep, 1), rat(4)),
                    std::invalid_argument);
  }
  {
    std::vector<McShaneDatum> gap(2);
    gap[0].nodes = {{Rat(0), Rat(0)}};
    gap[1].nodes = {{rat(1, 2), Rat(10)}};
    CHECK_THROWS_AS(mcshane_extend(gap, rat(2)), std::invalid_argument);
  }
}

TEST_CASE("clamping") {
  std::vector<McShaneDatum> data(2);
  data[0].nodes = {{Rat(0), Rat(0)}};
  data[1].nodes = {{rat(1, 2), Rat(1)}};
  const Rat L(4);

  McShaneClamp clamp{PLFunction::constant(rat(-1, 4)), PLFunction::constant(Rat(2))};
  const PLFunction ext = mcshane_extend(data, L, clamp);
  CHECK(ext.eval(Rat(0)) == 0);
  CHECK(ext.eval(rat(1, 2)) == 1);
  const Arc everywhere(Rat(0), Rat(1));
  CHECK(pl_le_on_arc(clamp.lower, ext, everywhere));
  CHECK(pl_le_on_arc(ext, clamp.upper, everywhere));
  // the unclamped envelope dips to -1/2 at s = 7/8; the clamp holds it
  CHECK(ext.eval(rat(7, 8)) == rat(-1, 4));

  McShaneClamp infeasible{PLFunction::constant(rat(1, 2)),
                          PLFunction::constant(Rat(2))};
  CHECK_THROWS_AS(mcshane_extend(data, L, infeasible), std::invalid_argument);
}

TEST_CASE("sup-norm bound from the clamp of the lemma") {
  // with clamp g^- = g ^ 0 and g^+ = g v 0 the extension stays within |g|
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const PLFunction base = random_pl(rng, 8, 128, 4, 2);
    const FunctionNorms bn = norms(base);
    const Rat L = bn.lip_per_turn > 0 ? Rat(2 * bn.lip_per_turn) : Rat(1);
    const LatticePair parts = lattice(base, PLFunction::constant(Rat(0)));

    McShaneDatum datum;
    datum.nodes = {{rat(1, 8), base.eval(rat(1, 8))},
                   {rat(1, 4), base.eval(rat(1, 4))}};
    // interior breakpoints of base inside the arc keep the restriction PL
    std::vector<std::pair<Rat, Rat>> inner;
    for (const Breakpoint& bp : base.nodes())
      if (bp.s > rat(1, 8) && bp.s < rat(1, 4)) inner.emplace_back(bp.s, bp.v);
    for (const auto& [s, v] : inner)
      datum.nodes.insert(datum.nodes.end() - 1, {s, v});

    const PLFunction ext = mcshane_extend(
        std::span(&datum, 1), L, McShaneClamp{parts.meet, parts.join});
    CHECK(norms(ext).sup_norm <= bn.sup_norm);
    CHECK(norms(ext).lip_per_turn <= L);
    CHECK(ext.eval(rat(1, 8)) == base.eval(rat(1, 8)));
    CHECK(ext.eval(rat(1, 4)) == base.eval(rat(1, 4)));
  }
}
