#include "doctest.h"

#include "circval/random_gen.hpp"
#include "circval/serialization.hpp"

using namespace circval;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("3/4") == rat(3, 4));
  CHECK(parse_rat("-6/8") == rat(-3, 4));
  CHECK(parse_rat("5") == 5);
  CHECK(parse_rat("0.25") == rat(1, 4));
  CHECK(parse_rat("-1.5") == rat(-3, 2));
  CHECK(rat_str(rat(3, 1)) == "3/1");
  CHECK(rat_str(rat(-1, 2)) == "-1/2");
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/2/3"), std::invalid_argument);
}

TEST_CASE("plfunction JSON round trip") {
  const PLFunction c =
      parse_plfunction(R"({"breakpoints":[{"s":"0/1","v":"3/1"}]})");
  CHECK(c == PLFunction::constant(Rat(3)));

  Rng rng(61);
  for (int i = 0; i < 20; ++i) {
    const PLFunction f = random_pl(rng, 20);
    const std::string text = serialize_plfunction(f);
    CHECK(serialize_plfunction(parse_plfunction(text)) == text);
    CHECK(parse_plfunction(text) == f);
  }
}

TEST_CASE("plfunction parse errors carry the node index") {
  const std::string duplicated =
      R"({"breakpoints":[{"s":"0/1","v":"1/1"},{"s":"0/1","v":"2/1"}]})";
  CHECK_THROWS_WITH_AS(parse_plfunction(duplicated),
                       doctest::Contains("node 1"), std::invalid_argument);
  const std::string bad_rat =
      R"({"breakpoints":[{"s":"0/1","v":"1/1"},{"s":"x","v":"2/1"}]})";
  CHECK_THROWS_WITH_AS(parse_plfunction(bad_rat), doctest::Contains("node 1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_plfunction("not json"), std::invalid_argument);
}

TEST_CASE("kernel spec JSON round trip") {
  const KernelSpec poly = make_polynomial_kernel({{1, 1, 0.5}, {0, 2, -2.0}});
  const KernelSpec poly2 = kernel_from_json(kernel_to_json(poly));
  CHECK(kernel_to_json(poly2) == kernel_to_json(poly));
  CHECK(poly2.eval(0.3, 1.7) == std::get<PolynomialKernel>(poly.form).terms[0].coeff * 0.3 * 1.7 +
                                    -2.0 * 1.7 * 1.7);

  const KernelSpec step = make_step_kernel(1.0, SlopeUnit::PerRadian);
  CHECK(kernel_to_json(kernel_from_json(kernel_to_json(step))) ==
        kernel_to_json(step));

  TabulatedKernel table;
  table.lambda_grid = {0.0, 1.0};
  table.gamma_grid = {0.0, 2.0};
  table.values = {{0.0, 1.0}, {0.0, 3.0}};
  const KernelSpec tab{table, SlopeUnit::PerTurn};
  CHECK(kernel_to_json(kernel_from_json(kernel_to_json(tab))) ==
        kernel_to_json(tab));

  CHECK_THROWS_AS(kernel_from_json({{"type", "mystery"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      kernel_from_json({{"type", "polynomial"},
                        {"coeffs", {{-1, 0, 1.0}}}}),
      std::invalid_argument);
}

TEST_CASE("deterministic double formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3) == format_double(1.0 / 3));
}
