#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opalg/ratmat.hpp"

using namespace opalg;

TEST_CASE("rational parsing and printing") {
  CHECK(rat_to_string(rat_from_string("3/10")) == "3/10");
  CHECK(rat_to_string(rat_from_string("4/8")) == "1/2");
  CHECK(rat_to_string(rat_from_string("2")) == "2/1");
  CHECK(rat_from_string("0/5") == 0);
  CHECK_THROWS_AS(rat_from_string("x/2"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string(""), std::invalid_argument);
}

TEST_CASE("doubles convert exactly") {
  CHECK(rat_from_double(0.5) == Rat(1, 2));
  CHECK(rat_from_double(0.25 + 0.5) == Rat(3, 4));
  CHECK(rat_from_double(-1.75) == Rat(-7, 4));
  CHECK(rat_from_double(0.0) == 0);
  // 0.1 is not a dyadic rational; conversion is still exact.
  CHECK(to_double(rat_from_double(0.1)) == 0.1);
  CHECK(round_to_grid(0.1000000001, 10) == Rat(1, 10));
}

TEST_CASE("rank, kernel, solve") {
  RatMat a = {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
  CHECK(rank(a) == 2);
  const RatMat k = kernel_basis(a, 3);
  REQUIRE(k.size() == 1);
  for (const auto& row : a) CHECK(dot(row, k[0]) == 0);

  auto x = solve_linear({{1, 1}, {1, -1}}, {Rat(3), Rat(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);

  CHECK(!solve_linear({{1, 1}, {1, 1}}, {Rat(1), Rat(2)}).has_value());
}

TEST_CASE("inverse") {
  const RatMat m = {{2, 1}, {1, 1}};
  const auto inv = invert(m);
  REQUIRE(inv.has_value());
  CHECK((*inv)[0][0] == 1);
  CHECK((*inv)[0][1] == -1);
  CHECK((*inv)[1][0] == -1);
  CHECK((*inv)[1][1] == 2);
  CHECK(!invert({{1, 2}, {2, 4}}).has_value());
}

TEST_CASE("primitive vectors") {
  const RatVec v = {Rat(1, 2), Rat(-1, 3)};
  CHECK(primitive(v) == RatVec{Rat(3), Rat(-2)});
  CHECK(primitive(v, true) == RatVec{Rat(3), Rat(-2)});
  const RatVec w = {Rat(0), Rat(-2, 7)};
  CHECK(primitive(w, true) == RatVec{Rat(0), Rat(1)});
}
