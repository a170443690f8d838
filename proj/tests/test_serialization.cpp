#include "doctest.h"

#include "diffgeo/sampling.hpp"
#include "diffgeo/serialization.hpp"

using namespace diffgeo;

TEST_CASE("GridFunction JSON form and round trip") {
  GridFunction g = grid_sampled(16, [](double x) { return x * x; });
  json j = to_json(g);
  CHECK(j.contains("n"));
  CHECK(j.contains("values"));
  CHECK(!j.contains("derivs"));
  GridFunction back = grid_from_json(j);
  CHECK(back.values == g.values);
  CHECK(to_json(back).dump() == j.dump());

  GridFunction withrows = grid_from_smooth(SmoothFunction::linear(2.0), 8, 2);
  GridFunction back2 = grid_from_json(to_json(withrows));
  CHECK(back2.derivs == withrows.derivs);
}

TEST_CASE("IntervalDiffeo round trips byte-identically") {
  IntervalDiffeo f = from_family("exp", {3.0}, 2, 64);
  json j = to_json(f);
  CHECK(j.at("manifold") == "interval");
  std::string first = j.dump(2);
  IntervalDiffeo back = interval_from_json(j);
  CHECK(to_json(back).dump(2) == first);
  CHECK(back.family == "exp");
  CHECK(back.jets == f.jets);
}

TEST_CASE("CircleDiffeo round trips and manifold dispatch errors") {
  CircleDiffeo f = cosine_circle(0.4, 0.3, 2, 64);
  json j = to_json(f);
  CHECK(j.at("manifold") == "circle");
  CircleDiffeo back = circle_from_json(j);
  CHECK(back.lift_jets == f.lift_jets);
  CHECK_THROWS_AS(interval_from_json(j), std::invalid_argument);
}

TEST_CASE("PhiCoords JSON form") {
  IntervalDiffeo f = from_family("mobius", {0.5}, 3, 64);
  PhiCoords c = Phi(f, 3);
  json j = to_json(c);
  CHECK(j.at("order") == 3);
  CHECK(j.at("initial_values").size() == 1);
  CHECK(j.at("head").at("n") == 64);
}

TEST_CASE("fmt_double produces shortest round-trip forms") {
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(3.0) == "3");
  CHECK(fmt_double(3.0 / 7.0) == "0.42857142857142855");
}
