#include <cmath>
#include <random>

#include "bsrd/error.hpp"
#include "bsrd/params.hpp"
#include "doctest.h"

using namespace bsrd;

TEST_SUITE("params") {

TEST_CASE("unit scales give unit constants") {
  const NondimensionalResult r = nondimensionalize(DimensionalParameters{});
  CHECK(r.params.delta_omega == 1.0);
  CHECK(r.params.delta_gamma == 1.0);
  CHECK(r.params.delta_gamma_p == 1.0);
  CHECK(r.params.delta_k == 1.0);
  CHECK(r.params.delta_kp == 1.0);
  CHECK(r.gamma == 1.0);
  CHECK(r.gamma_p == 1.0);
}

TEST_CASE("hand-evaluated conversions") {
  DimensionalParameters d;
  d.D_L = 2.0;
  d.L = 2.0;
  d.S = 2.0;
  CHECK(nondimensionalize(d).params.delta_omega == doctest::Approx(1.0).epsilon(1e-15));

  d = DimensionalParameters{};
  d.k_off = 0.5;
  d.S = 4.0;
  CHECK(nondimensionalize(d).params.delta_kp == doctest::Approx(0.5).epsilon(1e-15));

  d = DimensionalParameters{};
  d.U = 2.0;
  d.S = 5.0;
  d.k_on = 0.1;
  CHECK(nondimensionalize(d).params.delta_k == doctest::Approx(1.0).epsilon(1e-15));

  d = DimensionalParameters{};
  d.L = 3.0;
  d.U = 2.0;
  d.W = 4.0;
  d.Z = 0.5;
  const auto r = nondimensionalize(d);
  CHECK(r.gamma == doctest::Approx(1.5));
  CHECK(r.gamma_p == doctest::Approx(12.0));
}

TEST_CASE("validation names the offending field") {
  SystemParameters p;
  CHECK_NOTHROW(validate(p));
  p.delta_k = 0.0;
  CHECK_THROWS_WITH_AS(validate(p), "delta_k must be positive", ValidationError);
  p = SystemParameters{};
  p.delta_omega = -1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);

  DimensionalParameters d;
  d.k_on = -2.0;
  CHECK_THROWS_WITH_AS(nondimensionalize(d), doctest::Contains("k_on"), ValidationError);
  d = DimensionalParameters{};
  d.Z = 0.0;
  CHECK_THROWS_WITH_AS(nondimensionalize(d), doctest::Contains("Z"), ValidationError);
}

TEST_CASE("diffusivities are invariant under L -> cL, S -> c^2 S") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  for (int k = 0; k < 200; ++k) {
    DimensionalParameters d{pos(rng), pos(rng), pos(rng), pos(rng), pos(rng),
                            pos(rng), pos(rng), pos(rng), pos(rng), pos(rng)};
    const double c = pos(rng);
    DimensionalParameters e = d;
    e.L *= c;
    e.S *= c * c;
    const auto a = nondimensionalize(d).params;
    const auto b = nondimensionalize(e).params;
    CHECK(b.delta_omega == doctest::Approx(a.delta_omega).epsilon(1e-14));
    CHECK(b.delta_gamma == doctest::Approx(a.delta_gamma).epsilon(1e-14));
    CHECK(b.delta_gamma_p == doctest::Approx(a.delta_gamma_p).epsilon(1e-14));
  }
}

TEST_CASE("redimensionalize inverts nondimensionalize") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logv(-6.0, 6.0);
  auto draw = [&] { return std::exp(logv(rng)); };
  for (int k = 0; k < 500; ++k) {
    DimensionalParameters d{draw(), draw(), draw(), draw(), draw(),
                            draw(), draw(), draw(), draw(), draw()};
    const DimensionalParameters back = redimensionalize(nondimensionalize(d).params, d);
    CHECK(std::abs(back.D_L / d.D_L - 1.0) <= 1e-12);
    CHECK(std::abs(back.D_Gamma / d.D_Gamma - 1.0) <= 1e-12);
    CHECK(std::abs(back.D_GammaP / d.D_GammaP - 1.0) <= 1e-12);
    CHECK(std::abs(back.k_on / d.k_on - 1.0) <= 1e-12);
    CHECK(std::abs(back.k_off / d.k_off - 1.0) <= 1e-12);
  }
}

}
