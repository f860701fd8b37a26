#include <catch_amalgamated.hpp>

#include <cmath>

#include "warpband/warps.hpp"

using namespace warpband;
using namespace warpband::warps;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Usage;
}

// inf |phi'| by brute force on [-lo, lo]
double sampled_inf_derivative(const Warp& w, double lo, double step) {
  double best = std::numeric_limits<double>::infinity();
  for (double x = -lo; x <= lo; x += step) best = std::min(best, std::abs(w.derivative(x)));
  return best;
}

}  // namespace

TEST_CASE("warp construction", "[warps]") {
  const auto w = Warp::affine(0.5, 3.0);
  CHECK(w.kind() == WarpKind::affine);
  CHECK(w.is_affine());
  CHECK(w(2.0) == 4.0);
  CHECK(w.dilation() == 0.5);
  CHECK(code_of([] { (void)Warp::affine(0.0, 1.0); }) == Errc::ConstantWarp);
  CHECK(code_of([] { (void)Warp::polynomial({5.0}); }) == Errc::ConstantWarp);
  CHECK(code_of([] { (void)Warp::polynomial({5.0, 0.0, 0.0}); }) == Errc::ConstantWarp);
  CHECK(code_of([] { (void)Warp::polynomial({0.0, std::nan("")}); }) == Errc::InvalidWarp);

  const auto c = Warp::polynomial({0.0, 1.0, 0.0, 1.0, 0.0});  // trailing zero trimmed
  CHECK(c.degree() == 3);
  CHECK(c(2.0) == 10.0);
  CHECK(c.derivative(2.0) == 13.0);
  CHECK(c.second_derivative(2.0) == 12.0);
  const cplx z{1.0, 1.0};
  CHECK(std::abs(c(z) - (z * z * z + z)) < 1e-15);
}

TEST_CASE("classify", "[warps]") {
  const auto half = classify(Warp::affine(0.5, 3.0));
  CHECK(half.preserves_pw);
  CHECK(half.reason == WarpReason::affine_contractive);
  REQUIRE(half.target_band_factor);
  CHECK(*half.target_band_factor == 0.5);

  const auto two = classify(Warp::affine(2.0, 0.0));
  CHECK_FALSE(two.preserves_pw);
  CHECK(two.reason == WarpReason::affine_expansive);
  CHECK(two.target_band_factor.value() == 2.0);

  const auto cubic = classify(Warp::polynomial({0.0, 1.0, 0.0, 1.0}));
  CHECK_FALSE(cubic.preserves_pw);
  CHECK(cubic.reason == WarpReason::non_affine);
  CHECK_FALSE(cubic.target_band_factor);

  // a polynomial warp of degree one is still affine
  CHECK(classify(Warp::polynomial({1.0, -1.0})).preserves_pw);
}

TEST_CASE("weighted_target_band", "[warps]") {
  const auto r1 = weighted_target_band(pw::BandSpec{1.0}, 1.0, {-1.0, 1.0});
  CHECK(r1.target.a == 2.0);
  CHECK(r1.convolution_support.lo == -2.0);
  CHECK(r1.convolution_support.hi == 2.0);

  const auto r2 = weighted_target_band(pw::BandSpec{1.0}, 1.0, {0.0, 0.0});
  CHECK(r2.target.a == 1.0);
  CHECK(r2.convolution_support.lo == -1.0);

  CHECK(weighted_target_band(pw::BandSpec{2.0}, 0.5, {3.0, 5.0}).target.a == 6.0);
  CHECK(weighted_target_band(pw::BandSpec{2.0}, -0.5, {-9.0, -5.0}).target.a == 10.0);

  CHECK(code_of([] { (void)weighted_target_band(pw::BandSpec{1.0}, 1.0, {2.0, 1.0}); }) == Errc::EmptySupport);
  CHECK(code_of([] { (void)weighted_target_band(pw::BandSpec{1.0}, 0.0, {0.0, 1.0}); }) == Errc::ConstantWarp);
}

TEST_CASE("cubic_criterion", "[warps]") {
  CHECK(cubic_criterion(1, 0, 1));
  CHECK_FALSE(cubic_criterion(1, 2, 1));
  CHECK(cubic_criterion(2, 1, 1));
  CHECK(code_of([] { (void)cubic_criterion(0, 1, 1); }) == Errc::DegenerateLeading);
}

TEST_CASE("measure bound for x^3 + x", "[warps]") {
  const auto r = check_measure_bound(Warp::polynomial({0.0, 1.0, 0.0, 1.0}));
  CHECK(r.monotone);
  CHECK(r.increasing);
  CHECK(r.inf_derivative == 1.0);
  REQUIRE(r.bound_c);
  CHECK(*r.bound_c == 1.0);
  CHECK(r.mutual_abs_continuity);
}

TEST_CASE("measure bound closed forms against sampling", "[warps]") {
  SECTION("cubic with a quadratic term") {
    const auto w = Warp::polynomial({0.0, 1.0, 1.0, 1.0});
    const auto r = check_measure_bound(w);
    CHECK(r.monotone);
    CHECK_THAT(r.inf_derivative, WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(r.inf_derivative, WithinAbs(sampled_inf_derivative(w, 5.0, 1e-4), 1e-7));
  }
  SECTION("decreasing cubic") {
    const auto r = check_measure_bound(Warp::polynomial({1.0, -2.0, 0.0, -1.0}));
    CHECK(r.monotone);
    CHECK_FALSE(r.increasing);
    CHECK(r.inf_derivative == 2.0);
    CHECK(*r.bound_c == 0.5);
  }
  SECTION("cubic with a turning point") {
    const auto r = check_measure_bound(Warp::polynomial({0.0, -1.0, 0.0, 1.0}));
    CHECK_FALSE(r.monotone);
    CHECK_FALSE(r.bound_c);
    CHECK_FALSE(r.mutual_abs_continuity);
  }
  SECTION("cubic on the criterion boundary: phi' = 3(x+1)^2 vanishes once") {
    const auto r = check_measure_bound(Warp::polynomial({0.0, 3.0, 3.0, 1.0}));
    CHECK(r.monotone);
    CHECK(r.inf_derivative == 0.0);
    CHECK_FALSE(r.bound_c);
  }
  SECTION("x^2") {
    const auto r = check_measure_bound(Warp::polynomial({0.0, 0.0, 1.0}));
    CHECK_FALSE(r.monotone);
    CHECK_FALSE(r.bound_c);
  }
  SECTION("affine") {
    const auto r = check_measure_bound(Warp::affine(-0.25, 1.0));
    CHECK(r.monotone);
    CHECK_FALSE(r.increasing);
    CHECK(*r.bound_c == 4.0);
  }
}

TEST_CASE("measure bound for higher degrees", "[warps]") {
  SECTION("x^5 + x") {
    const auto w = Warp::polynomial({0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
    const auto r = check_measure_bound(w);
    CHECK(r.monotone);
    CHECK_THAT(r.inf_derivative, WithinAbs(1.0, 1e-12));
  }
  SECTION("x^5 + x^4 + 2x, minimum of phi' away from zero") {
    const auto w = Warp::polynomial({0.0, 2.0, 0.0, 0.0, 1.0, 1.0});
    const auto r = check_measure_bound(w);
    // phi' = 5x^4 + 4x^3 + 2, minimum at x = -3/5
    const double ref = 5 * std::pow(0.6, 4) - 4 * std::pow(0.6, 3) + 2;
    CHECK(r.monotone);
    CHECK_THAT(r.inf_derivative, WithinAbs(ref, 1e-12));
    CHECK_THAT(r.inf_derivative, WithinAbs(sampled_inf_derivative(w, 3.0, 1e-4), 1e-6));
  }
  SECTION("x^5 - x turns") {
    CHECK_FALSE(check_measure_bound(Warp::polynomial({0.0, -1.0, 0.0, 0.0, 0.0, 1.0})).monotone);
  }
  SECTION("even degree is never monotone") {
    CHECK_FALSE(check_measure_bound(Warp::polynomial({0.0, 1.0, 0.0, 0.0, 1.0})).monotone);
  }
  SECTION("critical points beyond the probe window are still found") {
    // phi' = 5 (x - 80)^4 + 1 has its minimum at x = 80
    std::vector<double> d{std::pow(80.0, 4) * 5 + 1, -4 * std::pow(80.0, 3) * 5, 6 * 6400.0 * 5, -4 * 80.0 * 5, 5.0};
    std::vector<double> c{0.0};
    for (std::size_t k = 0; k < d.size(); ++k) c.push_back(d[k] / static_cast<double>(k + 1));
    const auto r = check_measure_bound(Warp::polynomial(c));
    CHECK(r.monotone);
    CHECK(r.search_window.hi >= 80.0);
    CHECK_THAT(r.inf_derivative, WithinAbs(1.0, 1e-3));
  }
  CHECK(code_of([] { (void)check_measure_bound(Warp::identity(), {1.0, 0.0}); }) == Errc::InvalidGrid);
}

TEST_CASE("preimage of an interval", "[warps]") {
  const auto w = Warp::polynomial({0.0, 1.0, 0.0, 1.0});
  const auto e = preimage(w, {2.0, 10.0}, true);
  CHECK_THAT(e.lo, WithinAbs(1.0, 1e-12));
  CHECK_THAT(e.hi, WithinAbs(2.0, 1e-12));

  const auto d = Warp::affine(-2.0, 1.0);
  const auto f = preimage(d, {-3.0, 5.0}, false);
  CHECK_THAT(f.lo, WithinAbs(-2.0, 1e-12));
  CHECK_THAT(f.hi, WithinAbs(2.0, 1e-12));
}
