#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "warpband/entire_analysis.hpp"

using namespace warpband;
using namespace warpband::entire;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// log|a_n| for a_n = s^n / n!, straight from lgamma.
CoefficientSequence exp_series(double s, std::size_t n_max) {
  std::vector<double> la(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) la[n] = static_cast<double>(n) * std::log(s) - std::lgamma(n + 1.0);
  return CoefficientSequence::from_log_abs(la);
}

}  // namespace

TEST_CASE("log-factorial oracle: n log n / log n! creeps toward 1", "[entire]") {
  // the raw ratio is monotone decreasing toward 1, which is why the estimator fits the tail instead
  double prev = 10.0;
  for (double n : {50.0, 100.0, 200.0, 400.0, 1e4, 1e6}) {
    const double r = n * std::log(n) / std::lgamma(n + 1.0);
    CHECK(r > 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1.08);
}

TEST_CASE("order of 1/n! is 1", "[entire]") {
  const auto c = exp_series(1.0, 400);
  CHECK_THAT(estimate_order(c), WithinAbs(1.0, 0.02));
  const double raw = raw_order_ratio(c);
  CHECK(raw > 1.0);  // slow surrogate kept as a diagnostic
}

TEST_CASE("order of 1/Gamma(n/2+1) is 2", "[entire]") {
  std::vector<double> la(401);
  for (std::size_t n = 0; n <= 400; ++n) la[n] = -std::lgamma(n / 2.0 + 1.0);
  CHECK_THAT(estimate_order(CoefficientSequence::from_log_abs(la)), WithinAbs(2.0, 0.04));
}

TEST_CASE("exact polynomial has order 0 and type 0", "[entire]") {
  const auto p = CoefficientSequence::polynomial({1.0, 2.0, 0.0, 5.0});
  CHECK(p.n_max() == 3);
  CHECK(estimate_order(p) == 0.0);
  const auto g = estimate_growth(p);
  CHECK(g.order_rho == 0.0);
  CHECK(g.type_sigma == 0.0);
}

TEST_CASE("type of s^n/n! is s", "[entire]") {
  CHECK_THAT(estimate_type(exp_series(1.0, 400), 1.0), WithinRel(1.0, 0.02));
  CHECK_THAT(estimate_type(exp_series(2.0, 400), 1.0), WithinRel(2.0, 0.02));
}

TEST_CASE("scale_coefficients", "[entire]") {
  const auto c = exp_series(1.0, 400);

  SECTION("c = 3 triples the type") {
    CHECK_THAT(estimate_type(scale_coefficients(c, 3.0), 1.0), WithinRel(3.0, 0.02));
  }
  SECTION("c = -2 doubles it; the sign is irrelevant") {
    CHECK_THAT(estimate_type(scale_coefficients(c, -2.0), 1.0), WithinRel(2.0, 0.02));
  }
  SECTION("scale 1 is the identity") {
    const auto s = scale_coefficients(c, 1.0);
    for (std::size_t n = 0; n <= c.n_max(); ++n) {
      CHECK(s.log_abs(n) == c.log_abs(n));
      CHECK(s.arg(n) == c.arg(n));
    }
    CHECK(estimate_type(s, 1.0) == estimate_type(c, 1.0));
  }
  SECTION("phases rotate by n arg(s)") {
    const auto s = scale_coefficients(c, cplx{0.0, 1.0});
    CHECK_THAT(std::abs(s.value(3) - cplx{0.0, -1.0 / 6.0}), WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("coefficient validation", "[entire]") {
  SECTION("all zero") {
    std::vector<cplx> z(20, cplx{});
    CHECK_THROWS_MATCHES(CoefficientSequence::from_values(z), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::AllZero; }));
  }
  SECTION("short series") {
    CHECK_THROWS_AS(CoefficientSequence::from_values({1.0, 1.0, 0.5}), Error);
    try {
      (void)CoefficientSequence::from_values({1.0, 1.0, 0.5});
    } catch (const Error& e) {
      CHECK(e.code() == Errc::WindowEmpty);
    }
  }
  SECTION("non-finite") {
    std::vector<cplx> v(20, cplx{1.0, 0.0});
    v[4] = cplx{std::nan(""), 0.0};
    try {
      (void)CoefficientSequence::from_values(v);
      FAIL("expected NonFinite");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NonFinite);
      CHECK(e.kind() == ErrorKind::numerical);
    }
  }
  SECTION("type needs positive order") {
    try {
      (void)estimate_type(exp_series(1.0, 50), 0.0);
      FAIL("expected NonpositiveOrder");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NonpositiveOrder);
    }
  }
  SECTION("tail window of zeros") {
    std::vector<double> la(41, -std::numeric_limits<double>::infinity());
    la[0] = 0.0;
    la[3] = -1.0;
    try {
      (void)estimate_order(CoefficientSequence::from_log_abs(la));
      FAIL("expected WindowEmpty");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::WindowEmpty);
    }
  }
}

TEST_CASE("geometric coefficients have infinite order", "[entire]") {
  // sum z^n has radius 1: log(1/|a_n|)/n = 0, no superexponential decay
  std::vector<cplx> v(100, cplx{1.0, 0.0});
  CHECK(std::isinf(estimate_order(CoefficientSequence::from_values(v))));
  const auto g = estimate_growth(CoefficientSequence::from_values(v));
  CHECK(g.type_infinite());
}

TEST_CASE("estimate_growth reports the tail window", "[entire]") {
  const auto g = estimate_growth(exp_series(2.0, 400), 1.0);
  CHECK(g.window_lo == 200);
  CHECK(g.window_hi == 400);
  CHECK_THAT(g.type_sigma, WithinRel(2.0, 0.02));
}

TEST_CASE("mean type of exponentials", "[entire]") {
  auto e = [](double a) { return [a](cplx z) { return std::exp(cplx{0.0, -a} * z); }; };
  // (2/(pi r)) int_0^pi r sin^2 = 1 exactly, so the quadrature is the only error
  const auto up = mean_type(e(1.0), HalfPlane::upper);
  CHECK_THAT(up.value, WithinAbs(1.0, 1e-9));
  CHECK(up.per_radius.size() == 3);
  CHECK(up.convergence < 1e-9);
  CHECK_THAT(mean_type(e(1.0), HalfPlane::lower).value, WithinAbs(-1.0, 1e-9));
  CHECK_THAT(mean_type([](cplx) { return cplx{1.0, 0.0}; }, HalfPlane::upper).value, WithinAbs(0.0, 1e-15));

  const std::vector<double> radii{50.0, 100.0};
  CHECK_THAT(mean_type(e(1.0), HalfPlane::upper, radii).value, WithinAbs(1.0, 1e-9));
}

TEST_CASE("mean type of a polynomial tends to zero", "[entire]") {
  const auto m = mean_type([](cplx z) { return z * z + 1.0; }, HalfPlane::upper);
  CHECK(m.per_radius[2] < m.per_radius[0]);
  CHECK(std::abs(m.value) < 0.15);
}

TEST_CASE("mean type input checks", "[entire]") {
  auto f = [](cplx z) { return z; };
  const std::vector<double> bad{50.0, 25.0};
  CHECK_THROWS_AS(mean_type(f, HalfPlane::upper, bad), Error);
  const std::vector<double> none;
  CHECK_THROWS_AS(mean_type(f, HalfPlane::upper, none), Error);
  // e^{-iz * 800} overflows on the arc
  auto big = [](cplx z) { return std::exp(cplx{0.0, -800.0} * z); };
  try {
    (void)mean_type(big, HalfPlane::upper);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
  }
}

TEST_CASE("order of a zig-zag sequence follows its upper branch", "[entire]") {
  // |a_n| = |1 + 0.9 (-1)^n| / (n! n^3): two interleaved order-1 branches
  std::vector<double> la(81);
  for (std::size_t n = 0; n <= 80; ++n)
    la[n] = -std::lgamma(n + 1.0) - 3.0 * std::log(n + 1.0) + std::log(n % 2 ? 0.1 : 1.9);
  const auto c = CoefficientSequence::from_log_abs(la);
  CHECK_THAT(estimate_order(c), WithinAbs(1.0, 0.01));
  const auto hull = detail::concave_vertices(c);
  for (std::size_t k = 1; k + 1 < hull.size(); ++k) CHECK(hull[k] % 2 == 0);
}
