#include <doctest.h>

#include <random>

#include "slabspike/errors.hpp"
#include "slabspike/prior.hpp"
#include "slabspike/random.hpp"

using namespace slabspike;

namespace {

// Bisection on the forward map, independent of the closed-form inverse.
double invert_by_bisection(double r2, double q, Index k, double vbar) {
  double lo = 0.0;
  double hi = 1.0;
  while (r2_from_gamma2_q(hi, q, k, vbar) < r2) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (r2_from_gamma2_q(mid, q, k, vbar) < r2 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("prior") {
  TEST_CASE("gamma2 from (r2, q)") {
    CHECK(gamma2_from_r2_q(0.5, 1.0, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    // Oracle: bisection gives 0.5 for (0.8, 0.5, 16, 1).
    CHECK(invert_by_bisection(0.8, 0.5, 16, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gamma2_from_r2_q(0.8, 0.5, 16, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gamma2_from_r2_q(1e-12, 0.5, 16, 1.0) < 1e-12);
    CHECK(gamma2_from_r2_q(1e-12, 0.5, 16, 1.0) > 0.0);
  }

  TEST_CASE("boundary arguments are domain errors") {
    CHECK_THROWS_AS(gamma2_from_r2_q(0.0, 0.5, 4, 1.0), DomainError);
    CHECK_THROWS_AS(gamma2_from_r2_q(1.0, 0.5, 4, 1.0), DomainError);
    CHECK_THROWS_AS(gamma2_from_r2_q(0.5, 0.0, 4, 1.0), DomainError);
    CHECK_NOTHROW(gamma2_from_r2_q(0.5, 1.0, 4, 1.0));
    CHECK_THROWS_AS(r2_from_gamma2_q(0.0, 0.5, 4, 1.0), DomainError);
  }

  TEST_CASE("r2 from (gamma2, q)") {
    CHECK(r2_from_gamma2_q(1.0, 1.0, 1, 1.0) == doctest::Approx(0.5));
    CHECK(r2_from_gamma2_q(0.5, 0.5, 16, 1.0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(r2_from_gamma2_q(2.0, 0.3, 5, 1.2) > r2_from_gamma2_q(1.0, 0.3, 5, 1.2));
    CHECK(r2_from_gamma2_q(1.0, 0.6, 5, 1.2) > r2_from_gamma2_q(1.0, 0.3, 5, 1.2));
  }

  TEST_CASE("round trip over random tuples") {
    Rng rng(11);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const double r2 = 0.001 + 0.998 * draw_uniform(rng);
      const double q = 0.001 + 0.999 * draw_uniform(rng);
      const Index k = 1 + static_cast<Index>(draw_uniform(rng) * 200);
      const double vbar = 0.1 + 5.0 * draw_uniform(rng);
      const double back = r2_from_gamma2_q(gamma2_from_r2_q(r2, q, k, vbar), q, k, vbar);
      worst = std::max(worst, std::abs(back - r2) / r2);
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("templated on the scalar") {
    const long double g = gamma2_from_r2_q<long double>(0.8L, 0.5L, 16, 1.0L);
    CHECK(static_cast<double>(g) == doctest::Approx(0.5));
    const float r = r2_from_gamma2_q<float>(1.0f, 1.0f, 1, 1.0f);
    CHECK(r == doctest::Approx(0.5f));
  }

  TEST_CASE("vbar on standardized data and under the t slab") {
    Rng rng(2);
    Matrix x(50, 4);
    for (Index j = 0; j < 4; ++j) {
      Vector c = draw_normal_vector(rng, 50);
      c = (c.array() - c.mean()).matrix();
      c /= std::sqrt(c.squaredNorm() / 49.0);
      x.col(j) = c;
    }
    CHECK(std::abs(vbar_x(x, Slab::gaussian()).value - 1.0) < 1e-10);
    CHECK(vbar_x(x, Slab::student_t(4.0)).value == doctest::Approx(2.0).epsilon(1e-10));
  }

  TEST_CASE("midpoint grid avoids the boundary") {
    const auto g = midpoint_grid(4);
    CHECK(g == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  }

  TEST_CASE("slab moments") {
    const auto gauss = slab_moments(GaussianPrior{2.0});
    CHECK(gauss.mean == 0.0);
    CHECK(gauss.variance == 0.25);
    CHECK(gauss.excess_kurtosis == 0.0);
    const auto lap = slab_moments(LaplacePrior{2.0});
    CHECK(lap.variance == 2.0);
    CHECK(lap.excess_kurtosis == 3.0);
    const auto t4 = slab_moments(StudentTPrior{4.0, 1.0});
    CHECK(t4.variance == 2.0);
    CHECK(std::isinf(t4.excess_kurtosis));
    CHECK(slab_moments(StudentTPrior{10.0, 1.0}).excess_kurtosis == doctest::Approx(1.0));
  }

  TEST_CASE("Student-t variance matches the scale mixture by simulation") {
    const double nu = 6.0;
    const double scale2 = 1.7;
    Rng rng(99);
    const int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    double sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lambda2 = draw_inverse_gamma(rng, nu / 2.0, nu / 2.0);
      const double b = std::sqrt(scale2 * lambda2) * draw_normal(rng);
      sum += b;
      sum2 += b * b;
      sum4 += b * b * b * b;
    }
    const double var = sum2 / n - (sum / n) * (sum / n);
    // se of the second moment: sqrt((E b^4 - (E b^2)^2) / n)
    const double se = std::sqrt((sum4 / n - (sum2 / n) * (sum2 / n)) / n);
    CHECK(std::abs(var - slab_moments(StudentTPrior{nu, scale2}).variance) < 3.0 * se);
  }

  TEST_CASE("spec validation") {
    SlabSpec s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.stored_draws() == 2000);
    s.slab = Slab::student_t(2.0);
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = SlabSpec{};
    s.n_burn = s.n_iter;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = SlabSpec{};
    s.thin = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = SlabSpec{};
    s.grid_q = 1;
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
}
