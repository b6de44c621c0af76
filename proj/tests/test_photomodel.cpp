#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "photobio/photomodel.hpp"

using namespace photobio;

TEST_CASE("Snell refraction") {
  CHECK(refraction_angle(0.0, 1.333) == doctest::Approx(0.0).epsilon(1e-15));
  // direct arcsin evaluation at the 80 degree extreme
  const double ref = std::asin(std::sin(80.0 * M_PI / 180.0) / 1.333);
  CHECK(refraction_angle(80.0, 1.333) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(ref < 48.6 * M_PI / 180.0);

  // stated band of the refracted cosine over the admissible range
  for (double ti = 0.0; ti <= 80.0; ti += 5.0) {
    const double c = std::cos(refraction_angle(ti, 1.333));
    CHECK(c <= 1.0);
    CHECK(c >= 0.661);
  }
  // the grazing limit approaches ~48.6 degrees
  CHECK(std::asin(1.0 / 1.333) * 180.0 / M_PI == doctest::Approx(48.6).epsilon(2e-3));

  // monotone in incidence
  double prev = -1.0;
  for (double ti = 0.0; ti < 90.0; ti += 1.0) {
    const double t0 = refraction_angle(ti, 1.333);
    CHECK(t0 > prev);
    prev = t0;
  }
  CHECK_THROWS_AS(refraction_angle(90.0, 1.333), std::domain_error);
}

TEST_CASE("taxis response: sign structure and roots") {
  for (TaxisKind kind : {TaxisKind::GC13, TaxisKind::GC19}) {
    const TaxisFunction f = TaxisFunction::make(kind);
    CHECK(f.value(1e-12) == doctest::Approx(0.0).epsilon(1e-10));

    const double root = oracles::bisect([&](double g) { return f.value(g); }, 1e-6, 3.8);
    CHECK(f.root() == doctest::Approx(root).epsilon(1e-8));
    CHECK(std::abs(root - f.critical_intensity) < 0.05);

    // positive below the root, negative above, on a fine sweep
    for (int i = 1; i <= 1000; ++i) {
      const double g = 3.8 * i / 1000.0;
      if (g < root - 1e-6) CHECK(f.value(g) > 0.0);
      if (g > root + 1e-6) CHECK(f.value(g) < 0.0);
    }
    // stabilizing slope at the root
    CHECK(f.slope(root) < 0.0);
  }
  const TaxisFunction g13 = TaxisFunction::make(TaxisKind::GC13);
  CHECK(g13.root() > 1.25);
  CHECK(g13.root() < 1.35);
  CHECK(TaxisFunction::make(TaxisKind::GC19).value(1.0) > 0.0);
}

TEST_CASE("taxis slope matches finite differences") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.05, 3.7);
  for (TaxisKind kind : {TaxisKind::GC13, TaxisKind::GC19}) {
    const TaxisFunction f = TaxisFunction::make(kind);
    for (int i = 0; i < 20; ++i) {
      const double g = dist(rng);
      const double fd = oracles::central_diff([&](double x) { return f.value(x); }, g, 1e-6);
      CHECK(f.slope(g) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(f.slope(1.0) ==
          doctest::Approx(oracles::central_diff([&](double x) { return f.value(x); }, 1.0, 1e-6))
              .epsilon(1e-5));
    // limit slope at G -> 0+ against one-sided differences
    const double h = 1e-7;
    const double one_sided = (f.value(2.0 * h) - f.value(h)) / h;
    CHECK(f.slope(0.0) == doctest::Approx(one_sided).epsilon(1e-4));
  }
}

TEST_CASE("parameter validation") {
  SuspensionParams p;
  CHECK_NOTHROW(p.validate());
  p.albedo = 1.2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.albedo = 0.4;
  p.incidence_deg = 85.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
