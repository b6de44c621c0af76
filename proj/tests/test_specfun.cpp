#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "photobio/specfun.hpp"

using photobio::expn;
using photobio::gauss_rule;

TEST_CASE("E_n at zero argument") {
  CHECK(expn(2, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expn(3, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(expn(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(expn(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(expn(2, -1.0), std::domain_error);
}

TEST_CASE("E_1 against adaptive quadrature") {
  // frozen from the quadrature oracle: E_1(1) = 0.21938393439552026
  CHECK(expn(1, 1.0) == doctest::Approx(0.21938393439552026).epsilon(1e-12));
  for (double x : {1e-6, 1e-3, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 5.0, 20.0, 50.0}) {
    const double ref = oracles::expn_quadrature(1, x);
    CHECK(expn(1, x) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("E_n against adaptive quadrature for n = 2..5") {
  for (int n = 2; n <= 5; ++n)
    for (double x : {1e-9, 1e-4, 0.3, 1.0, 3.0, 10.0, 50.0}) {
      const double ref = oracles::expn_quadrature(n, x);
      CHECK(expn(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("E_n recurrence and derivative") {
  for (int n = 1; n <= 4; ++n)
    for (double x : {0.1, 1.0, 5.0}) {
      const double lhs = expn(n + 1, x);
      const double rhs = (std::exp(-x) - x * expn(n, x)) / n;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  // d/dx E_n = -E_{n-1}
  for (int n : {2, 3})
    for (double x : {0.2, 1.0, 4.0}) {
      const double fd =
          oracles::central_diff([&](double t) { return expn(n, t); }, x, 1e-6);
      CHECK(fd == doctest::Approx(-expn(n - 1, x)).epsilon(1e-5));
    }
  CHECK(expn(2, 800.0) == 0.0);
}

TEST_CASE("Gauss rules: polynomial exactness") {
  const auto r2 = gauss_rule(2, -1.0, 1.0);
  CHECK(r2.integrate([](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const auto r8 = gauss_rule(8, -1.0, 1.0);
  double wsum = 0.0;
  for (double w : r8.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  const auto r16 = gauss_rule(16, 0.0, 1.0);
  CHECK(r16.integrate([](double x) { return std::exp(x); }) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

  for (int q : {2, 5, 9, 16}) {
    const auto rule = gauss_rule(q, -1.0, 1.0);
    for (int j = 0; j <= 2 * q - 1; ++j) {
      const double exact = (j % 2 == 1) ? 0.0 : 2.0 / (j + 1);
      const double got = rule.integrate([&](double x) { return std::pow(x, j); });
      CHECK(std::abs(got - exact) < 1e-13);
    }
    // nodes sorted and interior
    for (std::size_t i = 0; i + 1 < rule.nodes.size(); ++i)
      CHECK(rule.nodes[i] < rule.nodes[i + 1]);
    CHECK(rule.nodes.front() > -1.0);
    CHECK(rule.nodes.back() < 1.0);
  }
}
