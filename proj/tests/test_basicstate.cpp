#include <doctest.h>

#include <cmath>

#include "photobio/basicstate.hpp"
#include "photobio/gridop.hpp"

using namespace photobio;

namespace {

BasicState solve_for(SuspensionParams p, int n_z = 151, bool taxis_off = false) {
  const double theta0 = p.refraction();
  const RadiationField f = solve_lambda(p, theta0, 201);
  BasicStateOptions o;
  o.n_z = n_z;
  o.taxis_off = taxis_off;
  return solve_basic_state(p, f, o);
}

int peak_count(const BasicState& st) {
  // local maxima including the walls
  const int n = st.size();
  int peaks = 0;
  for (int i = 0; i < n; ++i) {
    const double v = st.n_s[i];
    const bool up = (i == 0) || v > st.n_s[i - 1];
    const bool down = (i == n - 1) || v > st.n_s[i + 1];
    if (up && down) ++peaks;
  }
  return peaks;
}

}  // namespace

TEST_CASE("conservation and the optical-depth identity") {
  SuspensionParams p;
  p.swim_speed = 15.0;
  p.extinction = 0.5;
  p.albedo = 0.4;
  p.diffuse_mag = 0.26;
  const BasicState st = solve_for(p);
  const int n = st.size();
  CHECK(std::abs(st.tau[0] - p.extinction) < 1e-8 * p.extinction);
  CHECK(st.tau[n - 1] == 0.0);
  for (int i = 0; i < n; ++i) CHECK(st.n_s[i] > 0.0);

  // independent re-integration of the mean concentration
  const Eigen::MatrixXd J = integrate_from_top_matrix(n);
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += J(0, j) * st.n_s[j];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mid-height peak at normal incidence, upward shift with obliquity") {
  SuspensionParams p;
  p.swim_speed = 15.0;
  p.extinction = 0.5;
  p.albedo = 0.4;
  p.diffuse_mag = 0.26;
  const BasicState st0 = solve_for(p);
  int imax0 = 0;
  for (int i = 0; i < st0.size(); ++i)
    if (st0.n_s[i] > st0.n_s[imax0]) imax0 = i;
  CHECK(std::abs(st0.z[imax0] - 0.5) < 0.1);

  p.incidence_deg = 40.0;
  const BasicState st40 = solve_for(p);
  int imax40 = 0;
  for (int i = 0; i < st40.size(); ++i)
    if (st40.n_s[i] > st40.n_s[imax40]) imax40 = i;
  CHECK(st40.z[imax40] > st0.z[imax0]);
  CHECK(st40.n_s[imax40] > st0.n_s[imax0]);
}

TEST_CASE("degenerate taxis gives the uniform column") {
  SuspensionParams p;
  const BasicState st = solve_for(p, 151, /*taxis_off=*/true);
  for (int i = 0; i < st.size(); ++i) {
    CHECK(st.n_s[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.T_s[i] == 0.0);
  }
  CHECK(find_sublayer(st).empty());
}

TEST_CASE("ODE residual on the converged grid") {
  SuspensionParams p;
  p.swim_speed = 15.0;
  p.extinction = 0.5;
  p.albedo = 0.4;
  p.diffuse_mag = 0.26;
  const BasicState st = solve_for(p, 601);
  const int n = st.size();
  const DiffMatrices& dm = DiffMatrices::get(n);
  Eigen::VectorXd ns(n);
  for (int i = 0; i < n; ++i) ns(i) = st.n_s[i];
  const Eigen::VectorXd dn = dm.d1 * ns;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(dn(i) - p.swim_speed * st.T_s[i] * st.n_s[i]));
  CHECK(worst <= 1e-7);
}

TEST_CASE("grid convergence of the concentration profile") {
  SuspensionParams p;
  p.swim_speed = 15.0;
  p.extinction = 0.5;
  p.albedo = 0.4;
  p.diffuse_mag = 0.26;
  const BasicState a = solve_for(p, 201);
  const BasicState b = solve_for(p, 401);
  double dev = 0.0;
  for (int i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a.n_s[i] - b.n_s[2 * i]));
  CHECK(dev < 1e-6);
}

TEST_CASE("sublayer location: single crossing for the monotone profile") {
  SuspensionParams p;
  p.swim_speed = 15.0;
  p.extinction = 0.5;
  p.albedo = 0.4;
  p.diffuse_mag = 0.26;
  const BasicState st = solve_for(p);
  REQUIRE(st.sublayer_z.size() == 1);
  // G_s at the crossing equals the actual taxis root
  const CubicSpline g(st.z, st.G_s);
  CHECK(g(st.sublayer_z[0]) == doctest::Approx(st.taxis.root()).epsilon(1e-6));
}

TEST_CASE("bimodal column at strong scattering collapses when the beam tilts") {
  SuspensionParams p;
  p.swim_speed = 10.0;
  p.extinction = 1.0;
  p.albedo = 1.0;
  p.diffuse_mag = 0.02;
  p.taxis = TaxisKind::GC19;
  const BasicState st0 = solve_for(p, 257);
  CHECK(peak_count(st0) == 2);
  REQUIRE(st0.sublayer_z.size() == 2);
  CHECK(std::abs(st0.sublayer_z[1] - 0.95) < 0.05);
  CHECK(std::abs(st0.sublayer_z[0] - 0.65) < 0.05);

  // peaks near the wall and the interior accumulation height
  std::vector<int> peaks;
  for (int i = 0; i < st0.size(); ++i) {
    const bool up = (i == 0) || st0.n_s[i] > st0.n_s[i - 1];
    const bool down = (i == st0.size() - 1) || st0.n_s[i] > st0.n_s[i + 1];
    if (up && down) peaks.push_back(i);
  }
  CHECK(st0.z[peaks.back()] > 0.9);
  CHECK(std::abs(st0.z[peaks.front()] - 0.8) < 0.07);

  SuspensionParams q = p;
  q.incidence_deg = 50.0;
  const BasicState st50 = solve_for(q, 257);
  CHECK(peak_count(st50) == 1);
}
