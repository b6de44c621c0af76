#include "photobio/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "photobio/eigsolve.hpp"
#include "photobio/gridop.hpp"

namespace photobio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gamma_scale(std::complex<double> g) { return std::max(1.0, std::abs(g)); }

}  // namespace

StabilityProblem::StabilityProblem(const BasicState& state, const RadiationField& field,
                                   StabilityOptions opts, ModelKind model)
    : state_(&state), field_(&field), opts_(std::move(opts)), model_(model) {
  if (state.size() != opts_.n_z)
    throw std::invalid_argument("StabilityProblem: state grid does not match n_z");
  setup_ = make_perturbation_setup(state, field, opts_.ang);
}

const RadiationCoupling& StabilityProblem::coupling(double k) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  for (auto& [kk, ctx] : coupling_cache_)
    if (kk == k) return ctx;
  coupling_cache_.emplace_back(k, radiation_coupling_matrices(setup_, k));
  return coupling_cache_.back().second;
}

StabilityOperator StabilityProblem::build_operator(double k, double R) const {
  const BasicState& st = *state_;
  const int n = st.size();
  const int N = 2 * n;
  const DiffMatrices& dm = DiffMatrices::get(n);
  const double sc = st.params.schmidt;
  const double vc = st.params.swim_speed;
  const double kcoef = st.params.extinction / st.cos_theta0;
  const double k2 = k * k;

  // scattering feedback (full model only)
  Eigen::MatrixXd gamma0_d1;
  const RadiationCoupling* coup = nullptr;
  if (model_ == ModelKind::FullScattering) {
    coup = &coupling(k);
    Eigen::VectorXd nt(n), fluxw(n);
    for (int i = 0; i < n; ++i) {
      if (!(st.q_s[i] > 0.0))
        throw std::runtime_error("build_operator: vanishing basic radiative flux");
      nt(i) = st.n_s[i] * st.dTs_dG[i];
      fluxw(i) = vc * st.n_s[i] * st.T_s[i] / st.q_s[i];
    }
    gamma0_d1 = (vc * (dm.d1 * (nt.asDiagonal() * coup->g_diff)) +
                 k * (fluxw.asDiagonal() * coup->flux_x_imag)) *
                dm.d1;
  }

  // gamma1, gamma2 coefficient profiles
  Eigen::VectorXd gamma1(n), gamma2(n);
  {
    Eigen::VectorXd prod(n), chi(n);
    const bool upswim = model_ == ModelKind::Upswim;
    for (int i = 0; i < n; ++i) {
      const double gsel = upswim ? st.G_s[i] : st.G_coll[i];
      prod(i) = st.n_s[i] * gsel * st.dTs_dG[i];
      chi(i) = st.G_diff[i];
    }
    gamma1 = kcoef * vc * (dm.d1 * prod);
    const Eigen::VectorXd dchi = dm.d1 * chi;
    for (int i = 0; i < n; ++i) {
      gamma2(i) = 2.0 * kcoef * vc * st.n_s[i] * st.G_coll[i] * st.dTs_dG[i] +
                  vc * st.dTs_dG[i] * dchi(i);
      if (upswim) gamma2(i) += kcoef * vc * st.n_s[i] * chi(i) * st.dTs_dG[i];
    }
  }

  StabilityOperator op;
  op.n_z = n;
  op.k = k;
  op.R = R;
  op.model = model_;
  op.A = Eigen::MatrixXd::Zero(N, N);
  op.B = Eigen::MatrixXd::Zero(N, N);

  // vertical momentum:  gamma Sc^-1 (D^2 - k^2) W = (D^2 - k^2)^2 W + R k^2 D Phi
  for (int i = 2; i <= n - 3; ++i) {
    op.A.block(i, 0, 1, n) = dm.d4.row(i) - 2.0 * k2 * dm.d2.row(i);
    op.A(i, i) += k2 * k2;
    op.A.block(i, n, 1, n) = R * k2 * dm.d1.row(i);
    op.B.block(i, 0, 1, n) = (dm.d2.row(i)) / sc;
    op.B(i, i) -= k2 / sc;
  }
  // no-slip walls; the top optionally stress-free
  op.A(0, 0) = 1.0;
  op.A.block(1, 0, 1, n) = dm.d1.row(0);
  op.A(n - 1, n - 1) = 1.0;
  if (st.params.top_bc == TopBC::Rigid)
    op.A.block(n - 2, 0, 1, n) = dm.d1.row(n - 1);
  else
    op.A.block(n - 2, 0, 1, n) = dm.d2.row(n - 1);

  // cell transport:  gamma D Phi = D^3 Phi - Vc Ts D^2 Phi - (k^2 + G2) D Phi
  //                               - G1 Phi - G0[D Phi] - (D n_s) W
  const Eigen::VectorXd dns = dm.d1 * Eigen::Map<const Eigen::VectorXd>(st.n_s.data(), n);
  for (int j = 2; j <= n - 2; ++j) {
    const int row = n + j;
    op.A.block(row, n, 1, n) =
        dm.d3.row(j) - vc * st.T_s[j] * dm.d2.row(j) - (k2 + gamma2(j)) * dm.d1.row(j);
    op.A(row, n + j) -= gamma1(j);
    if (coup) op.A.block(row, n, 1, n) -= gamma0_d1.row(j);
    op.A(row, j) = -dns(j);
    op.B.block(row, n, 1, n) = dm.d1.row(j);
  }

  // wall flux balance  D^2 Phi - Vc Ts D Phi - Vc n_s T' G = 0  at z = 0, 1,
  // and the integral anchor Phi(0) = 0
  auto wall_row = [&](int row, int w) {
    op.A.block(row, n, 1, n) = dm.d2.row(w) - vc * st.T_s[w] * dm.d1.row(w);
    const double cw = vc * st.n_s[w] * st.dTs_dG[w];
    if (model_ == ModelKind::Upswim) {
      op.A(row, n + w) -= cw * kcoef * st.G_s[w];
    } else {
      op.A(row, n + w) -= cw * kcoef * st.G_coll[w];
      op.A.block(row, n, 1, n) -= cw * (coup->g_diff * dm.d1).row(w);
    }
  };
  wall_row(n + 0, 0);
  op.A(n + 1, n + 0) = 1.0;
  wall_row(N - 1, n - 1);

  return op;
}

std::vector<std::complex<double>> StabilityProblem::growth_spectrum(
    const StabilityOperator& op) const {
  return eig_dggev(op.A, op.B, false).values;
}

Eigenpair StabilityProblem::eigenpair_near(const StabilityOperator& op,
                                           std::complex<double> target) const {
  const GeneralizedEig eig = eig_dggev(op.A, op.B, true);
  if (eig.values.empty()) throw std::runtime_error("eigenpair_near: empty spectrum");
  int best = 0;
  for (std::size_t i = 1; i < eig.values.size(); ++i)
    if (std::abs(eig.values[i] - target) < std::abs(eig.values[best] - target))
      best = static_cast<int>(i);
  const int n = op.n_z;
  Eigenpair p;
  p.gamma = eig.values[best];
  const Eigen::VectorXcd x = eig.vectors.col(best);
  p.W = x.head(n);
  p.Phi = x.tail(n);
  const double xnorm = x.norm();
  p.residual = (op.A * x - p.gamma * (op.B * x)).norm() / (op.A.norm() * xnorm);
  return p;
}

Eigenpair StabilityProblem::leading_eigenpair(const StabilityOperator& op) const {
  const auto spec = growth_spectrum(op);
  if (spec.empty()) throw std::runtime_error("leading_eigenpair: empty spectrum");
  return eigenpair_near(op, spec.front());
}

double StabilityProblem::branch_rate(const std::vector<std::complex<double>>& spec,
                                     Branch branch, std::complex<double>* which) const {
  double best = -kInf;
  for (const auto& g : spec) {
    const bool osc = std::abs(g.imag()) > opts_.im_tol * gamma_scale(g);
    if ((branch == Branch::Oscillatory) != osc) continue;
    if (g.real() > best) {
      best = g.real();
      if (which) *which = g;
    }
  }
  return best;
}

std::optional<StabilityProblem::Crossing> StabilityProblem::find_crossing(
    double k, Branch branch, double seed) const {
  std::map<double, std::vector<std::complex<double>>> cache;
  auto rate = [&](double R, std::complex<double>* which = nullptr) {
    auto it = cache.find(R);
    if (it == cache.end())
      it = cache.emplace(R, growth_spectrum(build_operator(k, R))).first;
    return branch_rate(it->second, branch, which);
  };

  // bracket the first zero of the family's leading rate
  double a = 0.0, b = 0.0, fa = 0.0, fb = 0.0;
  bool have = false;
  if (seed > 0.0) {
    double lo = std::max(opts_.r_min, 0.55 * seed);
    double hi = std::min(opts_.r_max, 1.8 * seed);
    double flo = rate(lo), fhi = rate(hi);
    for (int grow = 0; grow < 4 && !(flo < 0.0 && fhi >= 0.0); ++grow) {
      if (!(flo < 0.0)) {
        lo = std::max(opts_.r_min, 0.5 * lo);
        flo = rate(lo);
        if (lo <= opts_.r_min && !(flo < 0.0)) break;
      }
      if (!(fhi >= 0.0)) {
        hi = std::min(opts_.r_max, 2.0 * hi);
        fhi = rate(hi);
        if (hi >= opts_.r_max && !(fhi >= 0.0)) break;
      }
    }
    if (flo < 0.0 && fhi >= 0.0) {
      a = lo;
      b = hi;
      fa = flo;
      fb = fhi;
      have = true;
    }
  }
  if (!have) {
    double prev_r = opts_.r_min;
    double prev_f = rate(prev_r);
    if (prev_f >= 0.0 && std::isfinite(prev_f)) return std::nullopt;  // unstable below range
    for (int j = 1; j <= opts_.r_panels; ++j) {
      const double r = opts_.r_min * std::pow(opts_.r_max / opts_.r_min,
                                              static_cast<double>(j) / opts_.r_panels);
      const double f = rate(r);
      if (prev_f < 0.0 && f >= 0.0 && std::isfinite(f)) {
        a = prev_r;
        b = r;
        fa = prev_f;
        fb = f;
        have = true;
        break;
      }
      prev_r = r;
      prev_f = f;
    }
  }
  if (!have) return std::nullopt;

  // safeguarded secant on the bracket
  std::complex<double> gamma_at{0.0, 0.0};
  double x = b, fx = fb;
  for (int it = 0; it < 80; ++it) {
    double step;
    if (std::isfinite(fa) && std::isfinite(fb) && fb != fa)
      step = b - fb * (b - a) / (fb - fa);
    else
      step = 0.5 * (a + b);
    if (!(step > a && step < b)) step = 0.5 * (a + b);
    x = step;
    fx = rate(x, &gamma_at);
    if (!std::isfinite(fx)) {  // family vanished here; treat as below the crossing
      a = x;
      fa = -kInf;
      continue;
    }
    if (std::abs(fx) <= opts_.neutral_tol * gamma_scale(gamma_at)) break;
    if (fx > 0.0) {
      b = x;
      fb = fx;
    } else {
      a = x;
      fa = fx;
    }
    if (b - a < 1e-12 * b) break;
  }
  if (!std::isfinite(fx) || std::abs(fx) > 1e3 * opts_.neutral_tol * gamma_scale(gamma_at))
    return std::nullopt;
  return Crossing{x, gamma_at};
}

std::optional<NeutralPoint> StabilityProblem::neutral_R(double k, Branch branch,
                                                        double seed) const {
  const auto c = find_crossing(k, branch, seed);
  if (!c) return std::nullopt;
  NeutralPoint pt;
  pt.k = k;
  pt.R = c->R;
  pt.branch = branch;
  pt.frequency = std::abs(c->gamma.imag());
  if (branch == Branch::Stationary) pt.frequency = 0.0;
  return pt;
}

NeutralCurve StabilityProblem::trace_neutral_curve(double k_min, double k_max,
                                                   int n_k) const {
  if (!(k_min > 0.0 && k_max > k_min) || n_k < 2)
    throw std::invalid_argument("trace_neutral_curve: bad wavenumber range");
  std::vector<double> ks(n_k);
  for (int i = 0; i < n_k; ++i)
    ks[i] = k_min * std::pow(k_max / k_min, static_cast<double>(i) / (n_k - 1));

  std::vector<std::optional<NeutralPoint>> st(n_k), os(n_k);
  const int n_threads = std::max(1, opts_.threads);
  auto work = [&](int t0, int t1) {
    double seed_st = 0.0, seed_os = 0.0;
    for (int i = t0; i < t1; ++i) {
      st[i] = neutral_R(ks[i], Branch::Stationary, seed_st);
      if (st[i]) seed_st = st[i]->R;
      os[i] = neutral_R(ks[i], Branch::Oscillatory, seed_os);
      if (os[i]) seed_os = os[i]->R;
    }
  };
  if (n_threads == 1) {
    work(0, n_k);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_k + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int t0 = t * chunk, t1 = std::min(n_k, (t + 1) * chunk);
      if (t0 < t1) pool.emplace_back(work, t0, t1);
    }
    for (auto& th : pool) th.join();
  }

  NeutralCurve curve;
  for (int i = 0; i < n_k; ++i) {
    if (st[i]) curve.stationary.push_back(*st[i]);
    if (os[i]) curve.oscillatory.push_back(*os[i]);
    if (!st[i] && !os[i]) curve.gaps.push_back(ks[i]);
  }
  return curve;
}

std::optional<double> StabilityProblem::oscillatory_junction(const NeutralCurve& curve) const {
  if (curve.oscillatory.empty()) return std::nullopt;
  double k_lo = 0.0;
  for (const auto& p : curve.oscillatory) k_lo = std::max(k_lo, p.k);
  // first stationary-only wavenumber above the last oscillatory one
  double k_hi = kInf;
  for (const auto& p : curve.stationary)
    if (p.k > k_lo) k_hi = std::min(k_hi, p.k);
  if (!std::isfinite(k_hi)) return k_lo;
  double seed = curve.oscillatory.back().R;
  for (int it = 0; it < 10 && (k_hi - k_lo) > 0.02 * k_lo; ++it) {
    const double k_mid = std::sqrt(k_lo * k_hi);
    const auto c = find_crossing(k_mid, Branch::Oscillatory, seed);
    if (c) {
      k_lo = k_mid;
      seed = c->R;
    } else {
      k_hi = k_mid;
    }
  }
  return k_lo;
}

CriticalSolution StabilityProblem::find_critical(const NeutralCurve& curve) const {
  std::vector<NeutralPoint> all = curve.stationary;
  all.insert(all.end(), curve.oscillatory.begin(), curve.oscillatory.end());
  if (all.empty()) throw std::runtime_error("find_critical: empty neutral curve");

  const NeutralPoint* best = &all[0];
  for (const auto& p : all)
    if (p.R < best->R) best = &p;
  const Branch branch = best->branch;

  // bracket in k among same-branch sweep neighbours
  const auto& fam = (branch == Branch::Stationary) ? curve.stationary : curve.oscillatory;
  double k_lo = best->k, k_hi = best->k;
  for (const auto& p : fam) {
    if (p.k < best->k && (k_lo == best->k || p.k > k_lo)) k_lo = p.k;
    if (p.k > best->k && (k_hi == best->k || p.k < k_hi)) k_hi = p.k;
  }
  if (k_lo == best->k) k_lo = best->k * 0.8;
  if (k_hi == best->k) k_hi = best->k * 1.25;

  auto r_of_k = [&](double k) -> double {
    const auto c = find_crossing(k, branch, best->R);
    return c ? c->R : kInf;
  };

  // golden-section refinement
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = k_lo, b = k_hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = r_of_k(x1), f2 = r_of_k(x2);
  while (b - a > opts_.golden_tol * b) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = r_of_k(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = r_of_k(x2);
    }
  }
  const double k_c = (f1 <= f2) ? x1 : x2;
  const auto cross = find_crossing(k_c, branch, best->R);
  if (!cross) throw std::runtime_error("find_critical: refinement lost the crossing");

  CriticalSolution sol;
  sol.k_c = k_c;
  sol.R_c = cross->R;
  sol.lambda_c = 2.0 * M_PI / k_c;
  sol.frequency = (branch == Branch::Oscillatory) ? std::abs(cross->gamma.imag()) : 0.0;
  sol.overstable = branch == Branch::Oscillatory;

  NeutralPoint pt{k_c, cross->R, sol.frequency, branch};
  sol.mode = classify_mode(neutral_eigenpair(pt));
  return sol;
}

Eigenpair StabilityProblem::neutral_eigenpair(const NeutralPoint& pt) const {
  const StabilityOperator op = build_operator(pt.k, pt.R);
  const std::complex<double> target(0.0, pt.branch == Branch::Oscillatory
                                             ? std::max(pt.frequency, opts_.im_tol)
                                             : 0.0);
  // pick the branch-consistent eigenvalue closest to neutrality
  const auto spec = growth_spectrum(op);
  std::complex<double> best{0.0, 0.0};
  double best_dist = kInf;
  for (const auto& g : spec) {
    const bool osc = std::abs(g.imag()) > opts_.im_tol * gamma_scale(g);
    if ((pt.branch == Branch::Oscillatory) != osc) continue;
    const double d = std::abs(g - target);
    if (d < best_dist) {
      best_dist = d;
      best = g;
    }
  }
  if (!std::isfinite(best_dist))
    throw std::runtime_error("neutral_eigenpair: no branch-consistent eigenvalue");
  return eigenpair_near(op, best);
}

int classify_mode(const Eigenpair& pair) {
  const int n = static_cast<int>(pair.W.size());
  double amax = 0.0;
  int imax = 0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(pair.W(i));
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (amax < 1e-12) return 0;  // degenerate vertical velocity
  const std::complex<double> phase = std::conj(pair.W(imax)) / amax;
  int changes = 0;
  int prev_sign = 0;
  for (int i = 1; i < n - 1; ++i) {
    const double re = (pair.W(i) * phase).real();
    if (std::abs(re) < 1e-9 * amax) continue;
    const int s = re > 0.0 ? 1 : -1;
    if (prev_sign != 0 && s != prev_sign) ++changes;
    prev_sign = s;
  }
  return 1 + changes;
}

Eigen::MatrixXd eigenfunction_field(const Eigenpair& pair, double k, int n_x, double t) {
  const int n_z = static_cast<int>(pair.W.size());
  Eigen::MatrixXd w(n_x, n_z);
  const std::complex<double> growth = std::exp(pair.gamma * t);
  for (int i = 0; i < n_x; ++i) {
    const double x = 2.0 * M_PI / k * static_cast<double>(i) / n_x;
    const std::complex<double> phase = growth * std::exp(std::complex<double>(0.0, k * x));
    for (int j = 0; j < n_z; ++j) w(i, j) = (pair.W(j) * phase).real();
  }
  return w;
}

}  // namespace photobio
