#include "photobio/eigsolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace photobio {

GeneralizedEig eig_dggev(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         bool want_vectors) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n || B.cols() != n)
    throw std::invalid_argument("eig_dggev: matrices must be square and matching");

  Eigen::MatrixXd a = A, b = B;  // dggev overwrites
  std::vector<double> alphar(n), alphai(n), beta(n);
  Eigen::MatrixXd vr;
  double* vr_ptr = nullptr;
  if (want_vectors) {
    vr.resize(n, n);
    vr_ptr = vr.data();
  }

  const lapack_int info = LAPACKE_dggev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n, b.data(), n,
      alphar.data(), alphai.data(), beta.data(), nullptr, 1, vr_ptr,
      want_vectors ? n : 1);
  if (info != 0) throw std::runtime_error("eig_dggev: LAPACK dggev failed, info " +
                                          std::to_string(info));

  // keep finite eigenvalues only
  double beta_scale = 0.0;
  for (int i = 0; i < n; ++i) beta_scale = std::max(beta_scale, std::abs(beta[i]));
  const double beta_floor = 1e-10 * std::max(beta_scale, 1e-300);

  struct Item {
    std::complex<double> gamma;
    int col;
    bool second_of_pair;
  };
  std::vector<Item> kept;
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[i]) <= beta_floor) continue;
    const std::complex<double> g(alphar[i] / beta[i], alphai[i] / beta[i]);
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) continue;
    if (std::abs(g) > 1e12) continue;
    kept.push_back({g, i, alphai[i] < 0.0});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Item& x, const Item& y) {
    return x.gamma.real() > y.gamma.real();
  });

  GeneralizedEig out;
  out.values.reserve(kept.size());
  if (want_vectors) out.vectors.resize(n, static_cast<int>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out.values.push_back(kept[j].gamma);
    if (!want_vectors) continue;
    const int i = kept[j].col;
    Eigen::VectorXcd v(n);
    if (alphai[i] == 0.0) {
      v = vr.col(i).cast<std::complex<double>>();
    } else if (!kept[j].second_of_pair) {
      // first of a conjugate pair: v = vr_i + i vr_{i+1}
      v.real() = vr.col(i);
      v.imag() = vr.col(i + 1);
    } else {
      v.real() = vr.col(i - 1);
      v.imag() = -vr.col(i);
    }
    const double norm = v.lpNorm<Eigen::Infinity>();
    if (norm > 0.0) v /= norm;
    out.vectors.col(static_cast<int>(j)) = v;
  }
  return out;
}

}  // namespace photobio
