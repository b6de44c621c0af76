#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace photobio {

/// Finite generalized eigenvalues of A x = gamma B x (real dense pair),
/// sorted by descending real part.  Vectors are normalized to unit infinity
/// norm when requested.
struct GeneralizedEig {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd vectors;  // one column per kept eigenvalue (may be empty)
};

GeneralizedEig eig_dggev(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         bool want_vectors);

}  // namespace photobio
