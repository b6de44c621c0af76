#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace photobio {

/// One interval of a characteristic sweep.  The update is
///   psi_{j+1} = E * psi_j + sum_m w[m] * g_{base+m}
/// where g holds the nodal values of the volumetric right-hand side
/// (already divided by |direction cosine|).
struct RaySegment {
  std::complex<double> atten;    // exp(-A) over the interval
  int base = 0;                  // first node of the 4-point source stencil
  std::complex<double> w[4];     // source weights
};

/// Build the per-interval updates of
///   d psi/dt = -(a_const + prof_scale * p(t)) psi + g(t)
/// along the ascending coordinate t (propagation order).  p is interpolated
/// by local cubics; the attenuation integral is evaluated exactly on that
/// interpolant, and the source integral by Gauss panels short enough that
/// no panel spans more than ~0.8 units of attenuation.
std::vector<RaySegment> build_ray_segments(std::span<const double> t,
                                           std::span<const double> profile,
                                           double prof_scale,
                                           std::complex<double> a_const);

/// Sweep the segments with a given entry value and nodal right-hand side.
std::vector<std::complex<double>> sweep_ray(const std::vector<RaySegment>& segs,
                                            std::complex<double> entry,
                                            std::span<const std::complex<double>> rhs);

std::vector<double> sweep_ray_real(const std::vector<RaySegment>& segs, double entry,
                                   std::span<const double> rhs);

/// Accumulate the linear response psi_j = sum_m T(j, m) g_m (zero entry value)
/// into T with the given prefactor: T += c * response.  `reversed` maps the
/// propagation order back to the caller's grid order (downward sweeps).
/// col_scale, when nonempty, scales the response to source node m by
/// col_scale[m] in grid order.
void accumulate_ray_response(const std::vector<RaySegment>& segs, std::complex<double> c,
                             bool reversed, Eigen::MatrixXcd& T,
                             std::span<const double> col_scale = {});

}  // namespace photobio
