#include "photobio/photomodel.hpp"

#include <cmath>
#include <stdexcept>

namespace photobio {

void SuspensionParams::validate() const {
  if (!(extinction > 0.0)) throw std::invalid_argument("extinction must be > 0");
  if (!(albedo >= 0.0 && albedo <= 1.0)) throw std::invalid_argument("albedo must lie in [0, 1]");
  if (!(swim_speed > 0.0)) throw std::invalid_argument("swim_speed must be > 0");
  if (!(diffuse_mag >= 0.0)) throw std::invalid_argument("diffuse_mag must be >= 0");
  if (!(collimated_mag >= 0.0)) throw std::invalid_argument("collimated_mag must be >= 0");
  if (!(incidence_deg >= 0.0 && incidence_deg <= 80.0))
    throw std::invalid_argument("incidence_deg must lie in [0, 80]");
  if (!(refractive_index > 1.0)) throw std::invalid_argument("refractive_index must be > 1");
  if (!(schmidt > 0.0)) throw std::invalid_argument("schmidt must be > 0");
}

double SuspensionParams::refraction() const {
  return refraction_angle(incidence_deg, refractive_index);
}

double refraction_angle(double theta_i_deg, double n0) {
  if (theta_i_deg < 0.0 || theta_i_deg >= 90.0)
    throw std::domain_error("refraction_angle: incidence must lie in [0, 90) degrees");
  if (!(n0 > 1.0)) throw std::domain_error("refraction_angle: refractive index must exceed 1");
  return std::asin(std::sin(theta_i_deg * M_PI / 180.0) / n0);
}

namespace {

double xi_of(double g, double c) { return g / 3.8 * std::exp(c * (3.8 - g)); }

}  // namespace

double TaxisFunction::value(double g) const {
  const double xi = xi_of(g, shading_rate);
  return 0.8 * std::sin(1.5 * M_PI * xi) - 0.1 * std::sin(0.5 * M_PI * xi);
}

double TaxisFunction::slope(double g) const {
  const double xi = xi_of(g, shading_rate);
  const double dxi = (1.0 / 3.8 - shading_rate * g / 3.8) * std::exp(shading_rate * (3.8 - g));
  return (0.8 * 1.5 * M_PI * std::cos(1.5 * M_PI * xi) -
          0.1 * 0.5 * M_PI * std::cos(0.5 * M_PI * xi)) * dxi;
}

double TaxisFunction::root() const {
  // T > 0 just above G = 0 and T < 0 at G = 3.8; Xi is monotone there,
  // so the sign change is unique.
  double lo = 1e-8, hi = 3.8;
  if (!(value(lo) > 0.0 && value(hi) < 0.0))
    throw std::logic_error("taxis root: bracket lost");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

TaxisFunction TaxisFunction::make(TaxisKind kind) {
  switch (kind) {
    case TaxisKind::GC13: return {1.3, 0.252};
    case TaxisKind::GC19: return {1.9, 0.135};
  }
  throw std::logic_error("unknown taxis kind");
}

std::string to_string(TaxisKind kind) {
  return kind == TaxisKind::GC13 ? "gc13" : "gc19";
}

std::string to_string(TopBC bc) {
  return bc == TopBC::Rigid ? "rigid" : "stress_free";
}

}  // namespace photobio
