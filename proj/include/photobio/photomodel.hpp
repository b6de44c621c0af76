#pragma once

#include <string>

namespace photobio {

enum class TaxisKind { GC13, GC19 };
enum class TopBC { Rigid, StressFree };

/// Nondimensional control parameters of the illuminated suspension.
struct SuspensionParams {
  double schmidt = 20.0;          // S_c
  double swim_speed = 15.0;       // V_c
  double extinction = 0.5;        // kappa
  double albedo = 0.4;            // omega in [0, 1]
  double diffuse_mag = 0.26;      // I_D
  double collimated_mag = 1.0;    // I_t
  double incidence_deg = 0.0;     // theta_i, degrees in [0, 80]
  double refractive_index = 1.333;
  TaxisKind taxis = TaxisKind::GC13;
  TopBC top_bc = TopBC::Rigid;    // bottom is always rigid

  void validate() const;  // throws std::invalid_argument
  double refraction() const;  // theta_0 in radians
};

/// Snell refraction of the incident beam at the air-water interface.
/// theta_i in degrees, result theta_0 in radians.
double refraction_angle(double theta_i_deg, double n0);

/// Phototaxis response T(G): positive below the critical intensity,
/// negative above it.
///
///   T(G) = 0.8 sin(3pi/2 Xi) - 0.1 sin(pi/2 Xi),
///   Xi(G) = (G / 3.8) exp(c (3.8 - G))
///
/// c is the self-shading exponent (0.252 for the G_c = 1.3 response,
/// 0.135 for G_c = 1.9).  The closed form does not vanish exactly at the
/// nominal G_c; root() returns the actual zero, located once by bisection.
struct TaxisFunction {
  double critical_intensity;  // nominal label G_c
  double shading_rate;        // exponent constant c

  double value(double g) const;
  double slope(double g) const;  // dT/dG, analytic
  double root() const;           // actual zero of T on (0, 3.8)

  static TaxisFunction make(TaxisKind kind);
};

std::string to_string(TaxisKind kind);
std::string to_string(TopBC bc);

}  // namespace photobio
