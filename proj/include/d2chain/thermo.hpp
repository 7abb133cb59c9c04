#pragma once

#include "d2chain/models.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace d2chain {

// Thermodynamic-limit root densities and the closed-form energies built from
// them.  Everything here lives on the unit circle (trig family, spectral
// parameter folded to (-pi, pi]) or on the real line (rational family).

// ---------------------------------------------------------------------------
// Convolution kernels
//
// kernel_a is odd in u, kernel_b even.  Both are half sums of
// cot((u -+ i*lam)/2), and their Fourier coefficients over (-pi, pi] are
//   int e^{-iku} kernel_a(lam, u) du = -2 pi i sign(k)   e^{-|lam k|}
//   int e^{-iku} kernel_b(lam, u) du = -2 pi i sign(lam) e^{-|lam k|}
// (real lam; for complex lam kernel_b continues analytically and the decay
// rate becomes Re lam).

inline Complex kernel_a(Complex lam, double u) {
  return std::sin(Complex(u)) / (std::cosh(lam) - std::cos(Complex(u)));
}

inline Complex kernel_b(Complex lam, double u) {
  return Complex{0.0, -1.0} * std::sinh(lam) /
         (std::cosh(lam) - std::cos(Complex(u)));
}

inline Complex kernel_a_fourier(double lam, int k) {
  const double sk = (k > 0) - (k < 0);
  return Complex{0.0, -2.0 * PI * sk} * std::exp(-std::abs(lam * k));
}

inline Complex kernel_b_fourier(double lam, int k) {
  const double sl = (lam > 0) - (lam < 0);
  return Complex{0.0, -2.0 * PI * sl} * std::exp(-std::abs(lam * k));
}

// Trapezoid Fourier coefficient int_{-pi}^{pi} f(u) e^{-iku} du.  For smooth
// periodic f the rule converges geometrically in the grid size.
template <typename F>
Complex fourier_coefficient(F&& f, int k, int grid = 4096) {
  Complex acc = 0.0;
  const double h = 2.0 * PI / grid;
  for (int j = 0; j < grid; ++j) {
    const double u = -PI + h * j;
    acc += f(u) * std::exp(Complex{0.0, -k * u});
  }
  return acc * h;
}

// ---------------------------------------------------------------------------
// Trigonometric density of transfer-matrix zeros (ground-state pattern:
// conjugate pairs near the real axis plus one additional pair at distance z_a
// from Re = pi).  The k-space form is exact at order 1/N; pass
// z_a = infinity to drop the additional pair.

namespace detail {

inline Complex abar2(const DerivedBoundary& d) { return d.a2 - Complex{0.0, PI}; }
inline Complex abar2p(const DerivedBoundary& d) { return d.a2p - Complex{0.0, PI}; }

}  // namespace detail

inline Complex density_trig(double k, double eta, const DerivedBoundary& der,
                            int sites, double z_a) {
  const double ak = std::abs(k);
  const Complex i{0.0, 1.0};
  const Complex e2 = std::exp(Complex(-2.0 * eta * ak));
  const Complex pplus = std::exp(i * k * PI);
  const Complex pminus = std::exp(-i * k * PI);
  Complex edge = e2 * pplus + e2 - 1.0 - pminus;
  edge += std::exp(-(der.a1 - 2.0 * eta) * ak) * pminus;
  edge += std::exp(-(der.a1p - 2.0 * eta) * ak) * pminus;
  edge += std::exp(-(detail::abar2(der) - 2.0 * eta) * ak);
  edge += std::exp(-(detail::abar2p(der) - 2.0 * eta) * ak);
  if (std::isfinite(z_a)) {
    edge -= std::exp(-z_a * ak) * pminus;
    edge -= std::exp(-(z_a - 4.0 * eta) * ak) * pminus;
  }
  return 2.0 * e2 + edge / static_cast<double>(sites);
}

// Real-space density, smooth part only.  The full density also carries two
// point masses -(1/sites) delta(u) and -(1/sites) delta(u - pi); integrals
// against test functions must add those contributions analytically.
inline Complex density_trig_u(double u, double eta, const DerivedBoundary& der,
                              int sites, double z_a) {
  const Complex i{0.0, 1.0};
  const double n = sites;
  Complex rho = i / PI * kernel_b(2.0 * eta, u);
  Complex edge = kernel_b(2.0 * eta, u - PI) + kernel_b(2.0 * eta, u);
  edge += kernel_b(der.a1 - 2.0 * eta, u - PI);
  edge += kernel_b(der.a1p - 2.0 * eta, u - PI);
  edge += kernel_b(detail::abar2(der) - 2.0 * eta, u);
  edge += kernel_b(detail::abar2p(der) - 2.0 * eta, u);
  if (std::isfinite(z_a)) {
    edge -= kernel_b(Complex(z_a), u - PI);
    edge -= kernel_b(Complex(z_a - 4.0 * eta), u - PI);
  }
  return rho + i / (2.0 * PI * n) * edge;
}

// int_{-pi}^{pi} coth((2 eta + i z)/2) rho(z) dz evaluated in Fourier space:
// the coth factor has coefficients 2 pi (1 - sign k) e^{-2 eta |k|}, so the
// integral collapses to rho~(0) + 2 sum_{k>=1} rho~(k) e^{-2 eta k}.
inline Complex trig_coth_moment(double eta, const DerivedBoundary& der,
                                int sites, double z_a, double term_tol = 1e-16) {
  double rate = std::min(2.0 * eta, der.a1.real());
  rate = std::min(rate, der.a1p.real());
  rate = std::min(rate, detail::abar2(der).real());
  rate = std::min(rate, detail::abar2p(der).real());
  if (std::isfinite(z_a)) rate = std::min(rate, z_a - 2.0 * eta);
  require(rate > 0.0, "trig_coth_moment: series does not converge");
  const long kmax = std::min<long>(
      static_cast<long>(40.0 / rate) + 16, 4000000L);
  Complex acc = density_trig(0.0, eta, der, sites, z_a);
  for (long k = 1; k <= kmax; ++k) {
    const Complex term = 2.0 * density_trig(k, eta, der, sites, z_a) *
                         std::exp(-2.0 * eta * k);
    acc += term;
    if (k > 8 && std::abs(term) < term_tol) break;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Ground and surface energies, trigonometric family.
//
// The closed forms below assume the hermitian parameter families (real s, s',
// conjugate off-diagonal pairs) with branch signs already selected in `der`.

struct SurfaceEnergyResult {
  double value = 0.0;
  // Named contributions; they sum to `value`.
  std::vector<std::pair<std::string, Complex>> breakdown;
  bool in_regime = true;
  std::string echo;
};

namespace detail {

inline void push_sector_terms(std::vector<std::pair<std::string, Complex>>& out,
                              double eta, const DerivedBoundary& der,
                              Complex sP, const std::string& suffix) {
  out.emplace_back("additional_pair_limit" + suffix, Complex(0.5));
  out.emplace_back("coth_2eta" + suffix, -0.25 / std::tanh(2.0 * eta));
  out.emplace_back("coth_eta" + suffix, 0.25 / std::tanh(eta));
  out.emplace_back("tanh_eta" + suffix, 0.25 * std::tanh(eta));
  out.emplace_back("alpha_1" + suffix, -0.25 * std::tanh(0.5 * der.a1));
  out.emplace_back("alpha_1_prime" + suffix, -0.25 * std::tanh(0.5 * der.a1p));
  out.emplace_back("alpha_2_bar" + suffix,
                   -0.25 / std::tanh(0.5 * abar2(der)));
  out.emplace_back("alpha_2_bar_prime" + suffix,
                   -0.25 / std::tanh(0.5 * abar2p(der)));
  out.emplace_back("edge_field" + suffix,
                   0.25 * std::tanh(2.0 * eta) / std::tanh(sP));
}

inline double close_result(SurfaceEnergyResult& r, const char* who) {
  Complex total = 0.0;
  double scale = 1.0;
  for (const auto& [name, term] : r.breakdown) {
    total += term;
    scale = std::max(scale, std::abs(term));
  }
  require(std::abs(total.imag()) <= 1e-12 * scale,
          std::string(who) + ": imaginary residue in a hermitian-family value");
  r.value = total.real();
  return r.value;
}

}  // namespace detail

inline SurfaceEnergyResult surface_energy_xxz(double eta,
                                              const DerivedBoundary& der,
                                              Complex sP) {
  SurfaceEnergyResult r;
  detail::push_sector_terms(r.breakdown, eta, der, sP, "");
  detail::close_result(r, "surface_energy_xxz");
  r.echo = "xxz sector, eta=" + std::to_string(eta);
  return r;
}

inline SurfaceEnergyResult surface_energy_d2_trig(double eta,
                                                  const DerivedBoundary& der_s,
                                                  const DerivedBoundary& der_t,
                                                  Complex sP, Complex tP) {
  SurfaceEnergyResult r;
  detail::push_sector_terms(r.breakdown, eta, der_s, sP, "_sigma");
  detail::push_sector_terms(r.breakdown, eta, der_t, tP, "_tau");
  detail::close_result(r, "surface_energy_d2_trig");
  r.echo = "d2 trig, eta=" + std::to_string(eta);
  return r;
}

// Closed-form ground energy of the open sector chain.  Finite z_a keeps the
// additional pair at its finite-size position; the default takes the limit
// where its two half contributions become the constant +1/2.
inline double ground_energy_trig(int sites, double eta,
                                 const DerivedBoundary& der, Complex sP,
                                 double z_a = std::numeric_limits<double>::infinity()) {
  const SurfaceEnergyResult s = surface_energy_xxz(eta, der, sP);
  double e = -0.5 * sites / std::tanh(2.0 * eta) + s.value;
  if (std::isfinite(z_a)) {
    // replace the limiting +1/2 by the finite-position pair term
    e += -0.5 - 0.5 * std::tanh(0.5 * (2.0 * eta - z_a));
  }
  return e;
}

// Dual route for the same quantity: assemble the energy from the k-space
// density instead of the evaluated closed form.  Needs the additional pair at
// a finite position; even at large z_a its k=0 weight keeps contributing the
// constant that the closed form books as +1/2.
inline Complex ground_energy_trig_series(int sites, double eta,
                                         const DerivedBoundary& der, Complex sP,
                                         double z_a) {
  require(std::isfinite(z_a), "ground_energy_trig_series: z_a must be finite");
  Complex e = -0.25 * sites * trig_coth_moment(eta, der, sites, z_a);
  e += 0.25 * std::tanh(2.0 * eta) * (1.0 + 1.0 / std::tanh(sP));
  e -= 0.25 * (std::tanh(0.5 * (2.0 * eta + z_a)) +
               std::tanh(0.5 * (2.0 * eta - z_a)));
  return e;
}

// Position of the additional pair at chain length N: linear in N with slope
// 2 eta; the default intercept is the value fitted from finite-size scans.
inline double z_a_prediction(int sites, double eta, double intercept = 1.758) {
  return 2.0 * eta * sites + intercept;
}

// ---------------------------------------------------------------------------
// Boundary string correction.  When Re(alpha_1) drops below 2 eta the pair
// attached to alpha_1 leaves the line Im = +-(2 eta - ...) and becomes a
// string at Re = pi; the density acquires a back-flow that cancels the
// string's direct energy exactly.

struct StringCorrectionTerms {
  double direct = 0.0;
  double backflow = 0.0;
};

inline StringCorrectionTerms boundary_string_correction_terms(double eta,
                                                              double alpha1) {
  require(alpha1 > 0.0 && alpha1 < 4.0 * eta,
          "boundary_string_correction: need 0 < alpha1 < 4 eta");
  StringCorrectionTerms t;
  t.direct = -0.25 * (std::tanh(0.5 * alpha1) +
                      std::tanh(0.5 * (4.0 * eta - alpha1)));
  // -(N/4)[drho~(0) + 2 sum_{k>=1} drho~(k) e^{-2 eta k}] with
  // N drho~(k) = -(-1)^k [e^{-(4 eta - alpha1)k} + e^{-alpha1 k}] e^{2 eta k}
  const double ra = alpha1;
  const double rb = 4.0 * eta - alpha1;
  double acc = -2.0;
  double sign = -1.0;
  for (long k = 1; k <= 4000000L; ++k) {
    const double term = 2.0 * sign * (-(std::exp(-rb * k) + std::exp(-ra * k)));
    acc += term;
    sign = -sign;
    if (k > 8 && std::abs(term) < 1e-17) break;
  }
  t.backflow = -0.25 * acc;
  return t;
}

inline double boundary_string_correction_trig(double eta, double alpha1) {
  const StringCorrectionTerms t = boundary_string_correction_terms(eta, alpha1);
  return t.direct + t.backflow;
}

// ---------------------------------------------------------------------------
// Isotropic (rational) family.

// int_0^infty e^{-a w} / (1 + e^{-w}) dw, via the substitution x = e^{-w}
// and adaptive Gauss-Kronrod on (0, 1].  The transform leaves an x^{a-1}
// endpoint singularity for a < 1, so the first four alternating terms are
// pulled out analytically; the remainder x^{a+3}/(1+x) is C^3 at the origin
// and the rule reaches the requested tolerance.
inline double fermi_integral(double a) {
  require(a > 0.0, "fermi_integral: need a > 0");
  double head = 0.0;
  for (int n = 0; n < 4; ++n) head += (n % 2 ? -1.0 : 1.0) / (a + n);
  auto f = [a](double x) { return std::pow(x, a + 3.0) / (1.0 + x); };
  double error = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, 1.0, 15, 1e-11, &error);
  return head + v;
}

// Same integral as an alternating series sum_{n>=0} (-1)^n/(a+n), in digamma
// closed form.
inline double fermi_integral_series(double a) {
  return 0.5 * (boost::math::digamma(0.5 * (a + 1.0)) -
                boost::math::digamma(0.5 * a));
}

inline double xxx_periodic_energy_per_site() { return 1.0 - 2.0 * std::log(2.0); }

inline SurfaceEnergyResult surface_energy_xxx(double p, double q, double xi) {
  require(p != 0.0 && q != 0.0, "surface_energy_xxx: p and q must be nonzero");
  const double root = std::sqrt(1.0 + xi * xi);
  const double qhat = q / root;
  SurfaceEnergyResult r;
  r.in_regime = p > 0.5 && qhat < -0.5;
  r.breakdown.emplace_back("bulk_offset", Complex(0.5 * (PI - 1.0) - std::log(2.0)));
  r.breakdown.emplace_back("pole_p", Complex(0.5 / std::abs(p)));
  r.breakdown.emplace_back("pole_q", Complex(0.5 * root / std::abs(q)));
  r.breakdown.emplace_back("fermi_p", Complex(-fermi_integral(std::abs(p))));
  r.breakdown.emplace_back("fermi_q", Complex(-fermi_integral(std::abs(qhat))));
  detail::close_result(r, "surface_energy_xxx");
  r.echo = "xxx sector, p=" + std::to_string(p) + " q=" + std::to_string(q) +
           " xi=" + std::to_string(xi);
  return r;
}

inline SurfaceEnergyResult surface_energy_d2_xxx(const XXXReducedBoundary& a,
                                                 const XXXReducedBoundary& b) {
  const SurfaceEnergyResult ra = surface_energy_xxx(a.p, a.q, a.xi);
  const SurfaceEnergyResult rb = surface_energy_xxx(b.p, b.q, b.xi);
  SurfaceEnergyResult r;
  r.in_regime = ra.in_regime && rb.in_regime;
  for (const auto& [name, term] : ra.breakdown)
    r.breakdown.emplace_back(name + "_sigma", term);
  for (const auto& [name, term] : rb.breakdown)
    r.breakdown.emplace_back(name + "_tau", term);
  detail::close_result(r, "surface_energy_d2_xxx");
  return r;
}

inline double xxx_ground_energy(int sites, const XXXReducedBoundary& red) {
  return sites * xxx_periodic_energy_per_site() +
         surface_energy_xxx(red.p, red.q, red.xi).value;
}

// k-space density of the isotropic chain.  Only meaningful when every edge
// term decays (p, q/sqrt(1+xi^2) and z_a -+ 1/2 all positive).
inline double density_xxx(double k, const XXXReducedBoundary& red, int sites,
                          double z_a) {
  const double ak = std::abs(k);
  const double qhat = red.q / std::sqrt(1.0 + red.xi * red.xi);
  double num = std::exp(-ak) - std::exp(-0.5 * ak) + std::exp(-red.p * ak) +
               std::exp(-qhat * ak);
  if (std::isfinite(z_a)) {
    num -= std::exp(-(z_a + 0.5) * ak) + std::exp(-(z_a - 0.5) * ak);
  }
  const double den = std::exp(-0.5 * ak) + std::exp(-1.5 * ak);
  return 1.0 / std::cosh(0.5 * k) + num / (sites * den);
}

// Dual route for the isotropic ground energy: integrate the density against
// the bare one-body kernel.  Valid in the all-decaying regime (see
// density_xxx); the additional pair enters through its explicit pole term.
inline double xxx_ground_energy_series(int sites, const XXXReducedBoundary& red,
                                       double z_a) {
  const double qhat = red.q / std::sqrt(1.0 + red.xi * red.xi);
  require(red.p > 0.0 && qhat > 0.0,
          "xxx_ground_energy_series: needs decaying edge terms");
  auto f = [&](double k) {
    const double w = std::exp(-1.5 * k) - std::exp(-0.5 * k);
    return w * density_xxx(k, red, sites, z_a);
  };
  // the integrand is smooth in k, so integrate there and truncate where the
  // slowest exponential has decayed past the tolerance
  double rate = std::min(0.5, std::min(red.p, qhat));
  if (std::isfinite(z_a)) rate = std::min(rate, z_a - 0.5);
  require(rate > 1e-3, "xxx_ground_energy_series: edge decay too slow");
  double error = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, 60.0 / rate, 15, 1e-11, &error);
  double e = 0.5 * sites * v;
  if (std::isfinite(z_a)) e += 2.0 / (1.0 - 4.0 * z_a * z_a);
  return e;
}

}  // namespace d2chain
