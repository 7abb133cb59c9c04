#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "d2chain/tensor.hpp"

namespace d2chain {

enum class PolyBasis { Trig, Rational };

// Trig basis: f(u) = e^{-D u/2} sum_m c_m e^{m u},  m = 0..D  (D = degree).
// Rational basis: f(u) = sum_m c_m u^m.
struct TrigPolynomial {
  PolyBasis basis = PolyBasis::Trig;
  int degree = 0;
  Vector coeff;  // size degree+1

  Complex eval(Complex u) const {
    if (basis == PolyBasis::Trig) {
      const Complex y = std::exp(u);
      Complex acc{0.0, 0.0};
      for (int m = degree; m >= 0; --m) acc = acc * y + coeff(m);
      return acc * std::exp(-0.5 * static_cast<double>(degree) * u);
    }
    Complex acc{0.0, 0.0};
    for (int m = degree; m >= 0; --m) acc = acc * u + coeff(m);
    return acc;
  }
};

struct PolyFit {
  TrigPolynomial poly;
  double residual = 0.0;  // max |fit - sample| over the sample set
};

// Spectral sampling grid: trig grids live on the imaginary axis (e^u on the unit
// circle), rational grids on a circle of the given radius.
inline std::vector<Complex> poly_sample_points(PolyBasis basis, int count,
                                               double radius = 1.0) {
  require(count >= 1, "poly_sample_points: empty grid");
  std::vector<Complex> pts(count);
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * PI * (k + 0.5) / count - PI;
    if (basis == PolyBasis::Trig)
      pts[k] = Complex{0.0, phi};
    else
      pts[k] = radius * std::exp(Complex{0.0, phi});
  }
  return pts;
}

inline PolyFit fit_polynomial(const std::vector<Complex>& u,
                              const std::vector<Complex>& f, int degree,
                              PolyBasis basis) {
  require(u.size() == f.size(), "fit_polynomial: sample size mismatch");
  const int m = static_cast<int>(u.size());
  require(m >= degree + 1, "fit_polynomial: fewer samples than coefficients");

  // column scaling keeps the rational Vandermonde well conditioned
  double scale = 1.0;
  if (basis == PolyBasis::Rational) {
    for (const Complex& x : u) scale = std::max(scale, std::abs(x));
  }

  Matrix a(m, degree + 1);
  Vector b(m);
  for (int r = 0; r < m; ++r) {
    Complex base = (basis == PolyBasis::Trig) ? std::exp(u[r]) : u[r] / scale;
    Complex p{1.0, 0.0};
    for (int c = 0; c <= degree; ++c) {
      a(r, c) = p;
      p *= base;
    }
    b(r) = (basis == PolyBasis::Trig)
               ? f[r] * std::exp(0.5 * static_cast<double>(degree) * u[r])
               : f[r];
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  require(qr.rank() == degree + 1, "fit_polynomial: rank-deficient sample set");
  Vector c = qr.solve(b);

  PolyFit out;
  out.poly.basis = basis;
  out.poly.degree = degree;
  out.poly.coeff = c;
  if (basis == PolyBasis::Rational) {
    double s = 1.0;
    for (int k = 0; k <= degree; ++k) {
      out.poly.coeff(k) = c(k) * s;
      s /= scale;
    }
  }
  double res = 0.0;
  for (int r = 0; r < m; ++r)
    res = std::max(res, std::abs(out.poly.eval(u[r]) - f[r]));
  out.residual = res;
  return out;
}

namespace detail {

inline std::vector<Complex> companion_roots(const Vector& coeff) {
  const int d = static_cast<int>(coeff.size()) - 1;
  Matrix comp = Matrix::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) comp(k + 1, k) = 1.0;
  for (int k = 0; k < d; ++k) comp(k, d - 1) = -coeff(k) / coeff(d);
  Eigen::ComplexEigenSolver<Matrix> es(comp, false);
  require(es.info() == Eigen::Success, "companion_roots: eigensolver failed");
  std::vector<Complex> roots(d);
  for (int k = 0; k < d; ++k) roots[k] = es.eigenvalues()(k);

  // a couple of Newton polish sweeps on the original coefficients
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (Complex& z : roots) {
      Complex p{0.0, 0.0}, dp{0.0, 0.0};
      for (int m = d; m >= 0; --m) {
        dp = dp * z + p;
        p = p * z + coeff(m);
      }
      if (std::abs(dp) > 0.0) {
        Complex step = p / dp;
        if (std::isfinite(step.real()) && std::isfinite(step.imag())) z -= step;
      }
    }
  }
  return roots;
}

}  // namespace detail

// Roots in the u plane.  In the trig basis the companion roots live in
// y = e^u; the returned u keeps Im(u) in (-pi, pi].
inline std::vector<Complex> polynomial_roots(const TrigPolynomial& p,
                                             double lead_tol = 1e-9) {
  const int d = p.degree;
  require(d >= 1, "polynomial_roots: degree zero");
  const double cmax = p.coeff.cwiseAbs().maxCoeff();
  require(cmax > 0.0, "polynomial_roots: zero polynomial");
  require(std::abs(p.coeff(d)) > lead_tol * cmax,
          "polynomial_roots: leading coefficient below tolerance");
  if (p.basis == PolyBasis::Trig)
    require(std::abs(p.coeff(0)) > lead_tol * cmax,
            "polynomial_roots: trailing coefficient below tolerance (trig)");

  std::vector<Complex> raw = detail::companion_roots(p.coeff);
  if (p.basis == PolyBasis::Rational) return raw;

  std::vector<Complex> out;
  out.reserve(raw.size());
  for (const Complex& y : raw) {
    require(std::abs(y) > 1e-200, "polynomial_roots: root at e^u = 0");
    Complex u = std::log(y);  // principal branch: Im in (-pi, pi]
    if (u.imag() <= -PI) u += Complex{0.0, 2.0 * PI};
    out.push_back(u);
  }
  return out;
}

}  // namespace d2chain
