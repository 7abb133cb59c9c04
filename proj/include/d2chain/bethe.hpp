#pragma once

#include <functional>

#include "d2chain/polynomial.hpp"
#include "d2chain/spectra.hpp"

namespace d2chain {

// ---------------------------------------------------------------------------
// Inhomogeneous T-Q forms.  Each struct evaluates the candidate eigenvalue for
// a given root set and exposes the three cleared coefficient functions
//   lambda(u) Q(u) pole(u) = ac(u) Q(u+da) + dc(u) Q(u+dd) + xc(u)
// with pole(u) the common denominator factor, so root conditions never touch
// the removable singularity.

struct TqSectorTrig {
  double eta = 0.0;
  std::vector<Complex> theta;
  XxzBoundary b;
  DerivedBoundary der;
  Complex w;  // chosen branch of sqrt(s1 s2 s1' s2')
  std::vector<Complex> mu;

  static TqSectorTrig make(double eta, std::vector<Complex> theta,
                           const XxzBoundary& b, bool flip_branch = false) {
    TqSectorTrig t;
    t.eta = eta;
    t.theta = std::move(theta);
    t.b = b;
    t.der = derived_boundary(b);
    t.w = std::sqrt(b.s1 * b.s2 * b.s1p * b.s2p);
    if (flip_branch) t.w = -t.w;
    return t;
  }

  int sites() const { return static_cast<int>(theta.size()); }
  double da() const { return 4.0 * eta; }
  double dd() const { return -4.0 * eta; }

  Complex qfun(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& m : mu)
      p *= std::sinh(0.5 * (u - m)) * std::sinh(0.5 * (u + m - 4.0 * eta));
    return p;
  }
  Complex abar(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& t : theta)
      p *= std::sinh(0.5 * (u - t - 4.0 * eta)) *
           std::sinh(0.5 * (u + t - 4.0 * eta));
    return p;
  }
  Complex dbar(Complex u) const { return abar(u + 4.0 * eta); }

  Complex x_plus() const {
    const int big_l = sites();
    return -2.0 * w *
               std::cosh(2.0 * (big_l + 1) * eta +
                         0.5 * (der.a1 + der.a2 + der.a1p + der.a2p)) -
           (std::exp(-2.0 * eta) * b.s1 * b.s2p +
            std::exp(2.0 * eta) * b.s2 * b.s1p);
  }

  Complex pole(Complex u) const { return std::sinh(u - 2.0 * eta); }

  // cleared coefficients (already multiplied by the pole factor)
  Complex ac(Complex u) const {
    return 2.0 * std::sinh(u - 4.0 * eta) * (2.0 * w) *
           std::cosh(0.5 * (u + der.a1)) * std::cosh(0.5 * (u + der.a2)) *
           std::cosh(0.5 * (u + der.a1p)) * std::cosh(0.5 * (u + der.a2p)) *
           abar(u);
  }
  Complex dc(Complex u) const {
    const Complex v = u - 4.0 * eta;
    return 2.0 * std::sinh(u) * (2.0 * w) * std::cosh(0.5 * (v - der.a1)) *
           std::cosh(0.5 * (v - der.a2)) * std::cosh(0.5 * (v - der.a1p)) *
           std::cosh(0.5 * (v - der.a2p)) * dbar(u);
  }
  Complex xc(Complex u) const {
    return x_plus() * std::sinh(u) * std::sinh(u - 4.0 * eta) * abar(u) *
           dbar(u) * pole(u);
  }

  Complex lambda(Complex u) const {
    if (std::abs(pole(u)) < 1e-6)
      return 0.5 * (lambda(u + 1e-5) + lambda(u - 1e-5));
    const Complex q0 = qfun(u);
    require(std::abs(q0) > 1e-13, "TqSectorTrig::lambda: evaluation on a root");
    return (ac(u) * qfun(u + da()) + dc(u) * qfun(u + dd()) + xc(u)) /
           (q0 * pole(u));
  }
};

struct TqSectorRational {
  std::vector<Complex> theta;
  XxzBoundary b;
  Complex w1, w2;  // branches of sqrt(1 + s1 s2), sqrt(1 + s1' s2')
  std::vector<Complex> mu;

  static TqSectorRational make(std::vector<Complex> theta, const XxzBoundary& b,
                               bool flip1 = false, bool flip2 = false) {
    TqSectorRational t;
    t.theta = std::move(theta);
    t.b = b;
    t.w1 = std::sqrt(1.0 + b.s1 * b.s2);
    t.w2 = std::sqrt(1.0 + b.s1p * b.s2p);
    if (flip1) t.w1 = -t.w1;
    if (flip2) t.w2 = -t.w2;
    return t;
  }

  int sites() const { return static_cast<int>(theta.size()); }
  double da() const { return -1.0; }
  double dd() const { return 1.0; }

  Complex qfun(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& m : mu) p *= (u - m) * (u + m + 1.0);
    return p;
  }
  Complex atil(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& t : theta) p *= (u - t + 1.0) * (u + t + 1.0);
    return p;
  }
  Complex dtil(Complex u) const { return atil(u - 1.0); }

  Complex x_plus() const {
    return 2.0 * w1 * w2 - (2.0 + b.s1 * b.s2p + b.s2 * b.s1p);
  }

  // the pole sits at -1/2, where the anisotropic pole sinh(u - 2 eta) lands
  // under the scaling limit; it also pairs the two dressed terms under
  // u -> -u - 1
  Complex pole(Complex u) const { return u + 0.5; }

  Complex ac(Complex u) const {
    return (u + 1.0) * (b.s + w1 * u) * (b.sp - w2 * u) * atil(u);
  }
  Complex dc(Complex u) const {
    return u * (b.s - w1 * (u + 1.0)) * (b.sp + w2 * (u + 1.0)) * dtil(u);
  }
  Complex xc(Complex u) const {
    return x_plus() * u * (u + 1.0) * atil(u) * dtil(u) * pole(u);
  }

  Complex lambda(Complex u) const {
    if (std::abs(pole(u)) < 1e-6)
      return 0.5 * (lambda(u + 1e-5) + lambda(u - 1e-5));
    const Complex q0 = qfun(u);
    require(std::abs(q0) > 1e-13,
            "TqSectorRational::lambda: evaluation on a root");
    return (ac(u) * qfun(u + da()) + dc(u) * qfun(u + dd()) + xc(u)) /
           (q0 * pole(u));
  }
};

struct TqReducedRational {
  std::vector<Complex> theta;
  XXXReducedBoundary rb;
  std::vector<Complex> mu;

  static TqReducedRational make(std::vector<Complex> theta,
                                const XXXReducedBoundary& rb) {
    TqReducedRational t;
    t.theta = std::move(theta);
    t.rb = rb;
    return t;
  }

  int sites() const { return static_cast<int>(theta.size()); }
  double da() const { return -1.0; }
  double dd() const { return 1.0; }
  double root_xi() const { return std::sqrt(1.0 + rb.xi * rb.xi); }

  Complex qfun(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& m : mu) p *= (u - m) * (u + m + 1.0);
    return p;
  }
  Complex abar(Complex u) const {
    Complex p{1.0, 0.0};
    for (const Complex& t : theta) p *= (u - t + 1.0) * (u + t + 1.0);
    return p;
  }
  Complex dbar(Complex u) const { return abar(u - 1.0); }

  Complex x_plus() const { return 2.0 - 2.0 * root_xi(); }

  Complex pole(Complex u) const { return u + 0.5; }

  Complex ac(Complex u) const {
    return (u + 1.0) * (u + rb.p) * (root_xi() * u + rb.q) * abar(u);
  }
  Complex dc(Complex u) const {
    return u * (rb.p - u - 1.0) * (rb.q - root_xi() * (u + 1.0)) * dbar(u);
  }
  Complex xc(Complex u) const {
    return x_plus() * u * (u + 1.0) * abar(u) * dbar(u) * pole(u);
  }

  Complex lambda(Complex u) const {
    if (std::abs(pole(u)) < 1e-6)
      return 0.5 * (lambda(u + 1e-5) + lambda(u - 1e-5));
    const Complex q0 = qfun(u);
    require(std::abs(q0) > 1e-13,
            "TqReducedRational::lambda: evaluation on a root");
    return (ac(u) * qfun(u + da()) + dc(u) * qfun(u + dd()) + xc(u)) /
           (q0 * pole(u));
  }
};

// ---------------------------------------------------------------------------
// Root conditions.  The cleared numerator must vanish at every zero of Q.

template <class Tq>
std::vector<double> bae_residuals(const Tq& tq) {
  std::vector<double> out;
  std::vector<Complex> zeros;
  constexpr bool trig = std::is_same_v<Tq, TqSectorTrig>;
  for (const Complex& m : tq.mu) {
    zeros.push_back(m);
    if constexpr (trig)
      zeros.push_back(Complex{4.0 * tq.eta - m});
    else
      zeros.push_back(Complex{-m - 1.0});
  }
  for (const Complex& r : zeros) {
    const Complex t1 = tq.ac(r) * tq.qfun(r + tq.da());
    const Complex t2 = tq.dc(r) * tq.qfun(r + tq.dd());
    const Complex t3 = tq.xc(r);
    const double scale =
        std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-30});
    out.push_back(std::abs(t1 + t2 + t3) / scale);
  }
  return out;
}

// Newton refinement of the root set; the map mu -> residual vector is
// holomorphic, so a complex Jacobian is enough.
template <class Tq>
double refine_bae(Tq& tq, int max_iter = 40, double tol = 1e-12) {
  const int n = static_cast<int>(tq.mu.size());
  if (n == 0) return 0.0;
  auto fvec = [&](const std::vector<Complex>& mu) {
    Tq probe = tq;
    probe.mu = mu;
    Vector f(n);
    for (int l = 0; l < n; ++l) {
      const Complex r = mu[l];
      f(l) = probe.ac(r) * probe.qfun(r + probe.da()) +
             probe.dc(r) * probe.qfun(r + probe.dd()) + probe.xc(r);
    }
    return f;
  };
  double last = 1e300;
  for (int it = 0; it < max_iter; ++it) {
    const Vector f0 = fvec(tq.mu);
    const double r0 = f0.norm();
    if (r0 < tol || std::abs(last - r0) < 1e-16 * std::max(1.0, r0)) break;
    last = r0;
    Matrix jac(n, n);
    const double h = 1e-7;
    for (int c = 0; c < n; ++c) {
      auto mup = tq.mu, mum = tq.mu;
      mup[c] += h;
      mum[c] -= h;
      jac.col(c) = (fvec(mup) - fvec(mum)) / (2.0 * h);
    }
    const Vector step = jac.colPivHouseholderQr().solve(f0);
    double damp = 1.0;
    for (int k = 0; k < 20; ++k) {
      auto trial = tq.mu;
      for (int c = 0; c < n; ++c) trial[c] -= damp * step(c);
      if (fvec(trial).norm() < r0) {
        tq.mu = trial;
        break;
      }
      damp *= 0.5;
      if (k == 19) return r0;
    }
  }
  auto res = bae_residuals(tq);
  return *std::max_element(res.begin(), res.end());
}

// ---------------------------------------------------------------------------
// Completeness machinery: for a sampled eigenvalue the T-Q identity
//   lambda(u) pole(u) Q(u) - ac(u) Q(u+da) - dc(u) Q(u+dd) = xc(u)
// is linear in the coefficients of Q, so Q is found by least squares and then
// checked against its required product normalization.

struct TqFitResult {
  std::vector<Complex> mu;      // representative roots, one per mirror pair
  double solve_residual = 0.0;  // relative residual of the linear system
  double form_residual = 0.0;   // product-normalization and symmetry defect
};

template <class Tq>
TqFitResult tq_fit_q(const Tq& tq,
                     const std::function<Complex(Complex)>& sampler,
                     double radius = 2.5) {
  constexpr bool trig = std::is_same_v<Tq, TqSectorTrig>;
  const int big_l = tq.sites();
  const int qdeg = 2 * big_l;
  const PolyBasis basis = trig ? PolyBasis::Trig : PolyBasis::Rational;
  const int m = 4 * qdeg + 4 * big_l + 24;
  const auto pts = poly_sample_points(basis, m, radius);

  auto phi = [&](int k, Complex u) {
    if (trig)
      return std::exp(static_cast<double>(k) * u -
                      0.5 * static_cast<double>(qdeg) * u);
    Complex p{1.0, 0.0};
    for (int i = 0; i < k; ++i) p *= u;
    return p;
  };

  Matrix a = Matrix::Zero(m, qdeg + 1);
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    const Complex u = pts[i];
    const Complex lam = sampler(u);
    for (int k = 0; k <= qdeg; ++k)
      a(i, k) = lam * tq.pole(u) * phi(k, u) - tq.ac(u) * phi(k, u + tq.da()) -
                tq.dc(u) * phi(k, u + tq.dd());
    rhs(i) = tq.xc(u);
  }
  // row equilibration keeps the high-degree rational columns in range
  for (int i = 0; i < m; ++i) {
    const double s = std::max(a.row(i).cwiseAbs().maxCoeff(),
                              std::abs(rhs(i))) + 1e-300;
    a.row(i) /= s;
    rhs(i) /= s;
  }
  TqFitResult out;
  const Vector coeff = a.colPivHouseholderQr().solve(rhs);
  out.solve_residual = (a * coeff - rhs).norm() / std::max(rhs.norm(), 1e-300);

  TrigPolynomial qpoly;
  qpoly.basis = basis;
  qpoly.degree = qdeg;
  qpoly.coeff = coeff;
  std::vector<Complex> roots = polynomial_roots(qpoly);

  // mirror pairing and product-form check
  auto mirror = [&](Complex r) {
    if constexpr (trig) return Complex{4.0 * tq.eta - r};
    else return Complex{-r - 1.0};
  };
  std::vector<bool> used(roots.size(), false);
  double defect = 0.0;
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    size_t best = i;
    double bd = 1e300;
    for (size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      double d;
      if (trig) {
        // compare in the exponential chart where the period drops out
        d = std::abs(std::exp(mirror(roots[i])) - std::exp(roots[j]));
      } else {
        d = std::abs(mirror(roots[i]) - roots[j]);
      }
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (best == i) {
      // self-mirrored root
      defect = std::max(
          defect, trig ? std::abs(std::exp(mirror(roots[i])) - std::exp(roots[i]))
                       : std::abs(mirror(roots[i]) - roots[i]));
    } else {
      used[best] = true;
      defect = std::max(defect, bd);
    }
    out.mu.push_back(roots[i]);
  }

  // normalization: the solved Q must equal the bare product over its roots
  Tq probe = tq;
  probe.mu = out.mu;
  for (const Complex cand : {Complex{0.71, 0.33}, Complex{-0.42, 0.81}}) {
    const Complex u = trig ? Complex{0.0, 0.0} + cand : radius * 0.37 * cand;
    const Complex ratio = qpoly.eval(u) / probe.qfun(u);
    defect = std::max(defect, std::abs(ratio - 1.0));
  }
  out.form_residual = defect;
  return out;
}

// ---------------------------------------------------------------------------
// Zero-root description of a sector eigenvalue.  Roots are parametrized by
// symmetric orbits so the Newton step moves along the physical manifold.

struct RootOrbit {
  enum class Kind { PairReal, PairImag, PairPi, Quad, SingleZero, SinglePi };
  Kind kind = Kind::PairReal;
  double a = 0.0;
  double b = 0.0;  // Quad only

  int param_count() const {
    switch (kind) {
      case Kind::Quad: return 2;
      case Kind::SingleZero:
      case Kind::SinglePi: return 0;
      default: return 1;
    }
  }
  void emit(std::vector<Complex>& zs) const {
    switch (kind) {
      case Kind::PairReal:
        zs.push_back(Complex{a, 0.0});
        zs.push_back(Complex{-a, 0.0});
        break;
      case Kind::PairImag:
        zs.push_back(Complex{0.0, a});
        zs.push_back(Complex{0.0, -a});
        break;
      case Kind::PairPi:
        zs.push_back(Complex{PI, a});
        zs.push_back(Complex{PI, -a});
        break;
      case Kind::Quad:
        zs.push_back(Complex{a, b});
        zs.push_back(Complex{a, -b});
        zs.push_back(Complex{-a, b});
        zs.push_back(Complex{-a, -b});
        break;
      case Kind::SingleZero: zs.push_back(Complex{0.0, 0.0}); break;
      case Kind::SinglePi: zs.push_back(Complex{PI, 0.0}); break;
    }
  }
};

struct SectorZeroSystem {
  double eta = 0.0;
  std::vector<Complex> theta;  // inhomogeneities (real for the physical setup)
  XxzBoundary b;
  DerivedBoundary der;
  std::vector<RootOrbit> orbits;

  static SectorZeroSystem make(double eta, std::vector<Complex> theta,
                               const XxzBoundary& b) {
    SectorZeroSystem s;
    s.eta = eta;
    s.theta = std::move(theta);
    s.b = b;
    s.der = derived_boundary(b);
    return s;
  }

  int sites() const { return static_cast<int>(theta.size()); }

  std::vector<Complex> roots() const {
    std::vector<Complex> zs;
    for (const auto& o : orbits) o.emit(zs);
    return zs;
  }

  std::vector<double> params() const {
    std::vector<double> p;
    for (const auto& o : orbits) {
      if (o.param_count() >= 1) p.push_back(o.a);
      if (o.param_count() == 2) p.push_back(o.b);
    }
    return p;
  }
  void set_params(const std::vector<double>& p) {
    size_t i = 0;
    for (auto& o : orbits) {
      if (o.param_count() >= 1) o.a = p[i++];
      if (o.param_count() == 2) o.b = p[i++];
    }
    require(i == p.size(), "SectorZeroSystem: parameter count mismatch");
  }

  Complex product_part(Complex u, const std::vector<Complex>& zs) const {
    Complex p{1.0, 0.0};
    for (const Complex& z : zs)
      p *= std::sinh(0.5 * (u - II * z - 2.0 * eta));
    return p;
  }

  Complex rho_s(Complex u) const {
    return r_unitarity_scalar(ModelKind::XXZTrig, u, eta);
  }

  Complex value_at_zero() const {
    Complex v = 2.0 * std::cosh(2.0 * eta) * std::sinh(b.s) * std::sinh(b.sp);
    for (const Complex& t : theta) v *= rho_s(t);
    return v;
  }
  Complex value_at_ipi() const {
    Complex v = 2.0 * std::cosh(2.0 * eta) * std::cosh(b.s) * std::cosh(b.sp);
    for (const Complex& t : theta) v *= rho_s(t + II * PI);
    return v * (sites() % 2 == 0 ? 1.0 : -1.0);
  }
  Complex fused_value(int j) const {
    const Complex t = theta[j];
    Complex v = 4.0 * std::sinh(t - 4.0 * eta) * std::sinh(t + 4.0 * eta) /
                (der.alpha * der.alphaP * std::sinh(t - 2.0 * eta) *
                 std::sinh(t + 2.0 * eta));
    for (const Complex& ax : {der.a1, der.a2, der.a1p, der.a2p})
      v *= 0.5 * (std::cosh(t) + std::cosh(ax));
    for (const Complex& tk : theta)
      v *= std::sinh(0.5 * (t - tk - 4.0 * eta)) *
           std::sinh(0.5 * (t - tk + 4.0 * eta)) *
           std::sinh(0.5 * (t + tk - 4.0 * eta)) *
           std::sinh(0.5 * (t + tk + 4.0 * eta));
    return v;
  }
  Complex asym_coeff() const {
    return std::exp(-2.0 * eta) * b.s1 * b.s2p +
           std::exp(2.0 * eta) * b.s2 * b.s1p;
  }

  // residual vector: fused values at each theta_j, the value at i pi, and the
  // leading asymptotic coefficient; the value at zero fixes the overall scale
  Vector residuals() const { return residuals_at(roots()); }

  Vector residuals_at(const std::vector<Complex>& zs) const {
    require((int)zs.size() == 2 * sites() + 4,
            "SectorZeroSystem: root count must be 2N+4");
    const Complex lam0 = value_at_zero() / product_part(Complex{0.0, 0.0}, zs);
    Vector r(sites() + 2);
    for (int j = 0; j < sites(); ++j) {
      const Complex va = lam0 * product_part(theta[j], zs);
      const Complex vb = lam0 * product_part(theta[j] + 4.0 * eta, zs);
      r(j) = va * vb / fused_value(j) - 1.0;
    }
    r(sites()) =
        lam0 * product_part(II * PI, zs) / value_at_ipi() - 1.0;
    Complex zsum{0.0, 0.0};
    for (const Complex& z : zs) zsum += z;
    r(sites() + 1) =
        lam0 * std::exp(-0.5 * II * zsum) / (-4.0 * asym_coeff()) - 1.0;
    return r;
  }

  Complex lambda(Complex u) const {
    const auto zs = roots();
    const Complex lam0 = value_at_zero() / product_part(Complex{0.0, 0.0}, zs);
    return lam0 * product_part(u, zs);
  }

  Complex energy() const {
    return sector_energy_from_roots_trig(eta, b, roots());
  }
};

// damped Gauss-Newton on the orbit parameters; returns final sup residual
inline double solve_zero_system(SectorZeroSystem& sys, int max_iter = 60,
                                double tol = 1e-11) {
  auto fval = [&](const std::vector<double>& p) {
    SectorZeroSystem probe = sys;
    probe.set_params(p);
    const Vector rc = probe.residuals();
    Eigen::VectorXd r(2 * rc.size());
    for (long i = 0; i < rc.size(); ++i) {
      r(2 * i) = rc(i).real();
      r(2 * i + 1) = rc(i).imag();
    }
    return r;
  };
  std::vector<double> p = sys.params();
  const int np = static_cast<int>(p.size());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd f0 = fval(p);
    if (f0.lpNorm<Eigen::Infinity>() < tol) break;
    Eigen::MatrixXd jac(f0.size(), np);
    const double h = 1e-7;
    for (int c = 0; c < np; ++c) {
      auto pp = p, pm = p;
      pp[c] += h;
      pm[c] -= h;
      jac.col(c) = (fval(pp) - fval(pm)) / (2.0 * h);
    }
    const Eigen::VectorXd step =
        jac.colPivHouseholderQr().solve(Eigen::VectorXd(f0));
    double damp = 1.0;
    bool moved = false;
    for (int k = 0; k < 25; ++k) {
      auto trial = p;
      for (int c = 0; c < np; ++c) trial[c] -= damp * step(c);
      if (fval(trial).norm() < f0.norm()) {
        p = trial;
        moved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!moved) break;
  }
  sys.set_params(p);
  return fval(p).lpNorm<Eigen::Infinity>();
}

// deduce an orbit description from a numerically extracted root list
inline std::vector<RootOrbit> orbits_from_roots(const std::vector<Complex>& zs,
                                                double tol = 1e-6) {
  const RootInventory inv = classify_roots(zs, tol);
  std::vector<RootOrbit> orbits;
  require(inv.others.empty() || inv.others.size() % 4 == 0,
          "orbits_from_roots: unpaired roots");
  std::vector<double> reals;
  for (double r : inv.reals)
    if (r > tol) reals.push_back(r);
  for (double r : reals)
    orbits.push_back({RootOrbit::Kind::PairReal, r, 0.0});
  // self-paired points
  int zeros = 0, pis = 0;
  for (double r : inv.reals) {
    if (std::abs(r) <= tol) ++zeros;
    if (std::abs(std::abs(r) - PI) <= tol) ++pis;
  }
  for (int k = 0; k < zeros; ++k)
    orbits.push_back({RootOrbit::Kind::SingleZero, 0.0, 0.0});
  for (int k = 0; k < pis; ++k)
    orbits.push_back({RootOrbit::Kind::SinglePi, 0.0, 0.0});
  for (double y : inv.origin_ys)
    orbits.push_back({RootOrbit::Kind::PairImag, y, 0.0});
  for (double y : inv.pi_ys) orbits.push_back({RootOrbit::Kind::PairPi, y, 0.0});
  for (size_t i = 0; i + 3 < inv.others.size(); i += 4) {
    // quads arrive as two mirrored conjugate pairs
    const Complex z = inv.others[i];
    orbits.push_back(
        {RootOrbit::Kind::Quad, std::abs(z.real()), std::abs(z.imag())});
  }
  return orbits;
}

}  // namespace d2chain
