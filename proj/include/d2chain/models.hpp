#pragma once

#include "d2chain/tensor.hpp"

#include <array>

namespace d2chain {

enum class ModelKind { D2Trig, XXZTrig, D2Rational, XXXRational };
enum class KSide { Reflection, Dual };

inline bool is_rational(ModelKind k) {
  return k == ModelKind::D2Rational || k == ModelKind::XXXRational;
}
inline bool is_d2(ModelKind k) {
  return k == ModelKind::D2Trig || k == ModelKind::D2Rational;
}
inline int local_dim(ModelKind k) { return is_d2(k) ? 4 : 2; }

struct Coupling {
  double eta;
  explicit Coupling(double e) : eta(e) {
    require(eta > 0.0, "Coupling: eta must be positive");
  }
};

// One spin-1/2 sector: (s, s1, s2) act at the right end, the primed set at the left.
struct XxzBoundary {
  Complex s, s1, s2;
  Complex sp, s1p, s2p;
};

// Full chain boundary: sigma sector carries (s, s1, s2), tau sector (t, t1, t2).
struct D2Boundary {
  XxzBoundary sig, tau;
};

struct XXXReducedBoundary {
  double p, q, xi;
};

// ---------------------------------------------------------------------------
// R-matrices

namespace detail {

inline Matrix d2_sixteen(Complex a, Complex b, Complex e, Complex c, Complex c1,
                         Complex c2, Complex d1, Complex d2, Complex g1,
                         Complex g2) {
  Matrix r = Matrix::Zero(16, 16);
  const std::array<Complex, 16> diag = {a, b, b, e, b, a, e, b,
                                        b, e, a, b, e, b, b, a};
  for (int k = 0; k < 16; ++k) r(k, k) = diag[static_cast<size_t>(k)];
  r(1, 4) = g1;
  r(2, 8) = g1;
  r(7, 13) = g1;
  r(11, 14) = g1;
  r(4, 1) = g2;
  r(8, 2) = g2;
  r(13, 7) = g2;
  r(14, 11) = g2;
  r(3, 6) = d1;
  r(3, 9) = d1;
  r(6, 12) = d1;
  r(9, 12) = d1;
  r(6, 3) = d2;
  r(9, 3) = d2;
  r(12, 6) = d2;
  r(12, 9) = d2;
  r(3, 12) = c1;
  r(12, 3) = c2;
  r(6, 9) = c;
  r(9, 6) = c;
  return r;
}

}  // namespace detail

inline Matrix r_matrix(ModelKind kind, Complex u, double eta) {
  using std::exp;
  using std::sinh;
  switch (kind) {
    case ModelKind::D2Trig: {
      const Complex h{eta, 0.0};
      const Complex a = 2.0 * sinh(0.5 * u - 2.0 * h) * sinh(0.5 * u - 2.0 * h);
      const Complex b = 2.0 * sinh(0.5 * u) * sinh(0.5 * u - 2.0 * h);
      const Complex e = 2.0 * sinh(0.5 * u) * sinh(0.5 * u);
      const Complex c = 2.0 * sinh(2.0 * h) * sinh(2.0 * h);
      const Complex c1 = exp(-u) * c;
      const Complex c2 = exp(u) * c;
      const Complex d1 = 2.0 * exp(-0.5 * u) * sinh(0.5 * u) * sinh(2.0 * h);
      const Complex d2 = exp(u) * d1;
      const Complex g1 =
          -2.0 * exp(-0.5 * u) * sinh(2.0 * h) * sinh(0.5 * u - 2.0 * h);
      const Complex g2 = exp(u) * g1;
      return detail::d2_sixteen(a, b, e, c, c1, c2, d1, d2, g1, g2);
    }
    case ModelKind::D2Rational: {
      const Complex a = (u + 1.0) * (u + 1.0);
      const Complex b = u * (u + 1.0);
      const Complex e = u * u;
      const Complex c{1.0, 0.0};
      const Complex d = -u;
      const Complex g = u + 1.0;
      return detail::d2_sixteen(a, b, e, c, c, c, d, d, g, g);
    }
    case ModelKind::XXZTrig: {
      const Complex h{eta, 0.0};
      Matrix r = Matrix::Zero(4, 4);
      r(0, 0) = r(3, 3) = sinh(0.5 * u - 2.0 * h);
      r(1, 1) = r(2, 2) = sinh(0.5 * u);
      r(1, 2) = -exp(-0.5 * u) * sinh(2.0 * h);
      r(2, 1) = -exp(0.5 * u) * sinh(2.0 * h);
      return r;
    }
    case ModelKind::XXXRational:
      return u * Matrix::Identity(4, 4) + permutation_operator(2);
  }
  throw std::runtime_error("r_matrix: unknown kind");
}

// unitarity scalar: R12(u) R21(-u) = rho(u) I
inline Complex r_unitarity_scalar(ModelKind kind, Complex u, double eta) {
  const Complex h{eta, 0.0};
  switch (kind) {
    case ModelKind::D2Trig: {
      Complex f = std::sinh(0.5 * u - 2.0 * h) * std::sinh(0.5 * u + 2.0 * h);
      return 4.0 * f * f;
    }
    case ModelKind::XXZTrig:
      return std::sinh(2.0 * h - 0.5 * u) * std::sinh(2.0 * h + 0.5 * u);
    case ModelKind::D2Rational: {
      Complex f = (1.0 - u) * (1.0 + u);
      return f * f;
    }
    case ModelKind::XXXRational:
      return (1.0 - u) * (1.0 + u);
  }
  throw std::runtime_error("r_unitarity_scalar: unknown kind");
}

// crossing shift: trig kinds use u -> -u + 8 eta, rational ones u -> -u - 2
inline Complex crossing_shift(ModelKind kind, double eta) {
  return is_rational(kind) ? Complex{-2.0, 0.0} : Complex{8.0 * eta, 0.0};
}

inline Matrix crossing_m_matrix(ModelKind kind, double eta) {
  const int d = local_dim(kind);
  Matrix m = Matrix::Identity(d, d);
  if (kind == ModelKind::D2Trig) {
    m(0, 0) = std::exp(Complex{4.0 * eta, 0.0});
    m(3, 3) = std::exp(Complex{-4.0 * eta, 0.0});
  } else if (kind == ModelKind::XXZTrig) {
    m(0, 0) = std::exp(Complex{2.0 * eta, 0.0});
    m(1, 1) = std::exp(Complex{-2.0 * eta, 0.0});
  }
  return m;
}

// ---------------------------------------------------------------------------
// K-matrices

// Trig chain reflection matrix; (s,s1,s2) = sigma sector, (t,t1,t2) = tau sector.
inline Matrix k_matrix_d2_trig(Complex u, const D2Boundary& b) {
  using std::exp;
  using std::sinh;
  const Complex s = b.sig.s, s1 = b.sig.s1, s2 = b.sig.s2;
  const Complex t = b.tau.s, t1 = b.tau.s1, t2 = b.tau.s2;
  const Complex su = sinh(u), su2 = su * su;
  const Complex sm = sinh(s - 0.5 * u), sp = sinh(s + 0.5 * u);
  const Complex tm = sinh(t - 0.5 * u), tp = sinh(t + 0.5 * u);
  const Complex em = exp(-0.5 * u), ep = exp(0.5 * u);
  Matrix k(4, 4);
  k(0, 0) = exp(-u) * sm * tm;
  k(0, 1) = -em * t1 * sm * su;
  k(0, 2) = em * s1 * tm * su;
  k(0, 3) = s1 * t1 * su2;
  k(1, 0) = -em * t2 * sm * su;
  k(1, 1) = sm * tp;
  k(1, 2) = -s1 * t2 * su2;
  k(1, 3) = -ep * s1 * tp * su;
  k(2, 0) = em * s2 * tm * su;
  k(2, 1) = -s2 * t1 * su2;
  k(2, 2) = sp * tm;
  k(2, 3) = ep * t1 * sp * su;
  k(3, 0) = s2 * t2 * su2;
  k(3, 1) = -ep * s2 * tp * su;
  k(3, 2) = ep * t2 * sp * su;
  k(3, 3) = exp(u) * sp * tp;
  return k;
}

// The printed rational chain K has k42 ~ (t-u); the factorized form requires
// (t+u).  Keep both so the reflection equation can arbitrate.
inline Matrix k_matrix_d2_rational(Complex u, const D2Boundary& b,
                                   bool k42_as_printed = false) {
  const Complex s = b.sig.s, s1 = b.sig.s1, s2 = b.sig.s2;
  const Complex t = b.tau.s, t1 = b.tau.s1, t2 = b.tau.s2;
  const Complex u2 = u * u;
  Matrix k(4, 4);
  k(0, 0) = (s - u) * (t - u);
  k(0, 1) = -t1 * u * (s - u);
  k(0, 2) = s1 * u * (t - u);
  k(0, 3) = s1 * t1 * u2;
  k(1, 0) = -t2 * u * (s - u);
  k(1, 1) = (s - u) * (t + u);
  k(1, 2) = -s1 * t2 * u2;
  k(1, 3) = -s1 * u * (t + u);
  k(2, 0) = s2 * u * (t - u);
  k(2, 1) = -s2 * t1 * u2;
  k(2, 2) = (s + u) * (t - u);
  k(2, 3) = t1 * u * (s + u);
  k(3, 0) = s2 * t2 * u2;
  k(3, 1) = k42_as_printed ? -s2 * u * (t - u) : -s2 * u * (t + u);
  k(3, 2) = t2 * u * (s + u);
  k(3, 3) = (s + u) * (t + u);
  return k;
}

namespace detail {

inline XxzBoundary primed(const XxzBoundary& b) {
  return {b.sp, b.s1p, b.s2p, b.s, b.s1, b.s2};
}
inline D2Boundary primed(const D2Boundary& b) {
  return {primed(b.sig), primed(b.tau)};
}

}  // namespace detail

// Sector reflection matrix K^{s+}(u); pass D2Boundary::tau for the other sector.
inline Matrix k_matrix_xxz_trig(Complex u, double eta, const XxzBoundary& b) {
  Matrix k(2, 2);
  k(0, 0) = -std::exp(-0.5 * u) * std::sinh(0.5 * u - b.s);
  k(0, 1) = b.s1 * std::sinh(u);
  k(1, 0) = b.s2 * std::sinh(u);
  k(1, 1) = std::exp(0.5 * u) * std::sinh(0.5 * u + b.s);
  return k;
}

inline Matrix k_matrix_xxx(Complex u, const XxzBoundary& b) {
  Matrix k(2, 2);
  k(0, 0) = b.s - u;
  k(0, 1) = b.s1 * u;
  k(1, 0) = b.s2 * u;
  k(1, 1) = b.s + u;
  return k;
}

inline Matrix k_matrix_xxx_reduced(KSide side, Complex u,
                                   const XXXReducedBoundary& b) {
  Matrix k = Matrix::Zero(2, 2);
  if (side == KSide::Reflection) {
    k(0, 0) = b.p + u;
    k(1, 1) = b.p - u;
  } else {
    k(0, 0) = b.q + u + 1.0;
    k(0, 1) = k(1, 0) = b.xi * (u + 1.0);
    k(1, 1) = b.q - u - 1.0;
  }
  return k;
}

// Unified entry point covering the dual matrices.
inline Matrix k_matrix(ModelKind kind, KSide side, Complex u, double eta,
                       const D2Boundary& b, bool rational_k42_as_printed = false) {
  switch (kind) {
    case ModelKind::D2Trig:
      if (side == KSide::Reflection) return k_matrix_d2_trig(u, b);
      return crossing_m_matrix(kind, eta) *
             k_matrix_d2_trig(-u + 4.0 * eta, detail::primed(b));
    case ModelKind::D2Rational:
      if (side == KSide::Reflection)
        return k_matrix_d2_rational(u, b, rational_k42_as_printed);
      return k_matrix_d2_rational(-u - 1.0, detail::primed(b),
                                  rational_k42_as_printed);
    default:
      throw std::runtime_error("k_matrix: chain kinds only");
  }
}

inline Matrix k_matrix_sector(ModelKind kind, KSide side, Complex u, double eta,
                              const XxzBoundary& b) {
  switch (kind) {
    case ModelKind::XXZTrig:
      if (side == KSide::Reflection) return k_matrix_xxz_trig(u, eta, b);
      return crossing_m_matrix(kind, eta) *
             k_matrix_xxz_trig(-u + 4.0 * eta, eta, detail::primed(b));
    case ModelKind::XXXRational:
      if (side == KSide::Reflection) return k_matrix_xxx(u, b);
      return k_matrix_xxx(-u - 1.0, detail::primed(b));
    default:
      throw std::runtime_error("k_matrix_sector: sector kinds only");
  }
}

// ---------------------------------------------------------------------------
// Factorization constants

// per-site gauge S = diag(1,-1,1,1) = (1 - sigma^z + tau^z + sigma^z tau^z)/2
inline Matrix s_factor() {
  Matrix s = Matrix::Identity(4, 4);
  s(1, 1) = -1.0;
  return s;
}

inline Matrix s_conjugator(int sites) {
  std::vector<Matrix> f(static_cast<size_t>(sites), s_factor());
  return kron(f);
}

// Permutation taking (sigma-chain) (x) (tau-chain) indices to site-interleaved
// order: digits (a_1..a_N, b_1..b_N) -> site digits (a_j b_j).
inline Matrix interleaver(int sites) {
  long dim = 1;
  for (int j = 0; j < sites; ++j) dim *= 4;
  require(dim <= 65536, "interleaver: too many sites for dense form");
  const long half = 1L << sites;
  Matrix pi = Matrix::Zero(dim, dim);
  for (long a = 0; a < half; ++a)
    for (long b = 0; b < half; ++b) {
      long site_index = 0;
      for (int j = 0; j < sites; ++j) {
        const long aj = (a >> (sites - 1 - j)) & 1;
        const long bj = (b >> (sites - 1 - j)) & 1;
        site_index = site_index * 4 + (2 * aj + bj);
      }
      pi(site_index, a * half + b) = 1.0;
    }
  return pi;
}

// Singlet-like vector spanning the degenerate R^s(4 eta); `swapped` gives the
// (2'1') index order.
inline Vector fusion_singlet(double eta, bool swapped = false) {
  Vector psi = Vector::Zero(4);
  const double n = 1.0 / std::sqrt(2.0 * std::cosh(2.0 * eta));
  if (!swapped) {
    psi(1) = std::exp(-eta) * n;   // |12>
    psi(2) = -std::exp(eta) * n;   // |21>
  } else {
    psi(2) = std::exp(-eta) * n;
    psi(1) = -std::exp(eta) * n;
  }
  return psi;
}

inline Matrix fusion_projector(double eta, bool swapped = false) {
  Vector psi = fusion_singlet(eta, swapped);
  return psi * psi.adjoint();
}

// ---------------------------------------------------------------------------
// Derived boundary constants

struct DerivedBoundary {
  Complex alpha, beta, alphaP, betaP;
  Complex a1, a2, a1p, a2p;  // acosh branches after sign selection
  std::array<int, 4> signs{1, 1, 1, 1};
};

// sign_context > 0 keeps every branch principal; sign_context < 0 flips the
// smaller of Re{a1, a1p} (ties flip a1).
inline DerivedBoundary derived_boundary(const XxzBoundary& b,
                                        double sign_context = 1.0) {
  DerivedBoundary d;
  d.alpha = 1.0 / (2.0 * b.s1 * b.s2);
  d.beta = std::sqrt(1.0 + 0.25 * d.alpha * d.alpha +
                     d.alpha * std::cosh(2.0 * b.s));
  d.alphaP = 1.0 / (2.0 * b.s1p * b.s2p);
  d.betaP = std::sqrt(1.0 + 0.25 * d.alphaP * d.alphaP +
                      d.alphaP * std::cosh(2.0 * b.sp));
  d.a1 = std::acosh(0.5 * d.alpha + d.beta);
  d.a2 = std::acosh(0.5 * d.alpha - d.beta);
  d.a1p = std::acosh(0.5 * d.alphaP + d.betaP);
  d.a2p = std::acosh(0.5 * d.alphaP - d.betaP);
  if (sign_context < 0.0) {
    if (d.a1p.real() < d.a1.real()) {
      d.a1p = -d.a1p;
      d.signs[2] = -1;
    } else {
      d.a1 = -d.a1;
      d.signs[0] = -1;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Hermitian parameter families

// Sector family with a hermitian open Hamiltonian: s, s' real, s2 = conj(s1),
// s'_1 = e^{(r + i m) eta}, s'_2 = e^{(r + 4 - i m) eta}.
inline XxzBoundary hermitian_xxz_boundary(double eta, double s, Complex s1,
                                          double sprime, double r, double m) {
  XxzBoundary b;
  b.s = s;
  b.s1 = s1;
  b.s2 = std::conj(s1);
  b.sp = sprime;
  b.s1p = std::exp(Complex{r * eta, m * eta});
  b.s2p = std::exp(Complex{(r + 4.0) * eta, -m * eta});
  return b;
}

inline bool is_hermitian_family(const XxzBoundary& b, double eta,
                                double tol = 1e-12) {
  if (std::abs(b.s.imag()) > tol || std::abs(b.sp.imag()) > tol) return false;
  if (std::abs(b.s2 - std::conj(b.s1)) > tol) return false;
  const Complex want = std::exp(Complex{4.0 * eta, 0.0}) * std::conj(b.s1p);
  return std::abs(b.s2p - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace d2chain
