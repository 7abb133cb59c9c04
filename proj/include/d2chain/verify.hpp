#pragma once

#include "d2chain/models.hpp"

#include <functional>

namespace d2chain {

using KFun = std::function<Matrix(Complex)>;

namespace detail {

// transpose on the first leg of a d x d two-leg operator
inline Matrix partial_transpose_1(const Matrix& m, int d) {
  Matrix out(m.rows(), m.cols());
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int b = 0; b < d; ++b)
        for (int j = 0; j < d; ++j)
          out(a * d + i, b * d + j) = m(b * d + i, a * d + j);
  return out;
}

inline Matrix swap_legs(const Matrix& m, int d) {
  const Matrix p = permutation_operator(d);
  return p * m * p;
}

}  // namespace detail

// R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)
inline double verify_ybe(ModelKind kind, double eta, Complex u, Complex v) {
  const int d = local_dim(kind);
  ChainGeometry g{3, d, {}};
  const Matrix r12 = embed(r_matrix(kind, u - v, eta), {0, 1}, g);
  const Matrix r13 = embed(r_matrix(kind, u, eta), {0, 2}, g);
  const Matrix r23 = embed(r_matrix(kind, v, eta), {1, 2}, g);
  return rel_residual(r12 * r13 * r23, r23 * r13 * r12);
}

// R12(u-v) K1(u) R21(u+v) K2(v) = K2(v) R12(u+v) K1(u) R21(u-v)
inline double verify_reflection(ModelKind kind, double eta, Complex u,
                                Complex v, const KFun& kf) {
  const int d = local_dim(kind);
  const Matrix id = Matrix::Identity(d, d);
  const Matrix rm = r_matrix(kind, u - v, eta);
  const Matrix rp = r_matrix(kind, u + v, eta);
  const Matrix k1 = kron(kf(u), id);
  const Matrix k2 = kron(id, kf(v));
  const Matrix lhs = rm * k1 * detail::swap_legs(rp, d) * k2;
  const Matrix rhs = k2 * rp * k1 * detail::swap_legs(rm, d);
  return rel_residual(lhs, rhs);
}

// R12(-u+v) Kb1(u) M1^{-1} R21(-u-v+delta) M1 Kb2(v)
//   = Kb2(v) M1 R12(-u-v+delta) M1^{-1} Kb1(u) R21(-u+v)
inline double verify_dual_reflection(ModelKind kind, double eta, Complex u,
                                     Complex v, const KFun& kbf) {
  const int d = local_dim(kind);
  const Complex delta = crossing_shift(kind, eta);
  const Matrix id = Matrix::Identity(d, d);
  const Matrix m1 = kron(crossing_m_matrix(kind, eta), id);
  const Matrix m1i = m1.inverse();
  const Matrix rA = r_matrix(kind, -u + v, eta);
  const Matrix rB = r_matrix(kind, -u - v + delta, eta);
  const Matrix k1 = kron(kbf(u), id);
  const Matrix k2 = kron(id, kbf(v));
  const Matrix lhs = rA * k1 * m1i * detail::swap_legs(rB, d) * m1 * k2;
  const Matrix rhs = k2 * m1 * rB * m1i * k1 * detail::swap_legs(rA, d);
  return rel_residual(lhs, rhs);
}

struct RProperties {
  double pt = 0.0;
  double unitarity = 0.0;
  double initial = 0.0;
  double crossing = 0.0;
  double periodicity = 0.0;
  double worst() const {
    return std::max({pt, unitarity, initial, crossing, periodicity});
  }
};

inline RProperties verify_r_properties(ModelKind kind, double eta, Complex u) {
  const int d = local_dim(kind);
  const Matrix r = r_matrix(kind, u, eta);
  RProperties out;

  out.pt = rel_residual(detail::swap_legs(r, d), r.transpose());

  const Matrix r21m = detail::swap_legs(r_matrix(kind, -u, eta), d);
  out.unitarity = rel_residual(
      r * r21m, r_unitarity_scalar(kind, u, eta) * Matrix::Identity(d * d, d * d));

  Complex init;
  switch (kind) {
    case ModelKind::D2Trig: {
      Complex s = std::sinh(Complex{2.0 * eta, 0.0});
      init = 2.0 * s * s;
      break;
    }
    case ModelKind::XXZTrig:
      init = -std::sinh(Complex{2.0 * eta, 0.0});
      break;
    default:
      init = 1.0;
  }
  out.initial =
      rel_residual(r_matrix(kind, Complex{0.0, 0.0}, eta), init * permutation_operator(d));

  const Complex delta = crossing_shift(kind, eta);
  const Matrix m1 = kron(crossing_m_matrix(kind, eta), Matrix::Identity(d, d));
  const Matrix lhs = detail::partial_transpose_1(r, d) * m1 *
                     detail::partial_transpose_1(
                         detail::swap_legs(r_matrix(kind, -u + delta, eta), d), d) *
                     m1.inverse();
  out.crossing = rel_residual(
      lhs, r_unitarity_scalar(kind, u - 0.5 * delta, eta) *
               Matrix::Identity(d * d, d * d));

  if (!is_rational(kind)) {
    const Matrix shifted = r_matrix(kind, u + Complex{0.0, 2.0 * PI}, eta);
    const double sign = (kind == ModelKind::D2Trig) ? 1.0 : -1.0;
    out.periodicity = rel_residual(shifted, sign * r);
  }
  return out;
}

// chain R as a conjugated pair of sector R's (scale 2 for trig, 1 rational)
inline double verify_factorization_r(bool rational, double eta, Complex u) {
  const ModelKind chain = rational ? ModelKind::D2Rational : ModelKind::D2Trig;
  const ModelKind sector = rational ? ModelKind::XXXRational : ModelKind::XXZTrig;
  const double scale = rational ? 1.0 : 2.0;
  const Matrix rs = r_matrix(sector, u, eta);
  const Matrix g = s_conjugator(2);
  const Matrix pi = interleaver(2);
  const Matrix built =
      scale * g * pi * kron(rs, rs) * pi.inverse() * g.inverse();
  return rel_residual(r_matrix(chain, u, eta), built);
}

inline double verify_factorization_k(bool rational, KSide side, double eta,
                                     Complex u, const D2Boundary& b) {
  const ModelKind chain = rational ? ModelKind::D2Rational : ModelKind::D2Trig;
  const ModelKind sector = rational ? ModelKind::XXXRational : ModelKind::XXZTrig;
  const Matrix ks = k_matrix_sector(sector, side, u, eta, b.sig);
  const Matrix kt = k_matrix_sector(sector, side, u, eta, b.tau);
  const Matrix s = s_factor();
  return rel_residual(k_matrix(chain, side, u, eta, b),
                      s * kron(ks, kt) * s.inverse());
}

}  // namespace d2chain
