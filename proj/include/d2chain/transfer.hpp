#pragma once

#include "d2chain/verify.hpp"

namespace d2chain {

// Open-chain transfer operator tr_0{ k_out(u) T(u) k_in(u) That(u) } with
// T(u)    = R_{01}(u-theta_1) ... R_{0N}(u-theta_N),
// That(u) = R_{N0}(u+theta_N) ... R_{10}(u+theta_1).
// standard_order = false uses the site-reversed convention
// T = R_{0N}..R_{01}, That = R_{01}..R_{0N} instead.
struct TransferModel {
  ModelKind kind;
  double eta = 0.0;
  std::vector<Complex> theta;
  KFun k_in;
  KFun k_out;
  bool standard_order = true;

  int sites() const { return static_cast<int>(theta.size()); }
  int dim_local() const { return local_dim(kind); }
  long chain_dim() const {
    long dim = 1;
    for (int j = 0; j < sites(); ++j) dim *= dim_local();
    return dim;
  }
};

inline TransferModel d2_transfer_model(ModelKind kind, double eta,
                                       std::vector<Complex> theta,
                                       const D2Boundary& b) {
  require(is_d2(kind), "d2_transfer_model: chain kinds only");
  TransferModel tm;
  tm.kind = kind;
  tm.eta = eta;
  tm.theta = std::move(theta);
  tm.k_in = [kind, eta, b](Complex u) {
    return k_matrix(kind, KSide::Reflection, u, eta, b);
  };
  tm.k_out = [kind, eta, b](Complex u) {
    return k_matrix(kind, KSide::Dual, u, eta, b);
  };
  return tm;
}

// one factor chain; pass D2Boundary::sig for t^{s+}, ::tau for t^{s-}
inline TransferModel sector_transfer_model(ModelKind kind, double eta,
                                           std::vector<Complex> theta,
                                           const XxzBoundary& sec) {
  require(!is_d2(kind), "sector_transfer_model: sector kinds only");
  TransferModel tm;
  tm.kind = kind;
  tm.eta = eta;
  tm.theta = std::move(theta);
  tm.k_in = [kind, eta, sec](Complex u) {
    return k_matrix_sector(kind, KSide::Reflection, u, eta, sec);
  };
  tm.k_out = [kind, eta, sec](Complex u) {
    return k_matrix_sector(kind, KSide::Dual, u, eta, sec);
  };
  return tm;
}

inline TransferModel reduced_transfer_model(std::vector<Complex> theta,
                                            const XXXReducedBoundary& red) {
  TransferModel tm;
  tm.kind = ModelKind::XXXRational;
  tm.theta = std::move(theta);
  tm.k_in = [red](Complex u) {
    return k_matrix_xxx_reduced(KSide::Reflection, u, red);
  };
  tm.k_out = [red](Complex u) {
    return k_matrix_xxx_reduced(KSide::Dual, u, red);
  };
  tm.standard_order = false;
  return tm;
}

namespace detail {

// aux-space blocks of a two-leg R; aux_first selects which leg is auxiliary
inline std::vector<Matrix> r_blocks(const Matrix& r, int d, bool aux_first) {
  std::vector<Matrix> blocks(static_cast<size_t>(d * d));
  for (int e = 0; e < d; ++e)
    for (int f = 0; f < d; ++f) {
      Matrix b(d, d);
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          b(m, n) = aux_first ? r(e * d + m, f * d + n) : r(m * d + e, n * d + f);
      blocks[static_cast<size_t>(e * d + f)] = b;
    }
  return blocks;
}

inline void apply_site_op(const Matrix& op, int site, int sites, int d,
                          const Vector& x, Vector& y) {
  const long dim = x.size();
  long stride = 1;
  for (int j = sites - 1; j > site; --j) stride *= d;
  const long block = stride * d;
  y.setZero();
  for (long base = 0; base < dim; base += block)
    for (long off = 0; off < stride; ++off)
      for (int m = 0; m < d; ++m) {
        Complex acc{0.0, 0.0};
        for (int n = 0; n < d; ++n)
          acc += op(m, n) * x[base + off + n * stride];
        y[base + off + m * stride] = acc;
      }
}

}  // namespace detail

// y = t(u) x without forming the matrix
inline void transfer_apply(const TransferModel& tm, Complex u, const Vector& x,
                           Vector& y) {
  const int d = tm.dim_local();
  const int n = tm.sites();
  const long dim = tm.chain_dim();
  require(x.size() == dim, "transfer_apply: dimension mismatch");

  // W[d_out * d + a] tracks the operator column acting on x; first index is
  // contracted by successive layers, the second stays for the final trace.
  std::vector<Vector> w(static_cast<size_t>(d * d)),
      next(static_cast<size_t>(d * d));
  for (int e = 0; e < d; ++e)
    for (int a = 0; a < d; ++a)
      w[static_cast<size_t>(e * d + a)] = (e == a) ? x : Vector::Zero(dim);
  Vector scratch(dim);

  auto absorb_r = [&](const Matrix& r, int site, bool aux_first) {
    const auto blocks = detail::r_blocks(r, d, aux_first);
    for (auto& v : next) v = Vector::Zero(dim);
    for (int e = 0; e < d; ++e)
      for (int f = 0; f < d; ++f) {
        const Matrix& op = blocks[static_cast<size_t>(e * d + f)];
        if (max_abs(op) == 0.0) continue;
        for (int a = 0; a < d; ++a) {
          detail::apply_site_op(op, site, n, d, w[static_cast<size_t>(f * d + a)],
                                scratch);
          next[static_cast<size_t>(e * d + a)] += scratch;
        }
      }
    std::swap(w, next);
  };
  auto absorb_k = [&](const Matrix& k) {
    for (int e = 0; e < d; ++e)
      for (int a = 0; a < d; ++a) {
        Vector acc = Vector::Zero(dim);
        for (int f = 0; f < d; ++f)
          acc += k(e, f) * w[static_cast<size_t>(f * d + a)];
        next[static_cast<size_t>(e * d + a)] = std::move(acc);
      }
    std::swap(w, next);
  };

  if (tm.standard_order) {
    for (int j = 0; j < n; ++j)
      absorb_r(r_matrix(tm.kind, u + tm.theta[static_cast<size_t>(j)], tm.eta),
               j, false);
    absorb_k(tm.k_in(u));
    for (int j = n - 1; j >= 0; --j)
      absorb_r(r_matrix(tm.kind, u - tm.theta[static_cast<size_t>(j)], tm.eta),
               j, true);
  } else {
    for (int j = n - 1; j >= 0; --j)
      absorb_r(r_matrix(tm.kind, u + tm.theta[static_cast<size_t>(j)], tm.eta),
               j, true);
    absorb_k(tm.k_in(u));
    for (int j = 0; j < n; ++j)
      absorb_r(r_matrix(tm.kind, u - tm.theta[static_cast<size_t>(j)], tm.eta),
               j, true);
  }

  const Matrix kout = tm.k_out(u);
  y = Vector::Zero(dim);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      y += kout(a, b) * w[static_cast<size_t>(b * d + a)];
}

inline Matrix transfer_dense(const TransferModel& tm, Complex u) {
  const int d = tm.dim_local();
  const int n = tm.sites();
  const long dim = tm.chain_dim();
  ChainGeometry g{n + 1, d, {}};

  const Matrix kin = embed(tm.k_in(u), {0}, g);
  const Matrix kout = embed(tm.k_out(u), {0}, g);
  Matrix fwd = Matrix::Identity(dim * d, dim * d);
  Matrix bwd = Matrix::Identity(dim * d, dim * d);
  for (int j = 1; j <= n; ++j) {
    const Complex th = tm.theta[static_cast<size_t>(j - 1)];
    const Matrix rm = embed(r_matrix(tm.kind, u - th, tm.eta), {0, j}, g);
    const Matrix rp = embed(
        detail::swap_legs(r_matrix(tm.kind, u + th, tm.eta), d), {0, j}, g);
    if (tm.standard_order) {
      fwd = fwd * rm;   // R01 ... R0N
      bwd = rp * bwd;   // RN0 ... R10
    } else {
      fwd = rm * fwd;   // R0N ... R01
      bwd = bwd * rp;   // R10 R20 ... RN0 = R01 .. R0N for the symmetric R
    }
  }
  const Matrix full = kout * fwd * kin * bwd;
  return partial_trace_aux(full, d, dim);
}

inline Complex transfer_expectation(const TransferModel& tm, Complex u,
                                    const Vector& phi) {
  Vector y(phi.size());
  transfer_apply(tm, u, phi, y);
  return phi.dot(y) / phi.dot(phi);
}

// chain transfer against the conjugated product of its two factor chains
inline double verify_transfer_factorization(ModelKind chain_kind, double eta,
                                            const std::vector<Complex>& theta,
                                            const D2Boundary& b, Complex u) {
  const ModelKind sector_kind =
      is_rational(chain_kind) ? ModelKind::XXXRational : ModelKind::XXZTrig;
  const int n = static_cast<int>(theta.size());
  const Matrix t_chain = transfer_dense(d2_transfer_model(chain_kind, eta, theta, b), u);
  const Matrix t_plus =
      transfer_dense(sector_transfer_model(sector_kind, eta, theta, b.sig), u);
  const Matrix t_minus =
      transfer_dense(sector_transfer_model(sector_kind, eta, theta, b.tau), u);
  double scale = 1.0;
  if (!is_rational(chain_kind))
    for (int j = 0; j < n; ++j) scale *= 4.0;
  const Matrix g = s_conjugator(n);
  const Matrix pi = interleaver(n);
  const Matrix built =
      scale * g * pi * kron(t_plus, t_minus) * pi.inverse() * g.inverse();
  return rel_residual(t_chain, built);
}

}  // namespace d2chain
