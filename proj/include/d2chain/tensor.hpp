#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2chain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double PI = std::numbers::pi;
inline const Complex II{0.0, 1.0};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

inline void check_finite(const Matrix& m, const char* what) {
  require(m.allFinite(), std::string(what) + ": non-finite entries");
}

// Chain of `sites` equal-dimension local spaces with inhomogeneity shifts theta_j.
struct ChainGeometry {
  int sites;
  int local_dim;
  std::vector<Complex> theta;  // empty means homogeneous (all zero)

  ChainGeometry(int n, int d, std::vector<Complex> th = {})
      : sites(n), local_dim(d), theta(std::move(th)) {
    require(sites >= 1, "ChainGeometry: need at least one site");
    require(local_dim >= 2, "ChainGeometry: local_dim < 2");
    require(theta.empty() || static_cast<int>(theta.size()) == sites,
            "ChainGeometry: theta size mismatch");
  }

  long dim() const {
    long d = 1;
    for (int j = 0; j < sites; ++j) d *= local_dim;
    return d;
  }

  Complex theta_at(int j) const {
    return theta.empty() ? Complex{0.0, 0.0} : theta[static_cast<size_t>(j)];
  }

  bool homogeneous() const {
    for (const Complex& t : theta)
      if (t != Complex{0.0, 0.0}) return false;
    return true;
  }
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix kron(const std::vector<Matrix>& factors) {
  require(!factors.empty(), "kron: empty factor list");
  Matrix out = factors[0];
  for (size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

// Swap operator on C^d (x) C^d:  P (x (x) y) = y (x) x.
inline Matrix permutation_operator(int d) {
  Matrix p = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) p(b * d + a, a * d + b) = 1.0;
  return p;
}

namespace detail {

// Maps a (legs..., environment...) mixed-radix index to the chain index.
inline std::vector<long> embed_index_map(const std::vector<int>& legs,
                                         const ChainGeometry& g) {
  const int n = g.sites;
  const int d = g.local_dim;
  const int k = static_cast<int>(legs.size());
  std::vector<bool> used(n, false);
  for (int leg : legs) {
    require(leg >= 0 && leg < n, "embed: site index out of range");
    require(!used[leg], "embed: repeated site index");
    used[leg] = true;
  }
  std::vector<int> env;
  for (int j = 0; j < n; ++j)
    if (!used[j]) env.push_back(j);

  // chain index convention: site 0 is the most significant digit
  std::vector<long> site_stride(n);
  long s = 1;
  for (int j = n - 1; j >= 0; --j) {
    site_stride[j] = s;
    s *= d;
  }
  const long dim = s;
  std::vector<long> map(dim);
  std::vector<int> digit(n, 0);
  for (long x = 0; x < dim; ++x) {
    long rem = x;
    long chain = 0;
    for (int pos = 0; pos < k; ++pos) {
      // leg digits are most significant in x
      long stride = 1;
      for (int q = pos + 1; q < n; ++q) stride *= d;
      int dig = static_cast<int>(rem / stride);
      rem %= stride;
      chain += static_cast<long>(dig) * site_stride[legs[pos]];
    }
    for (size_t pos = 0; pos < env.size(); ++pos) {
      long stride = 1;
      for (size_t q = pos + 1; q < env.size(); ++q) stride *= d;
      int dig = static_cast<int>(rem / stride);
      rem %= stride;
      chain += static_cast<long>(dig) * site_stride[env[pos]];
    }
    map[x] = chain;
  }
  return map;
}

}  // namespace detail

// Acts `op` on the listed sites (in the listed order) and identity elsewhere.
inline Matrix embed(const Matrix& op, const std::vector<int>& legs,
                    const ChainGeometry& g) {
  const long dim = g.dim();
  require(dim <= 65536, "embed: chain dimension too large for dense embedding");
  long opdim = 1;
  for (size_t q = 0; q < legs.size(); ++q) opdim *= g.local_dim;
  require(op.rows() == opdim && op.cols() == opdim, "embed: operator dimension mismatch");

  const long envdim = dim / opdim;
  const std::vector<long> map = detail::embed_index_map(legs, g);
  Matrix out = Matrix::Zero(dim, dim);
  for (long r = 0; r < opdim; ++r)
    for (long c = 0; c < opdim; ++c) {
      const Complex v = op(r, c);
      if (v == Complex{0.0, 0.0}) continue;
      for (long e = 0; e < envdim; ++e)
        out(map[r * envdim + e], map[c * envdim + e]) = v;
    }
  return out;
}

// y = (op acting on `legs`) x, without forming the dense embedding.
inline void apply_embedded(const Matrix& op, const std::vector<int>& legs,
                           const ChainGeometry& g, const Vector& x, Vector& y) {
  const int n = g.sites;
  const int d = g.local_dim;
  const int k = static_cast<int>(legs.size());
  const long dim = g.dim();
  require(x.size() == dim, "apply_embedded: vector dimension mismatch");
  long opdim = op.rows();

  std::vector<long> site_stride(n);
  long s = 1;
  for (int j = n - 1; j >= 0; --j) {
    site_stride[j] = s;
    s *= d;
  }
  // offsets of the op's mixed-radix index within the chain index
  std::vector<long> offset(opdim, 0);
  for (long r = 0; r < opdim; ++r) {
    long rem = r;
    for (int pos = k - 1; pos >= 0; --pos) {
      offset[r] += (rem % d) * site_stride[legs[pos]];
      rem /= d;
    }
  }
  if (y.size() != dim) y = Vector::Zero(dim);

  std::vector<Complex> in(opdim), out(opdim);
  for (long base = 0; base < dim; ++base) {
    bool rep = true;
    for (int pos = 0; pos < k; ++pos)
      if ((base / site_stride[legs[pos]]) % d != 0) {
        rep = false;
        break;
      }
    if (!rep) continue;
    for (long r = 0; r < opdim; ++r) in[r] = x(base + offset[r]);
    for (long r = 0; r < opdim; ++r) {
      Complex acc{0.0, 0.0};
      for (long c = 0; c < opdim; ++c) acc += op(r, c) * in[c];
      out[r] = acc;
    }
    for (long r = 0; r < opdim; ++r) y(base + offset[r]) += out[r];
  }
}

// Trace over the leading factor of C^{d_aux} (x) C^{d_phys}.
inline Matrix partial_trace_aux(const Matrix& m, int d_aux, long d_phys) {
  require(m.rows() == d_aux * d_phys && m.cols() == d_aux * d_phys,
          "partial_trace_aux: dimension mismatch");
  Matrix out = Matrix::Zero(d_phys, d_phys);
  for (int a = 0; a < d_aux; ++a)
    out += m.block(a * d_phys, a * d_phys, d_phys, d_phys);
  return out;
}

inline Complex random_complex(std::mt19937_64& rng, double re_lo, double re_hi,
                              double im_lo, double im_hi) {
  std::uniform_real_distribution<double> re(re_lo, re_hi), im(im_lo, im_hi);
  return {re(rng), im(rng)};
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Residual of a matrix identity, normalized by the larger side's scale.
inline double rel_residual(const Matrix& lhs, const Matrix& rhs) {
  double scale = std::max(max_abs(lhs), max_abs(rhs));
  if (scale == 0.0) return 0.0;
  return max_abs(lhs - rhs) / scale;
}

inline double rel_diff(Complex a, Complex b) {
  double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

}  // namespace d2chain
