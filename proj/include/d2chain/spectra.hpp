#pragma once

#include <functional>
#include <random>

#include "d2chain/hamiltonian.hpp"
#include "d2chain/polynomial.hpp"

namespace d2chain {

struct EigenPair {
  double value = 0.0;
  Vector vec;
};

inline EigenPair dense_ground_state(const Matrix& h) {
  EigenPair out;
  if (rel_residual(Matrix(h.adjoint()), h) < 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    out.value = es.eigenvalues()(0);
    out.vec = es.eigenvectors().col(0);
    return out;
  }
  Eigen::ComplexEigenSolver<Matrix> es(h);
  long best = 0;
  for (long i = 1; i < h.rows(); ++i)
    if (es.eigenvalues()(i).real() < es.eigenvalues()(best).real()) best = i;
  out.value = es.eigenvalues()(best).real();
  out.vec = es.eigenvectors().col(best);
  return out;
}

inline std::vector<double> dense_spectrum_real(const Matrix& h) {
  std::vector<double> vals;
  if (rel_residual(Matrix(h.adjoint()), h) < 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    for (long i = 0; i < h.rows(); ++i) vals.push_back(es.eigenvalues()(i));
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(h, false);
    for (long i = 0; i < h.rows(); ++i)
      vals.push_back(es.eigenvalues()(i).real());
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

// Lanczos with full reorthogonalization; hermitian operators only.
inline EigenPair lanczos_ground_state(const HamiltonianBuild& hb,
                                      std::mt19937_64& rng, int max_iter = 400,
                                      double tol = 1e-12) {
  const long d = hb.dim();
  std::vector<Vector> basis;
  Vector v(d);
  for (long i = 0; i < d; ++i) v(i) = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  v /= v.norm();
  basis.push_back(v);
  std::vector<double> alpha, beta;
  Vector w;
  double last = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    hb.apply(basis.back(), w);
    const double a = std::real(basis.back().dot(w));
    alpha.push_back(a);
    w -= a * basis.back();
    if (it > 0) w -= beta.back() * basis[basis.size() - 2];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(it + 1, it + 1);
    for (int i = 0; i <= it; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 <= it) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double e0 = es.eigenvalues()(0);
    const double resid = b * std::abs(es.eigenvectors()(it, 0));
    if ((it > 4 && resid < tol * std::max(1.0, std::abs(e0))) || b < 1e-13 ||
        it == max_iter - 1 || basis.size() == (size_t)d) {
      EigenPair out;
      out.value = e0;
      out.vec = Vector::Zero(d);
      for (int i = 0; i <= it; ++i) out.vec += es.eigenvectors()(i, 0) * basis[i];
      out.vec /= out.vec.norm();
      return out;
    }
    beta.push_back(b);
    basis.push_back(Vector(w / b));
    last = e0;
    (void)last;
  }
  throw std::runtime_error("lanczos_ground_state: did not converge");
}

inline EigenPair ground_state(const HamiltonianBuild& hb, std::mt19937_64& rng,
                              long dense_cap = 4096) {
  if (hb.dim() <= dense_cap) return dense_ground_state(hb.dense());
  return lanczos_ground_state(hb, rng);
}

// ---------------------------------------------------------------------------
// Joint eigenvectors of the commuting transfer family.  A single generic
// member has simple spectrum, so its eigenvectors diagonalize every t(u).

inline std::vector<Vector> transfer_eigenbasis(
    const TransferModel& tm, Complex u0 = Complex{0.31, 0.43},
    Complex u1 = Complex{-0.22, 0.87}, Complex mix = Complex{0.7312, 0.2488}) {
  const Matrix a = transfer_dense(tm, u0) + mix * transfer_dense(tm, u1);
  Eigen::ComplexEigenSolver<Matrix> es(a);
  std::vector<Vector> out;
  for (long i = 0; i < a.rows(); ++i) out.push_back(es.eigenvectors().col(i));
  return out;
}

// eigenvalue of t(u) on a (near-)eigenvector, read off at the dominant entry
inline Complex transfer_eigenvalue(const TransferModel& tm, Complex u,
                                   const Vector& v) {
  Vector w;
  transfer_apply(tm, u, v, w);
  long k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return w(k) / v(k);
}

// largest relative deviation of t(u) v from collinearity with v
inline double eigen_residual(const TransferModel& tm, Complex u,
                             const Vector& v) {
  Vector w;
  transfer_apply(tm, u, v, w);
  long k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const Complex lam = w(k) / v(k);
  return (w - lam * v).norm() / w.norm();
}

// ---------------------------------------------------------------------------
// Factorized form of a transfer eigenvalue through its zero set

struct ZeroRootForm {
  PolyBasis basis = PolyBasis::Trig;
  double eta = 0.0;
  Complex lambda0;
  std::vector<Complex> roots;  // z variables

  Complex eval(Complex u) const {
    Complex p = lambda0;
    if (basis == PolyBasis::Trig) {
      for (const Complex& z : roots) p *= std::sinh((u - II * z - 2.0 * eta) / 2.0);
    } else {
      for (const Complex& z : roots) p *= u - II * z + 0.5;
    }
    return p;
  }
};

namespace detail {

// fold the real part of z into (-pi, pi]
inline Complex fold_root(Complex z) {
  double re = std::remainder(z.real(), 2.0 * PI);
  if (re <= -PI + 1e-14) re += 2.0 * PI;
  return Complex{re, z.imag()};
}

// Conjugate pairs far above the strip |Im z| <~ 2 eta put e^u roots at
// modulus e^{2 eta +- y}; once y is a few units the fitted polynomial can no
// longer see its own leading coefficients.  Such pairs sit on the symmetry
// lines Re z = 0 or pi, where the eigenvalue changes sign across the pair
// height, so walk both lines first and hand the hits back for deflation.
// Returned entries are u-plane roots, one +-y pair at a time.
inline std::vector<Complex> far_pair_scan(
    const std::function<Complex(Complex)>& sampler, int sites, double eta) {
  std::vector<Complex> far;
  // below y_lo the bounded roots can fake a sign flip; above y_hi the
  // partner root at e^{(sites+2)(2 eta + y)} would leave double range
  const double y_lo = 2.0 * eta + std::log(2.0 * sites + 8.0) + 0.3;
  const double y_hi = std::min(2.0 * eta * sites + 12.0,
                               660.0 / (sites + 2) + 2.0 * eta);
  if (y_hi <= y_lo + 0.5) return far;

  for (const double line : {PI, 0.0}) {
    const auto at = [&](double y) {
      return sampler(Complex{2.0 * eta - y, line});
    };
    const Complex ref = at(y_hi);
    if (!std::isfinite(std::abs(ref)) || std::abs(ref) == 0.0) continue;
    const double step = 0.17;
    double y_prev = y_hi;
    double s_prev = 1.0;  // Re(at(y_hi)/ref)
    for (double y = y_hi - step; y > y_lo; y -= step) {
      const Complex ratio = at(y) / ref;
      const double s = ratio.real();
      if (std::isfinite(s) && s_prev * s < 0.0) {
        double lo = y, hi = y_prev, s_lo = s;
        for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double s_mid = (at(mid) / ref).real();
          if (s_mid * s_lo < 0.0) {
            hi = mid;
          } else {
            lo = mid;
            s_lo = s_mid;
          }
        }
        Complex u{2.0 * eta - 0.5 * (lo + hi), line};
        for (int it = 0; it < 6; ++it) {
          const double h = 1e-6;
          const Complex f = sampler(u);
          const Complex fp = (sampler(u + h) - sampler(u - h)) / (2.0 * h);
          if (!(std::abs(fp) > 0.0)) break;
          const Complex du = f / fp;
          if (!std::isfinite(std::abs(du))) break;
          u -= du;
          if (std::abs(du) < 1e-13) break;
        }
        far.push_back(u);
        far.push_back(4.0 * eta - u);  // image under u -> 4 eta - u
      }
      if (std::isfinite(s)) {
        s_prev = s;
        y_prev = y;
      }
    }
  }
  return far;
}

}  // namespace detail

// Fit the sampled eigenvalue to its product form and return shifted roots.
// sampler(u) must be the transfer eigenvalue on one fixed eigenvector.
//
// The plain fit handles every state whose companion problem is well scaled.
// When a far conjugate pair pushes the end coefficients below the root
// finder's tolerance (trig ground states at large N*eta), a retry locates the
// pair on the symmetry lines, divides it out, and refits on the contour
// through the real zero set; the retry result is accepted only if the product
// form reproduces the sampler away from the fit contour.
inline ZeroRootForm extract_zero_roots(
    const std::function<Complex(Complex)>& sampler, PolyBasis basis, int sites,
    double eta, double radius = 0.0, bool polish_on_sampler = true) {
  const bool trig = basis == PolyBasis::Trig;
  const int degree = trig ? 2 * sites + 4 : 2 * sites + 2;
  if (radius <= 0.0) radius = trig ? 1.0 : 2.5;

  const auto attempt = [&](bool assisted) {
    ZeroRootForm out;
    out.basis = basis;
    out.eta = eta;

    std::vector<Complex> far;
    if (assisted && trig) far = detail::far_pair_scan(sampler, sites, eta);
    const auto deflated = [&](Complex u) {
      Complex v = sampler(u);
      for (const Complex& uf : far) v /= std::sinh(0.5 * (u - uf));
      return v;
    };
    const int fit_degree = degree - static_cast<int>(far.size());
    require(fit_degree >= 1, "extract_zero_roots: too many far pairs");
    const double shift = (assisted && trig) ? 2.0 * eta : 0.0;

    const auto pts = poly_sample_points(basis, 4 * sites + 16, radius);
    std::vector<Complex> vals(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) vals[i] = deflated(pts[i] + shift);
    const PolyFit fit = fit_polynomial(pts, vals, fit_degree, basis);
    std::vector<Complex> uroots = polynomial_roots(fit.poly);
    for (Complex& r : uroots) r += shift;
    uroots.insert(uroots.end(), far.begin(), far.end());
    require((int)uroots.size() == degree, "extract_zero_roots: lost roots");

    if (polish_on_sampler) {
      for (Complex& r : uroots) {
        for (int it = 0; it < 4; ++it) {
          const double h = 1e-6;
          const Complex f = sampler(r);
          const Complex fp = (sampler(r + h) - sampler(r - h)) / (2.0 * h);
          if (std::abs(fp) < 1e-300) break;
          const Complex step = f / fp;
          if (!std::isfinite(std::abs(step))) break;
          r -= step;
          if (std::abs(step) < 1e-13) break;
        }
      }
    }

    for (const Complex& ur : uroots) {
      const Complex z = trig ? Complex{-II * (ur - 2.0 * eta)}
                             : Complex{-II * (ur + 0.5)};
      out.roots.push_back(trig ? detail::fold_root(z) : z);
    }

    // normalization from a generic point away from the zero set
    out.lambda0 = 1.0;
    Complex best_u{0.377, 0.544};
    double best_mag = 0.0;
    for (const Complex cand : {Complex{0.377, 0.544}, Complex{-0.613, 0.281},
                               Complex{0.152, -0.702}}) {
      const double mag = std::abs(out.eval(cand));
      if (mag > best_mag) {
        best_mag = mag;
        best_u = cand;
      }
    }
    out.lambda0 = sampler(best_u) / out.eval(best_u);
    return out;
  };

  try {
    return attempt(false);
  } catch (const std::exception&) {
    const ZeroRootForm out = attempt(true);
    for (const Complex probe : {Complex{-0.613, 0.281}, Complex{0.152, -0.702}})
      require(rel_diff(out.eval(probe), sampler(probe)) < 1e-6,
              "extract_zero_roots: deflated fit does not reproduce the "
              "eigenvalue");
    return out;
  }
}

inline double zero_root_residual(const ZeroRootForm& f,
                                 const std::function<Complex(Complex)>& sampler,
                                 const std::vector<Complex>& probes) {
  double worst = 0.0;
  for (const Complex& u : probes)
    worst = std::max(worst, rel_diff(f.eval(u), sampler(u)));
  return worst;
}

// ---------------------------------------------------------------------------
// Root taxonomy

struct RootInventory {
  std::vector<double> reals;        // real z, one entry per root
  std::vector<double> origin_ys;    // conjugate pairs at +-iy, one entry per pair
  std::vector<double> pi_ys;        // pairs at pi +- iy, one entry per pair
  std::vector<Complex> others;      // anything unmatched
};

inline RootInventory classify_roots(const std::vector<Complex>& zs,
                                    double tol = 1e-6) {
  RootInventory inv;
  std::vector<Complex> pool;
  for (const Complex& z : zs) {
    const Complex f = detail::fold_root(z);
    if (std::abs(f.imag()) < tol) {
      inv.reals.push_back(f.real());
    } else {
      pool.push_back(f);
    }
  }
  std::vector<bool> used(pool.size(), false);
  for (size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    size_t partner = pool.size();
    double best = tol * 10.0;
    for (size_t j = i + 1; j < pool.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(detail::fold_root(-pool[j]) - pool[i]);
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner == pool.size()) {
      inv.others.push_back(pool[i]);
      continue;
    }
    used[partner] = true;
    const double y = std::abs(pool[i].imag());
    if (std::abs(pool[i].real()) < tol * 10.0) {
      inv.origin_ys.push_back(y);
    } else if (std::abs(std::abs(pool[i].real()) - PI) < tol * 10.0) {
      inv.pi_ys.push_back(y);
    } else {
      inv.others.push_back(pool[i]);
      inv.others.push_back(pool[partner]);
    }
  }
  std::sort(inv.reals.begin(), inv.reals.end());
  std::sort(inv.origin_ys.begin(), inv.origin_ys.end());
  std::sort(inv.pi_ys.begin(), inv.pi_ys.end());
  return inv;
}

// ---------------------------------------------------------------------------
// Energies from root configurations

inline Complex sector_energy_from_roots_trig(double eta, const XxzBoundary& b,
                                             const std::vector<Complex>& zs) {
  Complex e = 0.25 * std::tanh(2.0 * eta) * (1.0 + 1.0 / std::tanh(b.sp));
  for (const Complex& z : zs) {
    const Complex arg = (2.0 * eta + II * z) / 2.0;
    require(std::abs(std::sinh(arg)) > 1e-12,
            "sector_energy_from_roots_trig: root at coupling pole");
    e -= 0.25 / std::tanh(arg);
  }
  return e;
}

inline Complex rational_energy_from_roots(const std::vector<Complex>& zs) {
  Complex e = 0.0;
  for (const Complex& z : zs) {
    const Complex den = 1.0 - 2.0 * II * z;
    require(std::abs(den) > 1e-12,
            "rational_energy_from_roots: root at coupling pole");
    e += 1.0 / den;
  }
  return e;
}

}  // namespace d2chain
