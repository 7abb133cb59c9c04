#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "d2chain/bethe.hpp"
#include "d2chain/hamiltonian.hpp"
#include "d2chain/spectra.hpp"
#include "d2chain/thermo.hpp"

namespace d2chain {

// Finite-size scans and trend fits.  A scan walks a list of chain lengths,
// produces one scalar per length, and records per-point failures instead of
// aborting, so a partial sweep can still be fitted or inspected.

enum class ScanQuantity { AdditionalRootPosition, GroundEnergy, SurfaceEnergy };
enum class ScanBackend { Dense, ZeroRoots };

struct ScanSpec {
  ScanQuantity quantity = ScanQuantity::GroundEnergy;
  ScanBackend backend = ScanBackend::Dense;
  ModelKind kind = ModelKind::XXZTrig;
  bool periodic = false;  // closed chain, boundary couplings dropped
  double eta = 0.5;
  XxzBoundary sector;          // XXZTrig
  D2Boundary chain;            // D2Trig, handled one factor chain at a time
  XXXReducedBoundary reduced;  // XXXRational
  std::vector<int> sites;
};

struct ScanPoint {
  int sites = 0;
  double value = 0.0;
  bool ok = true;
  std::string note;
};

using ScanTable = std::vector<ScanPoint>;

// Every path below works on spin-1/2 factor chains (the 4-state chain enters
// only through its two commuting factors), so one cap covers all of them.
inline constexpr int kScanMaxSites = 14;

// Chains small enough to diagonalize densely.  Above this we fall back to
// Lanczos, which is only trusted for hermitian problems.
inline constexpr long kScanDenseDim = 2048;

// ---------------------------------------------------------------------------
// Additional-pair readout
//
// Boundary strings predicted by the derived parameters sit at Re z = pi with
// height 2 eta - Re(a1) (and the primed copy) and at the origin with height
// 2 eta - Re(abar2) (and primed), each present only while that height is
// positive.  The additional pair is whatever conjugate pair survives once
// those template heights are struck from the root inventory.

inline double extract_z_a(const std::vector<Complex>& zs, double eta,
                          const DerivedBoundary& der, double match_tol = 0.2) {
  const RootInventory inv = classify_roots(zs, 2e-2);
  std::vector<double> pi_templates, origin_templates;
  const auto push_height = [&](std::vector<double>& v, Complex a) {
    const double y = 2.0 * eta - a.real();
    if (y > 1e-9) v.push_back(y);
  };
  push_height(pi_templates, der.a1);
  push_height(pi_templates, der.a1p);
  push_height(origin_templates, detail::abar2(der));
  push_height(origin_templates, detail::abar2p(der));

  const auto strike = [&](std::vector<double> heights,
                          std::vector<double> templates) {
    for (double t : templates) {
      double best = match_tol;
      size_t hit = heights.size();
      for (size_t i = 0; i < heights.size(); ++i) {
        if (std::abs(heights[i] - t) < best) {
          best = std::abs(heights[i] - t);
          hit = i;
        }
      }
      if (hit < heights.size()) heights.erase(heights.begin() + hit);
    }
    return heights;
  };

  double z_a = 0.0;
  for (double y : strike(inv.pi_ys, pi_templates)) z_a = std::max(z_a, y);
  for (double y : strike(inv.origin_ys, origin_templates))
    z_a = std::max(z_a, y);
  require(z_a > 0.0, "extract_z_a: no pair left after removing strings");
  return z_a;
}

// ---------------------------------------------------------------------------
// Scan execution

namespace detail {

inline std::mt19937_64 scan_rng(int sites, std::uint64_t salt) {
  return std::mt19937_64{0x8d2c5a1e00ULL ^ (salt << 20) ^
                         static_cast<std::uint64_t>(sites)};
}

inline double scan_ground(const HamiltonianBuild& hb, bool hermitian,
                          int sites, std::uint64_t salt) {
  if (!hermitian)
    require(hb.dim() <= kScanDenseDim,
            "run_scan: chain too large for the dense non-hermitian solver");
  auto rng = scan_rng(sites, salt);
  return ground_state(hb, rng, kScanDenseDim).value;
}

inline double sector_ground_trig(double eta, int sites, const XxzBoundary& b,
                                 std::uint64_t salt) {
  return scan_ground(sector_hamiltonian_trig(eta, sites, b),
                     is_hermitian_family(b, eta), sites, salt);
}

inline double zero_root_ground_trig(double eta, int sites,
                                    const XxzBoundary& b) {
  auto rng = scan_rng(sites, 7);
  const EigenPair g =
      ground_state(sector_hamiltonian_trig(eta, sites, b), rng, kScanDenseDim);
  const TransferModel tm = sector_transfer_model(
      ModelKind::XXZTrig, eta, std::vector<Complex>(sites, Complex{0.0, 0.0}),
      b);
  const auto sampler = [&](Complex u) {
    return transfer_eigenvalue(tm, u, g.vec);
  };
  ZeroRootForm form =
      extract_zero_roots(sampler, PolyBasis::Trig, sites, eta);
  SectorZeroSystem sys = SectorZeroSystem::make(
      eta, std::vector<Complex>(sites, Complex{0.0, 0.0}), b);
  sys.orbits = orbits_from_roots(form.roots, 1e-5);
  const double res = solve_zero_system(sys);
  require(res < 1e-6, "zero-root backend: residuals did not converge");
  const Complex e = sys.energy();
  require(std::abs(e.imag()) < 1e-7,
          "zero-root backend: energy has an imaginary part");
  return e.real();
}

inline double additional_pair_position(const ScanSpec& spec, int sites) {
  require(spec.kind == ModelKind::XXZTrig && !spec.periodic,
          "run_scan: pair-position scans need an open trig factor chain");
  auto rng = scan_rng(sites, 11);
  const EigenPair g = ground_state(
      sector_hamiltonian_trig(spec.eta, sites, spec.sector), rng,
      kScanDenseDim);
  const TransferModel tm = sector_transfer_model(
      ModelKind::XXZTrig, spec.eta,
      std::vector<Complex>(sites, Complex{0.0, 0.0}), spec.sector);
  const auto sampler = [&](Complex u) {
    return transfer_eigenvalue(tm, u, g.vec);
  };
  const ZeroRootForm form =
      extract_zero_roots(sampler, PolyBasis::Trig, sites, spec.eta);
  const BoundaryFields f = boundary_fields(spec.eta, spec.sector);
  const double context = (f.hz1 * f.hzN).real();
  const DerivedBoundary der = derived_boundary(spec.sector, context);
  return extract_z_a(form.roots, spec.eta, der);
}

inline double scan_value(const ScanSpec& spec, int sites) {
  const double eta = spec.eta;
  switch (spec.quantity) {
    case ScanQuantity::AdditionalRootPosition:
      return additional_pair_position(spec, sites);

    case ScanQuantity::GroundEnergy: {
      if (spec.periodic) {
        require(spec.kind != ModelKind::D2Trig,
                "run_scan: closed chains are only built per factor");
        if (spec.kind == ModelKind::XXZTrig)
          return scan_ground(periodic_sector_trig(eta, sites), true, sites, 1);
        return scan_ground(periodic_xxx_hamiltonian(sites), true, sites, 2);
      }
      if (spec.backend == ScanBackend::ZeroRoots) {
        require(spec.kind == ModelKind::XXZTrig,
                "run_scan: zero-root backend covers the trig factor chain");
        return zero_root_ground_trig(eta, sites, spec.sector);
      }
      switch (spec.kind) {
        case ModelKind::XXZTrig:
          return sector_ground_trig(eta, sites, spec.sector, 3);
        case ModelKind::D2Trig:
          return sector_ground_trig(eta, sites, spec.chain.sig, 4) +
                 sector_ground_trig(eta, sites, spec.chain.tau, 5);
        case ModelKind::XXXRational:
          return scan_ground(reduced_hamiltonian_xxx(sites, spec.reduced),
                             true, sites, 6);
        default:
          require(false, "run_scan: unsupported model kind");
      }
      return 0.0;
    }

    case ScanQuantity::SurfaceEnergy: {
      require(!spec.periodic, "run_scan: closed chains have no surface term");
      ScanSpec ground = spec;
      ground.quantity = ScanQuantity::GroundEnergy;
      const double e = scan_value(ground, sites);
      switch (spec.kind) {
        case ModelKind::XXZTrig:
          return e + 0.5 * sites / std::tanh(2.0 * eta);
        case ModelKind::D2Trig:
          return e + sites / std::tanh(2.0 * eta);
        case ModelKind::XXXRational:
          return e - sites * xxx_periodic_energy_per_site();
        default:
          require(false, "run_scan: unsupported model kind");
      }
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace detail

// Worker count for per-point parallelism, capped by D2CHAIN_THREADS.
inline int scan_thread_budget() {
  if (const char* s = std::getenv("D2CHAIN_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

inline ScanTable run_scan(const ScanSpec& spec) {
  require(!spec.sites.empty(), "run_scan: empty site list");
  for (size_t i = 0; i < spec.sites.size(); ++i) {
    require(spec.sites[i] >= 1 && spec.sites[i] <= kScanMaxSites,
            "run_scan: sites out of range");
    require(i == 0 || spec.sites[i] > spec.sites[i - 1],
            "run_scan: site list must increase strictly");
  }
  ScanTable table(spec.sites.size());
  const auto fill = [&](size_t i) {
    ScanPoint& pt = table[i];
    pt.sites = spec.sites[i];
    try {
      pt.value = detail::scan_value(spec, pt.sites);
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.note = e.what();
    }
  };
  const int workers = std::min<int>(scan_thread_budget(),
                                    static_cast<int>(table.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < table.size(); ++i) fill(i);
    return table;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < table.size();
           i = next.fetch_add(1))
        fill(i);
    });
  for (std::thread& t : pool) t.join();
  return table;
}

// ---------------------------------------------------------------------------
// Trend fits

enum class FitModel { Linear, Exponential };

struct FitPoint {
  int sites = 0;
  double value = 0.0;
  double fitted = 0.0;
};

struct FitResult {
  FitModel model = FitModel::Linear;
  double slope = 0.0, intercept = 0.0;     // value ~ slope * N + intercept
  double amp = 0.0, rate = 0.0, limit = 0.0;  // value ~ amp e^{-rate N} + limit
  double residual_norm = 0.0;
  Eigen::MatrixXd covariance;  // (slope, intercept) or (amp, rate, limit)
  std::vector<FitPoint> points;
};

namespace detail {

inline std::vector<std::pair<int, double>> fit_points(const ScanTable& table) {
  std::vector<std::pair<int, double>> pts;
  for (const ScanPoint& p : table)
    if (p.ok) pts.emplace_back(p.sites, p.value);
  return pts;
}

inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = 1e-13 * std::max(1.0, s(0));
  Eigen::VectorXd inv = s;
  for (long i = 0; i < s.size(); ++i) inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace detail

inline FitResult fit_linear(const ScanTable& table) {
  const auto pts = detail::fit_points(table);
  const long m = static_cast<long>(pts.size());
  require(m >= 3, "fit_linear: need at least three points");
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (long i = 0; i < m; ++i) {
    a(i, 0) = pts[i].first;
    a(i, 1) = 1.0;
    y(i) = pts[i].second;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  FitResult out;
  out.model = FitModel::Linear;
  out.slope = c(0);
  out.intercept = c(1);
  const Eigen::VectorXd r = a * c - y;
  out.residual_norm = r.norm();
  const double dof = static_cast<double>(m - 2);
  const double var = dof > 0 ? r.squaredNorm() / dof : 0.0;
  out.covariance = var * detail::pseudo_inverse(a.transpose() * a);
  for (long i = 0; i < m; ++i)
    out.points.push_back({pts[i].first, pts[i].second,
                          out.slope * pts[i].first + out.intercept});
  return out;
}

// amp e^{-rate N} + limit, fitted by projecting out the two linear
// parameters and searching the rate on a log grid refined by golden section.
inline FitResult fit_exponential(const ScanTable& table, double rate_lo = 0.05,
                                 double rate_hi = 10.0) {
  const auto pts = detail::fit_points(table);
  const long m = static_cast<long>(pts.size());
  require(m >= 4, "fit_exponential: need at least four points");

  Eigen::VectorXd y(m);
  for (long i = 0; i < m; ++i) y(i) = pts[i].second;
  const auto project = [&](double d, double* amp, double* limit) {
    Eigen::MatrixXd a(m, 2);
    for (long i = 0; i < m; ++i) {
      a(i, 0) = std::exp(-d * pts[i].first);
      a(i, 1) = 1.0;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    if (amp) *amp = c(0);
    if (limit) *limit = c(1);
    return (a * c - y).squaredNorm();
  };

  const int coarse = 160;
  double best_d = rate_lo, best_f = project(rate_lo, nullptr, nullptr);
  std::vector<double> grid(coarse);
  for (int i = 0; i < coarse; ++i) {
    grid[i] = rate_lo * std::pow(rate_hi / rate_lo,
                                 static_cast<double>(i) / (coarse - 1));
    const double f = project(grid[i], nullptr, nullptr);
    if (f < best_f) {
      best_f = f;
      best_d = grid[i];
    }
  }
  double lo = rate_lo, hi = rate_hi;
  for (int i = 0; i < coarse; ++i) {
    if (grid[i] < best_d) lo = grid[i];
    if (grid[i] > best_d) {
      hi = grid[i];
      break;
    }
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = project(x1, nullptr, nullptr), f2 = project(x2, nullptr, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = project(x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = project(x2, nullptr, nullptr);
    }
  }

  FitResult out;
  out.model = FitModel::Exponential;
  out.rate = 0.5 * (lo + hi);
  const double ssr = project(out.rate, &out.amp, &out.limit);
  out.residual_norm = std::sqrt(ssr);
  Eigen::MatrixXd j(m, 3);
  for (long i = 0; i < m; ++i) {
    const double e = std::exp(-out.rate * pts[i].first);
    j(i, 0) = e;
    j(i, 1) = -out.amp * pts[i].first * e;
    j(i, 2) = 1.0;
  }
  const double dof = static_cast<double>(m - 3);
  const double var = dof > 0 ? ssr / dof : 0.0;
  out.covariance = var * detail::pseudo_inverse(j.transpose() * j);
  for (long i = 0; i < m; ++i)
    out.points.push_back(
        {pts[i].first, pts[i].second,
         out.amp * std::exp(-out.rate * pts[i].first) + out.limit});
  return out;
}

}  // namespace d2chain
