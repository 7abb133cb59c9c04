#include <random>

#include "catch_amalgamated.hpp"
#include "d2chain/bethe.hpp"
#include "d2chain/hamiltonian.hpp"
#include "d2chain/spectra.hpp"

using namespace d2chain;

namespace {

const double kEta = 0.58;

XxzBoundary draw_boundary(std::mt19937_64& rng) {
  XxzBoundary b;
  b.s = random_complex(rng, 0.4, 1.2, -0.3, 0.3);
  b.s1 = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  b.s2 = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  b.sp = random_complex(rng, 0.4, 1.2, -0.3, 0.3);
  b.s1p = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  b.s2p = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  return b;
}

std::vector<Complex> ladder(int n) {
  std::vector<Complex> th;
  for (int k = 1; k <= n; ++k) th.push_back(Complex{0.13 * k, 0.0});
  return th;
}

Complex matrix_eigenvalue_on(const Matrix& h, const Vector& v) {
  const Vector hv = h * v;
  long k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return hv(k) / v(k);
}

double root_recovery(const std::vector<Complex>& got,
                     const std::vector<Complex>& want) {
  double worst = 0.0;
  for (const Complex& z : got) {
    double best = 1e30;
    for (const Complex& w : want) best = std::min(best, std::abs(z - w));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("dressed eigenvalue form closes over the anisotropic spectrum") {
  std::mt19937_64 rng(501);
  const XxzBoundary b = draw_boundary(rng);
  for (int n : {1, 2}) {
    const auto theta = n == 1 ? std::vector<Complex>{Complex{0.0, 0.0}}
                              : ladder(n);
    auto tm = sector_transfer_model(ModelKind::XXZTrig, kEta, theta, b);
    const auto tq = TqSectorTrig::make(kEta, theta, b);
    for (const auto& v : transfer_eigenbasis(tm)) {
      auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, v); };
      const auto fit = tq_fit_q(tq, sampler);
      CHECK(fit.solve_residual < 1e-12);
      CHECK(fit.form_residual < 1e-10);
      auto dressed = tq;
      dressed.mu = fit.mu;
      for (Complex p : {Complex{0.9, 0.2}, Complex{-0.4, 0.6}})
        CHECK(rel_diff(dressed.lambda(p), sampler(p)) < 1e-10);
      for (double r : bae_residuals(dressed)) CHECK(r < 1e-10);
    }
  }
}

TEST_CASE("flipping the square root branch spoils the dressed form") {
  std::mt19937_64 rng(501);
  const XxzBoundary b = draw_boundary(rng);
  const std::vector<Complex> theta{Complex{0.0, 0.0}};
  auto tm = sector_transfer_model(ModelKind::XXZTrig, kEta, theta, b);
  const auto tq = TqSectorTrig::make(kEta, theta, b, true);
  for (const auto& v : transfer_eigenbasis(tm)) {
    auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, v); };
    CHECK(tq_fit_q(tq, sampler).solve_residual > 1e-2);
  }
}

TEST_CASE("rational dressed form closes with the shifted pole") {
  std::mt19937_64 rng(502);
  const XxzBoundary b = draw_boundary(rng);
  const Complex lead = -(2.0 + b.s1 * b.s2p + b.s2 * b.s1p);
  for (int n : {1, 2}) {
    const auto theta = n == 1 ? std::vector<Complex>{Complex{0.0, 0.0}}
                              : ladder(n);
    auto tm = sector_transfer_model(ModelKind::XXXRational, kEta, theta, b);
    const auto tq = TqSectorRational::make(theta, b);
    for (const auto& v : transfer_eigenbasis(tm)) {
      auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, v); };
      const auto fit = tq_fit_q(tq, sampler);
      CHECK(fit.solve_residual < 1e-12);
      CHECK(fit.form_residual < 1e-10);
      auto dressed = tq;
      dressed.mu = fit.mu;
      for (Complex p : {Complex{1.9, 0.2}, Complex{-1.4, 0.6}})
        CHECK(rel_diff(dressed.lambda(p), sampler(p)) < 1e-10);
      for (double r : bae_residuals(dressed)) CHECK(r < 1e-10);
      // highest coefficient is state independent
      const auto f = extract_zero_roots(sampler, PolyBasis::Rational, n, 0.0);
      CHECK(rel_diff(f.lambda0, lead) < 1e-12);
    }
  }
}

TEST_CASE("reduced chain dressed form closes") {
  std::mt19937_64 rng(503);
  XxzBoundary hb;
  hb.s = Complex{1.1, 0.0};
  hb.sp = Complex{-0.8, 0.0};
  hb.s1 = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  hb.s2 = std::conj(hb.s1);
  hb.s1p = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
  hb.s2p = std::conj(hb.s1p);
  const auto red = xxx_reduce(hb);
  for (int n : {1, 2}) {
    const auto theta = n == 1 ? std::vector<Complex>{Complex{0.0, 0.0}}
                              : ladder(n);
    auto tm = reduced_transfer_model(theta, red);
    const auto tq = TqReducedRational::make(theta, red);
    for (const auto& v : transfer_eigenbasis(tm)) {
      auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, v); };
      const auto fit = tq_fit_q(tq, sampler);
      CHECK(fit.solve_residual < 1e-12);
      CHECK(fit.form_residual < 1e-10);
      auto dressed = tq;
      dressed.mu = fit.mu;
      for (Complex p : {Complex{1.9, 0.2}, Complex{-1.4, 0.6}})
        CHECK(rel_diff(dressed.lambda(p), sampler(p)) < 1e-10);
    }
  }
}

TEST_CASE("newton refinement pulls perturbed roots back") {
  std::mt19937_64 rng(504);
  const XxzBoundary b = draw_boundary(rng);
  const auto theta = ladder(2);
  auto tm = sector_transfer_model(ModelKind::XXZTrig, kEta, theta, b);
  const auto basis = transfer_eigenbasis(tm);
  auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, basis[0]); };
  auto tq = TqSectorTrig::make(kEta, theta, b);
  const auto fit = tq_fit_q(tq, sampler);
  tq.mu = fit.mu;
  for (auto& m : tq.mu) m += Complex{3e-4, -2e-4};
  refine_bae(tq);
  CHECK(root_recovery(tq.mu, fit.mu) < 1e-10);
  for (double r : bae_residuals(tq)) CHECK(r < 1e-10);
}

TEST_CASE("transfer zeros satisfy the closed product identities") {
  std::mt19937_64 rng(505);
  const XxzBoundary b = draw_boundary(rng);
  for (int n : {2, 3, 4}) {
    const std::vector<Complex> theta(n, Complex{0.0, 0.0});
    auto tm = sector_transfer_model(ModelKind::XXZTrig, kEta, theta, b);
    const Matrix hd = sector_hamiltonian_trig(kEta, n, b).dense();
    const auto sys = SectorZeroSystem::make(kEta, theta, b);
    for (const auto& v : transfer_eigenbasis(tm)) {
      auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, v); };
      const auto f = extract_zero_roots(sampler, PolyBasis::Trig, n, kEta);
      CHECK(sys.residuals_at(f.roots).cwiseAbs().maxCoeff() < 1e-10);
      const Complex er = sector_energy_from_roots_trig(kEta, b, f.roots);
      CHECK(std::abs(er - matrix_eigenvalue_on(hd, v)) < 1e-10);
    }
  }
}

TEST_CASE("orbit parametrization solves the product identities") {
  const int n = 3;
  const auto theta = ladder(n);
  const auto hb =
      hermitian_xxz_boundary(kEta, -1.5, Complex{0.8, 0.6}, 0.9, 0.4, 0.7);
  auto tm0 = sector_transfer_model(ModelKind::XXZTrig, kEta,
                                   std::vector<Complex>(n, Complex{}), hb);
  auto tm = sector_transfer_model(ModelKind::XXZTrig, kEta, theta, hb);
  const Matrix hd = sector_hamiltonian_trig(kEta, n, hb).dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hd);
  const Vector gs0 = es.eigenvectors().col(0);
  // follow the ground state onto the staggered chain by overlap
  const auto basis = transfer_eigenbasis(tm);
  size_t pick = 0;
  double best = -1.0;
  for (size_t i = 0; i < basis.size(); ++i) {
    const double ov = std::abs(gs0.dot(basis[i]));
    if (ov > best) {
      best = ov;
      pick = i;
    }
  }
  REQUIRE(best > 0.9);
  auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, basis[pick]); };
  const auto f = extract_zero_roots(sampler, PolyBasis::Trig, n, kEta);

  auto sys = SectorZeroSystem::make(kEta, theta, hb);
  sys.orbits = orbits_from_roots(f.roots, 1e-4);
  CHECK(sys.residuals().cwiseAbs().maxCoeff() < 1e-10);

  auto p = sys.params();
  for (size_t i = 0; i < p.size(); ++i) p[i] += 1e-3 * std::cos(1.7 * i);
  sys.set_params(p);
  CHECK(solve_zero_system(sys) < 1e-10);
  CHECK(root_recovery(sys.roots(), f.roots) < 1e-8);
}
