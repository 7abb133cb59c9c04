#include "catch_amalgamated.hpp"
#include "d2chain/thermo.hpp"

#include <random>

using namespace d2chain;

namespace {

constexpr double kEta = 0.5;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Hermitian sector family whose derived constants all exceed 2*eta in real
// part, so the ground-state density has no boundary strings and every
// k-series in this file converges with a comfortable margin.
XxzBoundary calm_sector() {
  return hermitian_xxz_boundary(kEta, -1.1, Complex{0.44, 0.33}, 2.3, 0.35, 0.6);
}

double min_decay_rate(const DerivedBoundary& d, double z_a) {
  double r = std::min(2.0 * kEta, d.a1.real() - 2.0 * kEta);
  r = std::min(r, d.a1p.real() - 2.0 * kEta);
  r = std::min(r, detail::abar2(d).real() - 2.0 * kEta);
  r = std::min(r, detail::abar2p(d).real() - 2.0 * kEta);
  r = std::min(r, z_a - 4.0 * kEta);
  return r;
}

// Periodic trapezoid convolution (f * rho)(u) over (-pi, pi], plus the two
// point masses the smooth density omits.
template <typename Kernel>
Complex convolve_density(Kernel&& f, double u, double eta,
                         const DerivedBoundary& der, int sites, double z_a,
                         int grid = 2048) {
  Complex acc = 0.0;
  const double h = 2.0 * PI / grid;
  for (int j = 0; j < grid; ++j) {
    const double z = -PI + h * j;
    acc += f(u - z) * density_trig_u(z, eta, der, sites, z_a);
  }
  acc *= h;
  acc -= (f(u) + f(u - PI)) / static_cast<double>(sites);
  return acc;
}

}  // namespace

TEST_CASE("kernel fourier coefficients match the closed exponential forms") {
  for (const double lam : {kEta, 2.0 * kEta, 4.0 * kEta, -1.3 * kEta}) {
    for (int k = -6; k <= 6; ++k) {
      const Complex fa =
          fourier_coefficient([&](double u) { return kernel_a(lam, u); }, k, 8192);
      const Complex fb =
          fourier_coefficient([&](double u) { return kernel_b(lam, u); }, k, 8192);
      CHECK(std::abs(fa - kernel_a_fourier(lam, k)) < 1e-8);
      CHECK(std::abs(fb - kernel_b_fourier(lam, k)) < 1e-8);
    }
  }
}

TEST_CASE("smoothing kernel has one-sided fourier coefficients") {
  // coth((2 eta + i z)/2) = 1 + 2 sum_{n>=1} e^{-2 eta n} e^{-i n z}: only
  // non-positive modes survive, which is what collapses the energy integral
  // to a one-sided series.
  for (int k = -5; k <= 5; ++k) {
    const Complex num = fourier_coefficient(
        [&](double z) { return 1.0 / std::tanh(kEta + Complex{0.0, 0.5 * z}); },
        k, 8192);
    const double sk = (k > 0) - (k < 0);
    const Complex closed = 2.0 * PI * (1.0 - sk) * std::exp(-2.0 * kEta * std::abs(k));
    CHECK(std::abs(num - closed) < 1e-10);
  }
}

TEST_CASE("k-space and real-space densities are a fourier pair") {
  const int sites = 12;
  const double z_a = 2.8;
  const DerivedBoundary der = derived_boundary(calm_sector());
  REQUIRE(min_decay_rate(der, z_a) > 0.15);

  const int kmax = 260;
  for (const double u : {-3.0, -2.2, -1.4, -0.7, -0.2, 0.4, 1.1, 1.9, 2.6, 3.0}) {
    Complex synth = 0.0;
    for (int k = -kmax; k <= kmax; ++k) {
      Complex coeff = density_trig(k, kEta, der, sites, z_a);
      // add back the two point masses so only the smooth part is synthesized
      coeff += (1.0 + std::exp(Complex{0.0, -k * PI})) / static_cast<double>(sites);
      synth += coeff * std::exp(Complex{0.0, k * u});
    }
    synth /= 2.0 * PI;
    CHECK(std::abs(synth - density_trig_u(u, kEta, der, sites, z_a)) < 1e-6);
  }
}

TEST_CASE("density solves its convolution equation") {
  const int sites = 10;
  const double z_a = 2.8;
  const DerivedBoundary der = derived_boundary(calm_sector());
  REQUIRE(min_decay_rate(der, z_a) > 0.15);

  // N (smooth + point-mass convolution) + additional-pair terms on the left;
  // driving terms from the bulk and the four boundary constants on the right.
  auto residual = [&](auto&& ker, double u) {
    Complex lhs = static_cast<double>(sites) *
                  convolve_density([&](double v) { return ker(2.0 * kEta, v); },
                                   u, kEta, der, sites, z_a);
    lhs += ker(z_a + 2.0 * kEta, u - PI) + ker(z_a - 2.0 * kEta, u - PI);
    Complex rhs = 2.0 * static_cast<double>(sites) * ker(4.0 * kEta, u);
    rhs += ker(4.0 * kEta, u - PI) + ker(4.0 * kEta, u);
    rhs -= ker(2.0 * kEta, u) + ker(2.0 * kEta, u - PI);
    rhs += ker(der.a1, u - PI) + ker(der.a1p, u - PI);
    rhs += ker(detail::abar2(der), u) + ker(detail::abar2p(der), u);
    return std::abs(lhs - rhs);
  };

  for (const double u : {0.3, 0.9, 1.7, 2.5, -1.2}) {
    CHECK(residual([](Complex lam, double v) { return kernel_b(lam, v); }, u) < 1e-6);
    CHECK(residual([](Complex lam, double v) { return kernel_a(lam, v); }, u) < 1e-6);
  }
}

TEST_CASE("series and closed ground energies agree") {
  const XxzBoundary b = calm_sector();
  const DerivedBoundary der = derived_boundary(b);
  for (const int sites : {6, 20}) {
    for (const double z_a : {2.9, 45.0}) {
      const Complex series = ground_energy_trig_series(sites, kEta, der, b.sp, z_a);
      const double closed = ground_energy_trig(sites, kEta, der, b.sp, z_a);
      CHECK(std::abs(series.imag()) < 1e-12);
      CHECK(std::abs(series.real() - closed) < 1e-10 * std::abs(closed));
    }
  }
  // far pair: finite-position value reaches the limiting form
  const double far = ground_energy_trig(8, kEta, der, b.sp, 45.0);
  CHECK(std::abs(far - ground_energy_trig(8, kEta, der, b.sp)) < 1e-12);
}

TEST_CASE("boundary string correction vanishes term by term") {
  std::mt19937_64 rng(611);
  for (const double eta : {0.8, 0.58}) {
    std::uniform_real_distribution<double> draw(0.02, 2.0 * eta - 0.02);
    for (int trial = 0; trial < 20; ++trial) {
      const double alpha1 = draw(rng);
      const StringCorrectionTerms t = boundary_string_correction_terms(eta, alpha1);
      CHECK(std::abs(t.direct) > 1e-3);  // the cancellation is between real terms
      CHECK(std::abs(t.direct + t.backflow) < 1e-8);
    }
  }
  CHECK(std::abs(boundary_string_correction_trig(0.8, 1.0)) < 1e-8);
}

TEST_CASE("sector surface energies add up to the full chain value") {
  const XxzBoundary bs = calm_sector();
  const XxzBoundary bt =
      hermitian_xxz_boundary(kEta, -0.9, Complex{0.3, 0.2}, 1.7, -0.25, 1.1);
  const DerivedBoundary ds = derived_boundary(bs);
  const DerivedBoundary dt = derived_boundary(bt);

  const SurfaceEnergyResult ss = surface_energy_xxz(kEta, ds, bs.sp);
  const SurfaceEnergyResult st = surface_energy_xxz(kEta, dt, bt.sp);
  const SurfaceEnergyResult full = surface_energy_d2_trig(kEta, ds, dt, bs.sp, bt.sp);

  CHECK(std::abs(full.value - (ss.value + st.value)) <
        1e-14 * (1.0 + std::abs(full.value)));
  REQUIRE(full.breakdown.size() == ss.breakdown.size() + st.breakdown.size());
  for (size_t i = 0; i < ss.breakdown.size(); ++i) {
    CHECK(full.breakdown[i].second == ss.breakdown[i].second);
    CHECK(full.breakdown[i + ss.breakdown.size()].second == st.breakdown[i].second);
  }

  const SurfaceEnergyResult swapped =
      surface_energy_d2_trig(kEta, dt, ds, bt.sp, bs.sp);
  CHECK(std::abs(swapped.value - full.value) < 1e-14 * (1.0 + std::abs(full.value)));

  // the closed ground energy is bulk + surface once the pair limit is taken
  const double eg = ground_energy_trig(9, kEta, ds, bs.sp);
  CHECK(std::abs(eg - (-4.5 / std::tanh(2.0 * kEta) + ss.value)) < 1e-13);
}

TEST_CASE("fermi integral: quadrature equals the digamma series") {
  for (const double a : {0.5, 0.7, 1.0, 1.9, 3.3, 7.0, 20.0}) {
    CHECK(std::abs(fermi_integral(a) - fermi_integral_series(a)) < 1e-9);
  }
  CHECK(std::abs(fermi_integral_series(1.0) - std::log(2.0)) < 1e-12);
}

TEST_CASE("isotropic surface energy: regime flag, monotone tail, additivity") {
  CHECK(surface_energy_xxx(0.9, -1.4, 0.5).in_regime);
  CHECK_FALSE(surface_energy_xxx(0.4, -1.4, 0.5).in_regime);
  CHECK_FALSE(surface_energy_xxx(0.9, -0.3, 0.5).in_regime);
  CHECK(std::isfinite(surface_energy_xxx(0.4, -0.3, 0.5).value));

  // the integral term shrinks monotonically as either parameter grows
  double prev = fermi_integral(0.55);
  for (double a = 0.8; a < 6.0; a += 0.7) {
    const double cur = fermi_integral(a);
    CHECK(cur < prev);
    prev = cur;
  }
  const SurfaceEnergyResult far = surface_energy_xxx(150.0, -1.4, 0.5);
  CHECK(std::abs(far.breakdown[3].second) < 4e-3);  // fermi_p ~ 1/(2p)

  const XXXReducedBoundary ra{0.9, -1.4, 0.5};
  const XXXReducedBoundary rb{1.3, -2.0, 0.2};
  const SurfaceEnergyResult both = surface_energy_d2_xxx(ra, rb);
  const double split = surface_energy_xxx(ra.p, ra.q, ra.xi).value +
                       surface_energy_xxx(rb.p, rb.q, rb.xi).value;
  CHECK(std::abs(both.value - split) < 1e-14 * (1.0 + std::abs(both.value)));
  CHECK(both.in_regime);
}

TEST_CASE("isotropic series route matches the closed form") {
  // additional-pair bookkeeping at finite z_a, derived once from the
  // one-sided sums: -2/(2 z_a - 1) + F(z_a + 1/2) + F(z_a - 1/2)
  auto pair_term = [](double z_a) {
    return -2.0 / (2.0 * z_a - 1.0) + fermi_integral_series(z_a + 0.5) +
           fermi_integral_series(z_a - 0.5);
  };
  const XXXReducedBoundary draws[] = {{0.8, 1.3, 0.4}, {0.6, 0.9, 1.1}};
  for (const auto& red : draws) {
    for (const int sites : {8, 14}) {
      for (const double z_a : {2.5, 35.0}) {
        const double series = xxx_ground_energy_series(sites, red, z_a);
        const double closed = xxx_ground_energy(sites, red) + pair_term(z_a);
        CHECK(std::abs(series - closed) < 1e-8);
      }
    }
  }
  CHECK(std::abs(xxx_periodic_energy_per_site() - (1.0 - 2.0 * std::log(2.0))) == 0.0);
}

TEST_CASE("additional pair position grows linearly with slope 2 eta") {
  CHECK(z_a_prediction(9, 0.75) - z_a_prediction(8, 0.75) == Catch::Approx(1.5));
  CHECK(z_a_prediction(4, 0.5, 2.0) == Catch::Approx(6.0));
  CHECK(z_a_prediction(6, 1.0) == Catch::Approx(12.0 + 1.758));
}

TEST_CASE("density normalization at k = 0") {
  const DerivedBoundary der = derived_boundary(calm_sector());
  const Complex r0 = density_trig(0.0, kEta, der, 12, 2.8);
  CHECK(std::abs(r0 - Complex(2.0 + 2.0 / 12.0)) < 1e-14);
  CHECK(std::abs(density_xxx(0.0, {0.8, 1.3, 0.4}, 9, 2.5) - 1.0) < 1e-14);
}
