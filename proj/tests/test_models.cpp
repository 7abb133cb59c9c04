#include "catch_amalgamated.hpp"
#include "d2chain/verify.hpp"

#include <random>

using namespace d2chain;
using Catch::Approx;

namespace {

constexpr double kEta = 0.63;
const Complex kU{0.37, 0.21};

XxzBoundary random_sector(std::mt19937_64& rng) {
  auto rc = [&] { return random_complex(rng, -1.2, 1.2, -1.2, 1.2); };
  return {rc(), rc(), rc(), rc(), rc(), rc()};
}

D2Boundary random_chain(std::mt19937_64& rng) {
  return {random_sector(rng), random_sector(rng)};
}

}  // namespace

TEST_CASE("chain vertex weights match frozen values") {
  const Matrix r = r_matrix(ModelKind::D2Trig, kU, kEta);
  const Complex a{3.2550910091736336e+00, -8.8265822290276508e-01};
  const Complex b{-5.1290470602055516e-01, -2.1101081306508801e-01};
  const Complex e{4.5744369340803871e-02, 7.8902101695761284e-02};
  const Complex c{5.2545281351635396e+00, 0.0};
  const Complex c1{3.5497465532886237e+00, -7.5660165730680762e-01};
  const Complex g1{3.4005784942470449e+00, -8.2280415614186242e-01};
  const Complex d2{6.7417288862060332e-01, 4.8917397778161337e-01};
  CHECK(std::abs(r(0, 0) - a) < 1e-14);
  CHECK(std::abs(r(1, 1) - b) < 1e-14);
  CHECK(std::abs(r(3, 3) - e) < 1e-14);
  CHECK(std::abs(r(6, 9) - c) < 1e-14);
  CHECK(std::abs(r(3, 12) - c1) < 1e-14);
  CHECK(std::abs(r(2, 8) - g1) < 1e-14);
  CHECK(std::abs(r(12, 9) - d2) < 1e-14);

  int nonzero = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (std::abs(r(i, j)) > 1e-14) ++nonzero;
  CHECK(nonzero == 36);

  const Matrix rs = r_matrix(ModelKind::XXZTrig, kU, kEta);
  CHECK(std::abs(rs(0, 0) - Complex{-1.2872190345785348, 0.1714273560272063}) <
        1e-14);
  CHECK(std::abs(rs(1, 2) - Complex{-1.3397042143273601, 0.1411881908736629}) <
        1e-14);
  CHECK(rs(0, 0) == rs(3, 3));
  CHECK(rs(1, 1) == rs(2, 2));
}

TEST_CASE("reflection matrices match frozen values") {
  D2Boundary b;
  b.sig = {Complex{0.8, -0.35}, Complex{0.55, 0.2}, Complex{-0.7, 0.4},
           Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  b.tau = {Complex{-0.45, 0.6}, Complex{0.3, -0.5}, Complex{0.95, 0.15},
           Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  const Matrix k = k_matrix_d2_trig(kU, b);
  CHECK(std::abs(k(0, 0) - Complex{6.0292116025922021e-02, 4.4699773733643672e-01}) < 1e-14);
  CHECK(std::abs(k(1, 0) - Complex{-2.6979866779807482e-01, 3.6800056105941351e-02}) < 1e-14);
  CHECK(std::abs(k(2, 2) - Complex{-4.5498926791290140e-01, 8.6263433071022533e-01}) < 1e-14);
  CHECK(std::abs(k(3, 1) - Complex{-1.2074655466342377e-01, 2.6802697548603316e-01}) < 1e-14);
  CHECK(std::abs(k(3, 3) - Complex{-2.2077650851435901e-01, 1.1749008377902699e+00}) < 1e-14);

  const Matrix kr = k_matrix_d2_rational(kU, b, false);
  CHECK(std::abs(kr(0, 0) - Complex{-1.342e-01, 6.269e-01}) < 1e-13);
  CHECK(std::abs(kr(3, 1) - Complex{-2.6630e-02, 2.7791e-01}) < 1e-13);
  const Matrix krp = k_matrix_d2_rational(kU, b, true);
  CHECK(std::abs(krp(3, 1) - Complex{-2.8087e-01, 1.3459e-01}) < 1e-13);

  const Matrix ks = k_matrix_xxz_trig(kU, kEta, b.sig);
  CHECK(std::abs(ks(0, 0) - Complex{4.4018096289320557e-01, -4.8532194789045435e-01}) < 1e-14);
  CHECK(std::abs(ks(1, 1) - Complex{1.3841906411832923e+00, -3.0184040238154647e-01}) < 1e-14);
}

TEST_CASE("rational weights are the degeneration of the trigonometric ones") {
  const double eps = 1e-5;
  const Complex u{0.83, 0.41};

  auto r_at = [&](double e) {
    return Matrix{(2.0 / (e * e)) * r_matrix(ModelKind::D2Trig, e * u, -e / 4.0)};
  };
  const Matrix chain_lim = 2.0 * r_at(eps / 2.0) - r_at(eps);
  CHECK(rel_residual(chain_lim, r_matrix(ModelKind::D2Rational, u, 0.0)) < 1e-8);

  auto rs_at = [&](double e) {
    return Matrix{(2.0 / e) * r_matrix(ModelKind::XXZTrig, e * u, -e / 4.0)};
  };
  const Matrix six_lim = 2.0 * rs_at(eps / 2.0) - rs_at(eps);
  CHECK(rel_residual(six_lim, r_matrix(ModelKind::XXXRational, u, 0.0)) < 1e-8);

  std::mt19937_64 rng(31);
  D2Boundary b = random_chain(rng);
  auto scaled = [&](double e) {
    D2Boundary half = b;
    for (XxzBoundary* p : {&half.sig, &half.tau}) {
      p->s = e * p->s / 2.0;
      p->s1 /= 2.0;
      p->s2 /= 2.0;
      p->sp = e * p->sp / 2.0;
      p->s1p /= 2.0;
      p->s2p /= 2.0;
    }
    return half;
  };
  // the scaled matrices approach the limit linearly: extrapolate in eps
  auto k_at = [&](double e) {
    return Matrix{(4.0 / (e * e)) * k_matrix_d2_trig(e * u, scaled(e))};
  };
  const Matrix k_lim = 2.0 * k_at(eps / 2.0) - k_at(eps);
  CHECK(rel_residual(k_lim, k_matrix_d2_rational(u, b, false)) < 1e-8);
  // the same limit rules out the (t - u) variant of the corner element
  const Matrix k_var = k_matrix_d2_rational(u, b, true);
  CHECK(rel_residual(k_lim, k_var) > 1e-3);

  auto ks_at = [&](double e) {
    return Matrix{(2.0 / e) *
                  k_matrix_xxz_trig(e * u, -e / 4.0, scaled(e).sig)};
  };
  const Matrix ks_lim = 2.0 * ks_at(eps / 2.0) - ks_at(eps);
  CHECK(rel_residual(ks_lim, k_matrix_xxx(u, b.sig)) < 1e-8);
}

TEST_CASE("Yang-Baxter equation holds for every vertex model") {
  std::mt19937_64 rng(101);
  for (auto kind : {ModelKind::D2Trig, ModelKind::XXZTrig, ModelKind::D2Rational,
                    ModelKind::XXXRational}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Complex u = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
      const Complex v = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
      CHECK(verify_ybe(kind, kEta, u, v) < 1e-12);
    }
  }
}

TEST_CASE("vertex models satisfy unitarity, PT, initial and crossing relations") {
  std::mt19937_64 rng(102);
  for (auto kind : {ModelKind::D2Trig, ModelKind::XXZTrig, ModelKind::D2Rational,
                    ModelKind::XXXRational}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Complex u = random_complex(rng, -1.2, 1.2, -1.2, 1.2);
      const RProperties p = verify_r_properties(kind, kEta, u);
      CHECK(p.pt < 1e-12);
      CHECK(p.unitarity < 1e-12);
      CHECK(p.initial < 1e-12);
      CHECK(p.crossing < 1e-12);
      CHECK(p.periodicity < 1e-12);
    }
  }
}

TEST_CASE("chain R is a conjugated pair of six-vertex R's") {
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 4; ++rep) {
    const Complex u = random_complex(rng, -1.5, 1.5, -1.5, 1.5);
    CHECK(verify_factorization_r(false, kEta, u) < 1e-12);
    CHECK(verify_factorization_r(true, kEta, u) < 1e-12);
  }
}

TEST_CASE("reflection equations hold at both ends") {
  std::mt19937_64 rng(104);
  const D2Boundary b = random_chain(rng);
  const Complex u = random_complex(rng, -0.8, 0.8, -0.8, 0.8);
  const Complex v = random_complex(rng, -0.8, 0.8, -0.8, 0.8);

  KFun kd2 = [&](Complex w) { return k_matrix_d2_trig(w, b); };
  CHECK(verify_reflection(ModelKind::D2Trig, kEta, u, v, kd2) < 1e-12);
  KFun kbd2 = [&](Complex w) {
    return k_matrix(ModelKind::D2Trig, KSide::Dual, w, kEta, b);
  };
  CHECK(verify_dual_reflection(ModelKind::D2Trig, kEta, u, v, kbd2) < 1e-12);

  for (const XxzBoundary* sec : {&b.sig, &b.tau}) {
    KFun ks = [&](Complex w) { return k_matrix_xxz_trig(w, kEta, *sec); };
    CHECK(verify_reflection(ModelKind::XXZTrig, kEta, u, v, ks) < 1e-12);
    KFun kbs = [&](Complex w) {
      return k_matrix_sector(ModelKind::XXZTrig, KSide::Dual, w, kEta, *sec);
    };
    CHECK(verify_dual_reflection(ModelKind::XXZTrig, kEta, u, v, kbs) < 1e-12);
  }

  KFun krat = [&](Complex w) { return k_matrix_d2_rational(w, b, false); };
  CHECK(verify_reflection(ModelKind::D2Rational, kEta, u, v, krat) < 1e-12);
  KFun kbrat = [&](Complex w) {
    return k_matrix(ModelKind::D2Rational, KSide::Dual, w, kEta, b);
  };
  CHECK(verify_dual_reflection(ModelKind::D2Rational, kEta, u, v, kbrat) < 1e-12);

  KFun kxxx = [&](Complex w) { return k_matrix_xxx(w, b.sig); };
  CHECK(verify_reflection(ModelKind::XXXRational, kEta, u, v, kxxx) < 1e-12);
  KFun kbxxx = [&](Complex w) {
    return k_matrix_sector(ModelKind::XXXRational, KSide::Dual, w, kEta, b.sig);
  };
  CHECK(verify_dual_reflection(ModelKind::XXXRational, kEta, u, v, kbxxx) < 1e-12);
}

TEST_CASE("corner element variant fails the reflection equation") {
  std::mt19937_64 rng(105);
  const D2Boundary b = random_chain(rng);
  const Complex u{0.41, 0.27}, v{-0.33, 0.51};
  KFun k_printed = [&](Complex w) { return k_matrix_d2_rational(w, b, true); };
  CHECK(verify_reflection(ModelKind::D2Rational, kEta, u, v, k_printed) > 1e-3);
}

TEST_CASE("diagonal and tridiagonal reduced matrices solve their equations") {
  const XXXReducedBoundary red{0.8, -1.4, 0.37};
  const Complex u{0.41, 0.27}, v{-0.33, 0.51};
  KFun km = [&](Complex w) {
    return k_matrix_xxx_reduced(KSide::Reflection, w, red);
  };
  CHECK(verify_reflection(ModelKind::XXXRational, 0.0, u, v, km) < 1e-12);
  KFun kp = [&](Complex w) { return k_matrix_xxx_reduced(KSide::Dual, w, red); };
  CHECK(verify_dual_reflection(ModelKind::XXXRational, 0.0, u, v, kp) < 1e-12);
}

TEST_CASE("chain reflection matrices factor into sector pairs") {
  std::mt19937_64 rng(106);
  const D2Boundary b = random_chain(rng);
  for (int rep = 0; rep < 3; ++rep) {
    const Complex u = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
    for (bool rational : {false, true})
      for (auto side : {KSide::Reflection, KSide::Dual})
        CHECK(verify_factorization_k(rational, side, kEta, u, b) < 1e-12);
  }
}

TEST_CASE("six-vertex R degenerates to a rank-one projector") {
  const Matrix rdeg =
      r_matrix(ModelKind::XXZTrig, Complex{4.0 * kEta, 0.0}, kEta);
  Eigen::JacobiSVD<Matrix> svd(rdeg, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CHECK(svd.singularValues()(0) > 1.0);
  CHECK(svd.singularValues()(1) < 1e-13);

  const Vector psi = fusion_singlet(kEta, false);
  CHECK(std::abs(std::abs(psi.dot(svd.matrixU().col(0))) - 1.0) < 1e-13);
  CHECK(psi.norm() == Approx(1.0));

  const Matrix p12 = fusion_projector(kEta, false);
  const Matrix p21 = fusion_projector(kEta, true);
  CHECK(rel_residual(p12 * p12, p12) < 1e-14);
  CHECK(rel_residual(p21 * p21, p21) < 1e-14);
  CHECK(rel_residual(p12 * rdeg, rdeg) < 1e-13);
}

TEST_CASE("three-leg fusion collapses to a scalar") {
  ChainGeometry g3{3, 2, {}};
  std::mt19937_64 rng(107);
  const Matrix p21 = embed(fusion_projector(kEta, true), {0, 1}, g3);
  const Matrix p12 = embed(fusion_projector(kEta, false), {0, 1}, g3);
  for (int rep = 0; rep < 3; ++rep) {
    const Complex u = random_complex(rng, -1.0, 1.0, -1.0, 1.0);
    const Complex h{kEta, 0.0};
    const Complex scal =
        std::sinh(0.5 * u + 2.0 * h) * std::sinh(0.5 * u - 2.0 * h);
    const Matrix r13 = embed(r_matrix(ModelKind::XXZTrig, u, kEta), {0, 2}, g3);
    const Matrix r23 =
        embed(r_matrix(ModelKind::XXZTrig, u + 4.0 * kEta, kEta), {1, 2}, g3);
    CHECK(rel_residual(p21 * r13 * r23 * p21, scal * p21) < 1e-12);

    const Matrix r31 = embed(r_matrix(ModelKind::XXZTrig, u, kEta), {2, 0}, g3);
    const Matrix r32 =
        embed(r_matrix(ModelKind::XXZTrig, u + 4.0 * kEta, kEta), {2, 1}, g3);
    CHECK(rel_residual(p12 * r31 * r32 * p12, scal * p12) < 1e-12);
  }
}

TEST_CASE("fused reflection matrices produce the boundary scalar products") {
  std::mt19937_64 rng(108);
  const XxzBoundary b = random_sector(rng);
  const Vector psi12 = fusion_singlet(kEta, false);
  const Vector psi21 = fusion_singlet(kEta, true);
  const Matrix id2 = Matrix::Identity(2, 2);
  const Complex h{kEta, 0.0};

  CHECK(std::abs(psi21.dot(psi12) - Complex{-1.0 / std::cosh(2.0 * kEta), 0.0}) <
        1e-14);

  const DerivedBoundary d = derived_boundary(b);
  CHECK(std::abs(std::cosh(d.a1) - (0.5 * d.alpha + d.beta)) < 1e-12);
  CHECK(std::abs(std::cosh(d.a2) - (0.5 * d.alpha - d.beta)) < 1e-12);

  const XxzBoundary bp{b.sp, b.s1p, b.s2p, b.s, b.s1, b.s2};
  const DerivedBoundary dp = derived_boundary(bp);

  for (int rep = 0; rep < 3; ++rep) {
    const Complex u = random_complex(rng, -0.8, 0.8, -0.8, 0.8);

    // reflection side; the matrix element between the unit degenerate vectors
    // carries an extra minus sign relative to the bare scalar
    const Matrix ku = kron(k_matrix_xxz_trig(u, kEta, b), id2);
    const Matrix ku4 =
        kron(id2, k_matrix_xxz_trig(u + 4.0 * kEta, kEta, b));
    const Matrix rs21 = detail::swap_legs(
        r_matrix(ModelKind::XXZTrig, 2.0 * u + 4.0 * kEta, kEta), 2);
    const Complex me = (psi21.adjoint() * (ku * rs21 * ku4) * psi12)(0);
    const Complex f = -2.0 * std::sinh(u + 4.0 * h) / d.alpha * 0.5 *
                      (std::cosh(u) + std::cosh(d.a1)) * 0.5 *
                      (std::cosh(u) + std::cosh(d.a2));
    CHECK(std::abs(me + f) < 1e-12 * std::max(1.0, std::abs(f)));

    // dual side
    auto kbar = [&](Complex w) {
      return k_matrix_sector(ModelKind::XXZTrig, KSide::Dual, w, kEta, b);
    };
    const Matrix mb1 = kron(crossing_m_matrix(ModelKind::XXZTrig, kEta), id2);
    const Matrix kb2 = kron(id2, kbar(u + 4.0 * kEta));
    const Matrix kb1 = kron(kbar(u), id2);
    const Matrix rs12 = r_matrix(ModelKind::XXZTrig, -2.0 * u + 4.0 * kEta, kEta);
    const Complex dme =
        (psi12.adjoint() * (kb2 * mb1 * rs12 * mb1.inverse() * kb1) * psi21)(0);
    const Complex fd = 2.0 * std::sinh(u - 4.0 * h) / dp.alpha * 0.5 *
                       (std::cosh(u) + std::cosh(dp.a1)) * 0.5 *
                       (std::cosh(u) + std::cosh(dp.a2));
    CHECK(std::abs(dme + fd) < 1e-12 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("derived boundary constants obey their defining relations") {
  std::mt19937_64 rng(109);
  for (int rep = 0; rep < 10; ++rep) {
    const XxzBoundary b = random_sector(rng);
    const DerivedBoundary d = derived_boundary(b);
    CHECK(std::abs(d.alpha - 1.0 / (2.0 * b.s1 * b.s2)) < 1e-13);
    CHECK(std::abs(std::cosh(d.a1) + std::cosh(d.a2) - d.alpha) < 1e-12);
    CHECK(std::abs(std::cosh(d.a1) * std::cosh(d.a2) -
                   (-1.0 - d.alpha * std::cosh(2.0 * b.s))) < 1e-12);
  }
}

TEST_CASE("hermitian parameter family") {
  const double eta = 0.85;
  const XxzBoundary b =
      hermitian_xxz_boundary(eta, -0.9, Complex{0.6, 0.45}, 1.3, -1.7, 0.8);
  CHECK(is_hermitian_family(b, eta));
  XxzBoundary off = b;
  off.s2p *= 1.0 + 1e-6;
  CHECK(!is_hermitian_family(off, eta));

  // alpha is real positive here, the second branch point sits on the line
  // Im = pi, and its real part satisfies coth(re/2) = tanh(a2/2)
  const DerivedBoundary d = derived_boundary(b);
  CHECK(d.alpha.imag() == Approx(0.0).margin(1e-14));
  CHECK(d.alpha.real() > 0.0);
  CHECK(d.a2.imag() == Approx(PI));
  CHECK(d.a2p.imag() == Approx(PI));
  const Complex abar2{d.a2.real(), 0.0};
  CHECK(std::abs(1.0 / std::tanh(0.5 * abar2) - std::tanh(0.5 * d.a2)) < 1e-12);
}

TEST_CASE("branch sign selection follows the field context") {
  std::mt19937_64 rng(110);
  const XxzBoundary b = random_sector(rng);
  const DerivedBoundary plain = derived_boundary(b, 1.0);
  CHECK(plain.signs == std::array<int, 4>{1, 1, 1, 1});

  const DerivedBoundary flipped = derived_boundary(b, -1.0);
  const bool flip_primed = plain.a1p.real() < plain.a1.real();
  if (flip_primed) {
    CHECK(flipped.signs == std::array<int, 4>{1, 1, -1, 1});
    CHECK(std::abs(flipped.a1p + plain.a1p) < 1e-14);
    CHECK(std::abs(flipped.a1 - plain.a1) < 1e-14);
  } else {
    CHECK(flipped.signs == std::array<int, 4>{-1, 1, 1, 1});
    CHECK(std::abs(flipped.a1 + plain.a1) < 1e-14);
  }
}
