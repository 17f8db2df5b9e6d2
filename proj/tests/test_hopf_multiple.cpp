#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/hopf_multiple.hpp"
#include "hopfkit/reference.hpp"
#include "oracles/oracles.hpp"

using namespace hopfkit;

namespace {

struct Setup {
  Model m;
  CrossingResult c;
  KernelBases kb;
};

const Setup& setup() {
  static const Setup s = [] {
    Model m = default_model(ModelKind::symmetric);
    const auto c = find_crossing(m);
    m = with_lambda_ref(m, c.lambda0);
    return Setup{m, c, kernel_bases(m, c.lambda0, c.kappa0)};
  }();
  return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kernel bases") {
  const auto& s = setup();
  CHECK(s.kb.mu0 == doctest::Approx(-s.c.kappa0));
  CHECK(s.kb.mu0 > 0);
  CHECK(std::abs(pair_fields(s.kb.phi1, s.kb.phi1s) - 1.0 / (2 * kPi)) < 1e-13);
  CHECK(std::abs(pair_fields(s.kb.phi2, s.kb.phi2s) - 1.0 / (2 * kPi)) < 1e-13);
  CHECK(pair_fields(s.kb.phi1, s.kb.phi2s) == cplx(0));
  CHECK(pair_fields(s.kb.phi2, s.kb.phi1s) == cplx(0));
  const ModeField w = apply_W(s.kb.phi1);
  REQUIRE(w.size() == s.kb.phi2.size());
  for (const auto& [n, v] : s.kb.phi2) CHECK((w.at(n) - v).norm() < 1e-15);
}

TEST_CASE("linear coefficient") {
  const auto& s = setup();
  const auto lc = linear_coefficient_a(s.m, s.kb);
  CHECK(lc.a.real() == doctest::Approx(reference::a.real()).epsilon(1e-3));
  CHECK(lc.a.imag() == doctest::Approx(reference::a.imag()).epsilon(1e-3));
  CHECK(std::abs(lc.b11 - lc.b22) < 1e-10);
  CHECK(std::abs(lc.a - lc.b11) < 1e-12);
  CHECK(std::abs(linear_coefficient_a(with_U(s.m, Mat4::Zero()), s.kb).a) == 0.0);
}

TEST_CASE("reflection symmetry is required for the linear coefficient") {
  const auto& s = setup();
  Mat4 U = s.m.U;
  U(0, 0) += 0.5;
  CHECK_THROWS_AS(linear_coefficient_a(with_U(s.m, U), s.kb), SymmetryViolation);
}

TEST_CASE("resolvent") {
  const auto& s = setup();
  std::mt19937 g(4);
  std::uniform_real_distribution<double> u(-1, 1);
  CVec4 f;
  for (int i = 0; i < 4; ++i) f(i) = {u(g), u(g)};
  const cplx sigma = cplx(0, -2 * s.kb.mu0);
  double res = 1;
  const CVec4 x = resolvent_apply(s.m, s.c.lambda0, 2, sigma, f, &res);
  CHECK(res < 1e-10);
  const CMat4 L2 = -symbol_matrix_mode(s.m, 2, s.c.lambda0);
  CHECK(((L2 - sigma * CMat4::Identity()) * x - f).norm() < 1e-10);

  const CVec4 g2 = eval_G2<cplx>(s.kb.v0, s.kb.v0.conjugate(), s.m.c);
  CHECK(std::abs(g2.sum()) < 1e-15);
  const CVec4 y = resolvent_apply(s.m, s.c.lambda0, 0, 0.0, g2, &res);
  CHECK((s.m.DA.cast<cplx>() * y - g2).norm() < 1e-10);
  CHECK(std::abs(y.sum()) < 1e-12);
}

TEST_CASE("third-order tensor") {
  const auto& s = setup();
  const auto t = third_order_tensor(s.m, s.kb);
  CHECK(t.a.size() == 16);
  CHECK(t.max_resolvent_residual < 1e-10);
  CHECK(t.vanishing_pairings > 0);
  const auto& ref = reference::e3_coefficients();
  CHECK(rel(t.monomials.comp1[0], ref.comp1[0]) < 1e-2);
  CHECK(rel(t.monomials.comp1[2], ref.comp1[2]) < 1e-2);
  // The mixed monomials h₁h₂h̄₁ and h₂²h̄₂ carry net mode −1 in the first
  // equation, orthogonal to φ₁*, so they vanish identically.
  CHECK(t.monomials.comp1[1] == cplx(0));
  CHECK(t.monomials.comp1[3] == cplx(0));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(t.monomials.comp2[i] - t.monomials.comp1[3 - i]) < 1e-9 * (1 + std::abs(t.monomials.comp1[3 - i])));
}

TEST_CASE("harmonic shift choice matters") {
  const auto& s = setup();
  const auto plus = third_order_tensor(s.m, s.kb, HarmonicShift::plus);
  const auto minus = third_order_tensor(s.m, s.kb, HarmonicShift::minus);
  CHECK(std::abs(plus.monomials.comp1[0] - minus.monomials.comp1[0]) > 1.0);
  CHECK(rel(minus.monomials.comp1[0], cplx(223.3, 946.1)) < 1e-3);
}

TEST_CASE("real system layout") {
  const auto& ref = reference::e3_coefficients();
  const auto sys = assemble_real_system(reference::a, ref);
  Mat4 Ups = Mat4::Zero();
  Ups(1, 0) = -1;
  Ups(3, 2) = -1;
  CHECK((sys.Upsilon - Ups).norm() == 0.0);
  Mat4 P0B = Mat4::Zero();
  P0B(0, 0) = P0B(2, 2) = reference::a.real();
  P0B(1, 0) = P0B(3, 2) = reference::a.imag();
  CHECK((sys.P0B - P0B).norm() == 0.0);
  CHECK(sys.E3(Vec4::Zero()).norm() == 0.0);

  const auto lit = assemble_real_system(reference::a, ref, RealForm::literal);
  CHECK(lit.Upsilon(0, 1) == 1.0);
  CHECK(lit.P0B(0, 1) == doctest::Approx(-reference::a.imag()));

  std::mt19937 g(2);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int k = 0; k < 10; ++k) {
    const Vec4 v(u(g), u(g), u(g), u(g));
    CHECK((sys.dE3(v) - oracle::fd_jacobian(sys, v)).norm() < 1e-8);
    // v = 0 solves the system for every ρ.
    CHECK(sys.residual(Vec4(0, 0, 0, 30 * u(g))).norm() == 0.0);
  }
}

TEST_CASE("branch from the reference coefficients") {
  const auto sys = assemble_real_system(reference::a, reference::e3_coefficients());
  const auto b = solve_branch(sys);
  const auto& r = b.best();
  CHECK(r.residual < 1e-12);
  CHECK(sys.residual(r.u).norm() < 1e-12);
  CHECK(r.u(0) == doctest::Approx(reference::x1).epsilon(1e-2));
  CHECK(r.u(2) == doctest::Approx(reference::x2).epsilon(1e-2));
  CHECK(std::abs(r.u(1)) < 1e-10);
  CHECK(r.u(3) == doctest::Approx(reference::rho).epsilon(1e-2));
  const double det = existence_determinant(sys, r.u);
  CHECK(det > reference::determinant / 10);
  CHECK(det < reference::determinant * 10);
  CHECK(existence_determinant(sys, Vec4(0, 0, 0, r.u(3))) == 0.0);

  // Re-running is deterministic.
  const auto again = solve_branch(sys);
  CHECK(again.roots.size() == b.roots.size());
  CHECK((again.best().u - r.u).norm() == 0.0);
  for (std::size_t i = 0; i < b.roots.size(); ++i)
    for (std::size_t j = i + 1; j < b.roots.size(); ++j)
      CHECK((b.roots[i].u - b.roots[j].u).norm() >= 1e-8);
}

TEST_CASE("computed system yields nontrivial roots") {
  const auto& s = setup();
  const auto r = analyze_multiple(s.m, s.c.lambda0, s.c.kappa0);
  REQUIRE(r.branch);
  for (const auto& root : r.branch->roots) {
    CHECK(root.residual < 1e-12);
    CHECK(root.u.head<3>().norm() > 0);
  }
  REQUIRE(r.determinant);
  CHECK(std::isfinite(*r.determinant));
}
