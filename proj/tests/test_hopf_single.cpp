#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/hopf_single.hpp"
#include "hopfkit/spectral.hpp"
#include "oracles/oracles.hpp"

using namespace hopfkit;

namespace {

struct Setup {
  Model m;
  CrossingResult c;
  CriticalEigenData crit;
};

Setup setup(const Model& m = default_model(ModelKind::nonsymmetric)) {
  const auto c = find_crossing(default_model(ModelKind::nonsymmetric));
  return {m, c, mode_eigensystem(m, c.lambda0, c.kappa0)};
}

}  // namespace

TEST_CASE("crossing speed") {
  const auto s = setup();
  const auto sp = crossing_speed(s.m, s.crit, s.c.lambda0);
  CHECK(sp.dz_dk.real() == doctest::Approx(0.896648).epsilon(1e-3));
  CHECK(sp.rel_diff_lambda < 1e-6);
  CHECK(sp.rel_diff_k < 1e-6);
  // dz/dk and dz/dλ are related by the chain rule through k = 2π/λ.
  CHECK(std::abs(sp.dz_dk - sp.dz_dlambda * (-s.c.lambda0 * s.c.lambda0 / (2 * kPi))) < 1e-12);
  // Closed form of ∂λM̃(1,λ) paired with the eigenvectors.
  const double l = s.c.lambda0;
  const CMat4 d = (8 * kPi * kPi * s.m.epsilon0 / (l * l * l)) * CMat4::Identity() +
                  (2 * kPi / (l * l)) * kI * s.m.U.cast<cplx>();
  CHECK(std::abs(pair2(d * s.crit.v0, s.crit.w0) - sp.dz_dlambda) < 1e-10);
}

TEST_CASE("crossing speed vanishes without transport and diffusion") {
  const auto s = setup();
  Model flat = with_U(s.m, Mat4::Zero());
  flat.epsilon0 = 0;
  const auto sp = crossing_speed(flat, s.crit, s.c.lambda0);
  CHECK(std::abs(sp.dz_dlambda) == 0.0);
}

TEST_CASE("bifurcation coefficient against the quadrature oracle") {
  const auto s = setup();
  const auto t = bifurcation_terms(s.m, s.crit, s.c.lambda0, s.c.kappa0);
  CHECK(t.mean_flow_source_sum < 1e-12);
  CHECK(std::abs(t.d2_phi - (-t.second_harmonic + 2.0 * t.mean_flow)) < 1e-14 * (1 + std::abs(t.d2_phi)));
  const cplx o = oracle::d2phi_quadrature(s.m, s.crit.v0, s.crit.w0, s.c.lambda0, s.c.kappa0);
  CHECK(std::abs(t.d2_phi - o) < 1e-9 * std::abs(o));
}

TEST_CASE("bifurcation coefficient vanishes for c = 0") {
  const auto s = setup(with_c(default_model(ModelKind::nonsymmetric), Vec4::Zero()));
  CHECK(std::abs(bifurcation_coefficient(s.m, s.crit, s.c.lambda0, s.c.kappa0)) == 0.0);
}

TEST_CASE("phase invariance") {
  const auto s = setup();
  const cplx base = bifurcation_coefficient(s.m, s.crit, s.c.lambda0, s.c.kappa0);
  for (double theta : {0.3, 1.7, -2.4, 3.1}) {
    CriticalEigenData r = s.crit;
    const cplx ph = std::polar(1.0, theta);
    r.v0 *= ph;
    r.w0 *= ph;
    CHECK(std::abs(bifurcation_coefficient(s.m, r, s.c.lambda0, s.c.kappa0) - base) < 1e-10 * (1 + std::abs(base)));
  }
}

TEST_CASE("quadratic scaling in c") {
  const auto s = setup();
  const cplx base = bifurcation_coefficient(s.m, s.crit, s.c.lambda0, s.c.kappa0);
  for (double f : {2.0, -1.0, 0.37}) {
    const Model scaled = with_c(s.m, f * s.m.c);
    const cplx d = bifurcation_coefficient(scaled, s.crit, s.c.lambda0, s.c.kappa0);
    CHECK(std::abs(d - f * f * base) < 1e-12 * std::abs(base) * (1 + f * f));
  }
}

TEST_CASE("classification rules") {
  CHECK(classify_branch({0.5, 1.0}, {0.0, 2.0}).branch_type == BranchType::degenerate);
  CHECK_THROWS_AS(classify_branch({0.0, 1.0}, {1.0, 0.0}), NonvanishingSpeedViolation);
  const auto r = classify_branch({0.5, 1.0}, {-2.0, 0.3});
  CHECK(r.lambda_curv == doctest::Approx(-4.0));
  CHECK(r.branch_type == BranchType::subcritical);
  CHECK(classify_branch({-0.5, 1.0}, {-2.0, 0.3}).branch_type == BranchType::subcritical);
  CHECK(classify_branch({-0.5, 1.0}, {2.0, 0.3}).branch_type == BranchType::supercritical);
  CHECK(classify_branch({0.5, 1.0}, {2.0, 0.3}).branch_type == BranchType::supercritical);
}

TEST_CASE("nonsymmetric report is consistent with the oracle sign") {
  const Model m = default_model(ModelKind::nonsymmetric);
  const auto c = find_crossing(m);
  const auto rep = analyze_single(m, c.lambda0, c.kappa0);
  const auto& r = rep.result;
  CHECK(r.lambda_curv == doctest::Approx(r.d2_phi.real() / r.z_prime.real()));
  const cplx o = oracle::d2phi_quadrature(m, rep.critical.v0, rep.critical.w0, c.lambda0, c.kappa0);
  const bool oracle_super = o.real() > 0;
  CHECK(r.branch_type == (oracle_super ? BranchType::supercritical : BranchType::subcritical));

  // Negating Q leaves λ″ unchanged.
  const Model neg = with_c(m, -m.c);
  const auto rn = analyze_single(neg, c.lambda0, c.kappa0).result;
  CHECK(rn.lambda_curv == doctest::Approx(r.lambda_curv).epsilon(1e-12));
}
