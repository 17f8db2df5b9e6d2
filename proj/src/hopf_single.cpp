#include "hopfkit/hopf_single.hpp"

#include <cmath>

#include "hopfkit/dispersion.hpp"

namespace hopfkit {

namespace {

cplx nearest_eigenvalue(const CMat4& A, cplx target) {
  const auto e = eigenvalues(A);
  cplx best = e[0];
  for (const cplx& z : e)
    if (std::abs(z - target) < std::abs(best - target)) best = z;
  return best;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

}  // namespace

CrossingSpeed crossing_speed(const Model& m, const CriticalEigenData& crit, double lambda0, double h,
                             double fd_tol) {
  CrossingSpeed s;
  const cplx pairing = crit.normalization;
  s.dz_dlambda = pair2(symbol_matrix_mode_dlambda(m, 1, lambda0) * crit.v0, crit.w0) / pairing;

  const cplx center = kI * crit.kappa0;
  const cplx zp = nearest_eigenvalue(symbol_matrix_mode(m, 1, lambda0 + h), center);
  const cplx zm = nearest_eigenvalue(symbol_matrix_mode(m, 1, lambda0 - h), center);
  s.dz_dlambda_fd = (zp - zm) / (2 * h);

  const double k0 = 2 * kPi / lambda0;
  s.dz_dk = s.dz_dlambda * (-lambda0 * lambda0 / (2 * kPi));
  const cplx kp = nearest_eigenvalue(symbol_matrix(m, k0 + h), center);
  const cplx km = nearest_eigenvalue(symbol_matrix(m, k0 - h), center);
  s.dz_dk_fd = (kp - km) / (2 * h);

  s.rel_diff_lambda = std::abs(s.dz_dlambda) == 0 ? std::abs(s.dz_dlambda_fd) : rel(s.dz_dlambda, s.dz_dlambda_fd);
  s.rel_diff_k = std::abs(s.dz_dk) == 0 ? std::abs(s.dz_dk_fd) : rel(s.dz_dk, s.dz_dk_fd);
  if (s.rel_diff_lambda > fd_tol || s.rel_diff_k > fd_tol)
    throw InternalInconsistency("crossing speed: analytic and finite-difference values disagree");
  return s;
}

BifurcationTerms bifurcation_terms(const Model& m, const CriticalEigenData& crit, double lambda0,
                                   double kappa0) {
  BifurcationTerms t;
  const CVec4& v = crit.v0;
  const CVec4 vb = v.conjugate();
  const CMat4 DQv = eval_DQ<cplx>(v, m.c);
  const CMat4 DQvb = eval_DQ<cplx>(vb, m.c);
  const cplx pairing = crit.normalization;

  const CMat4 R2 = cplx(0, 2 * kappa0) * CMat4::Identity() - symbol_matrix_mode(m, 2, lambda0);
  Eigen::JacobiSVD<CMat4> svd(R2);
  if (svd.singularValues()(3) <= 1e-13 * svd.singularValues()(0))
    throw ResonanceDetected("2iκ₀ is an eigenvalue of the second mode");
  const CVec4 u2 = R2.fullPivLu().solve(CVec4(DQv * v));
  t.second_harmonic = pair2(DQvb * u2, crit.w0) / pairing;

  const CVec4 f0 = DQv * vb;
  t.mean_flow_source_sum = std::abs(f0.sum());
  const CVec4 u0 = mass_zero_solve(-m.DA.cast<cplx>(), f0);
  t.mean_flow = pair2(DQv * u0, crit.w0) / pairing;
  t.d2_phi = -t.second_harmonic + 2.0 * t.mean_flow;
  return t;
}

cplx bifurcation_coefficient(const Model& m, const CriticalEigenData& crit, double lambda0,
                             double kappa0) {
  return bifurcation_terms(m, crit, lambda0, kappa0).d2_phi;
}

const char* to_string(BranchType t) {
  switch (t) {
    case BranchType::supercritical: return "supercritical";
    case BranchType::subcritical: return "subcritical";
    default: return "degenerate";
  }
}

HopfSingleResult classify_branch(cplx z_prime, cplx d2_phi, double speed_tol) {
  if (std::abs(z_prime.real()) <= speed_tol)
    throw NonvanishingSpeedViolation("Re z'(λ₀) vanishes");
  HopfSingleResult r;
  r.z_prime = z_prime;
  r.d2_phi = d2_phi;
  r.lambda_curv = d2_phi.real() / z_prime.real();
  if (std::abs(d2_phi.real()) < 1e-8 * (1 + std::abs(d2_phi)))
    r.branch_type = BranchType::degenerate;
  else
    r.branch_type = r.lambda_curv * z_prime.real() > 0 ? BranchType::supercritical
                                                       : BranchType::subcritical;
  return r;
}

HopfSingleReport analyze_single(const Model& m, double lambda0, double kappa0) {
  HopfSingleReport r;
  r.critical = mode_eigensystem(m, lambda0, kappa0, Normalization::unit_right);
  r.speed = crossing_speed(m, r.critical, lambda0);
  r.terms = bifurcation_terms(m, r.critical, lambda0, kappa0);
  r.result = classify_branch(r.speed.dz_dlambda, r.terms.d2_phi);
  return r;
}

}  // namespace hopfkit
