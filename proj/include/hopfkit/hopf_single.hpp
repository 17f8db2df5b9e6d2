#pragma once

#include "hopfkit/spectral.hpp"

namespace hopfkit {

struct CrossingSpeed {
  cplx dz_dlambda;      // ⟨∂λM̃(1,λ₀) v₀, w₀⟩₂
  cplx dz_dlambda_fd;   // central difference of the tracked eigenvalue of M̃(1,λ)
  cplx dz_dk;           // dz/dk at k₀ = dz/dλ · (−λ₀²/2π)
  cplx dz_dk_fd;        // central difference of the tracked eigenvalue of M(k)
  double rel_diff_lambda = 0;
  double rel_diff_k = 0;
};

// Raises InternalInconsistency when analytic and finite-difference values
// differ by more than fd_tol relative.
CrossingSpeed crossing_speed(const Model& m, const CriticalEigenData& crit, double lambda0,
                             double h = 1e-6, double fd_tol = 1e-5);

struct BifurcationTerms {
  cplx second_harmonic;  // ⟨DQ(v̄₀)(2iκ₀ − M̃(2,λ₀))⁻¹DQ(v₀)v₀, w₀⟩₂
  cplx mean_flow;        // ⟨DQ(v₀)(−DA)⁻¹DQ(v₀)v̄₀, w₀⟩₂ on the mass-zero subspace
  cplx d2_phi;           // −second_harmonic + 2·mean_flow
  double mean_flow_source_sum = 0;  // |Σ (DQ(v₀)v̄₀)_j|
};

BifurcationTerms bifurcation_terms(const Model& m, const CriticalEigenData& crit, double lambda0,
                                   double kappa0);
cplx bifurcation_coefficient(const Model& m, const CriticalEigenData& crit, double lambda0,
                             double kappa0);

enum class BranchType { supercritical, subcritical, degenerate };
const char* to_string(BranchType t);

struct HopfSingleResult {
  cplx z_prime;       // dz/dλ at λ₀
  cplx d2_phi;
  double lambda_curv = 0;  // λ″(0) = Re D²Φ / Re z′
  BranchType branch_type = BranchType::degenerate;
};

// λ″ and Re z′ with matching signs put the branch on the side where the
// trivial state is unstable: supercritical.
HopfSingleResult classify_branch(cplx z_prime, cplx d2_phi, double speed_tol = 1e-10);

struct HopfSingleReport {
  CriticalEigenData critical;
  CrossingSpeed speed;
  BifurcationTerms terms;
  HopfSingleResult result;
};

HopfSingleReport analyze_single(const Model& m, double lambda0, double kappa0);

}  // namespace hopfkit
