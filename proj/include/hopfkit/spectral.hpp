#pragma once

#include <optional>
#include <vector>

#include "hopfkit/model.hpp"

namespace hopfkit {

enum class Normalization {
  unit_right,    // ‖v₀‖ = 1, ⟨v₀,w₀⟩₂ = 1
  unit_adjoint,  // ‖w₀‖ = 1, ⟨v₀,w₀⟩₂ = 1/(2π)
};

struct CriticalEigenData {
  double lambda0 = 0, kappa0 = 0;
  CVec4 v0, w0;
  cplx normalization;            // ⟨v₀,w₀⟩₂
  CMat4 M0;                      // −M̃(1,λ₀) + iκ₀
  std::array<cplx, 4> M0_eigenvalues;
  double kernel_gap = 0;         // second-smallest singular value of M0
  double right_residual = 0;     // |M0 v₀|
  double left_residual = 0;      // |M0ᴴ w₀|
};

// Raises SimplicityViolation when the kernel of M0 is not one-dimensional.
CriticalEigenData mode_eigensystem(const Model& m, double lambda0, double kappa0,
                                   Normalization norm = Normalization::unit_right,
                                   double kernel_tol = 1e-8);

// x with B x = f and Σx = 0. B is either invertible or singular with left
// kernel b = (1,1,1,1), in which case Σf = 0 is required.
CVec4 mass_zero_solve(const CMat4& B, const CVec4& f, double tol = 1e-10);

struct NonresonanceEntry {
  int n;
  double distance;  // min_j |z̃_j(n,λ₀) − inκ₀|
  int nearest;      // index of the nearest eigenvalue
};

struct NonresonanceReport {
  int n_max = 0;
  std::vector<NonresonanceEntry> entries;  // n ∈ [−n_max, n_max] \ {−1, 1}
  double min_distance = 0;
  // Zero mode: the 5×5 system A v = c b, Σv = 0, and DA restricted to the
  // mass-zero subspace.
  double zero_mode_sigma_min = 0;        // smallest singular value of [[A, −b],[bᵗ, 0]]
  double zero_mode_restricted_sigma = 0;  // smallest singular value of DA on {Σv = 0}
  bool zero_mode_trivial = false;
  bool pass = false;
};

NonresonanceReport nonresonance_report(const Model& m, double lambda0, double kappa0,
                                       int n_max = 64, double tol = 1e-8);

struct ResolventDecayReport {
  int m0 = 0;                 // bound asserted for |m| > m0
  int m_max = 0;
  double bound_constant = 0;  // 3λ₀²/(4π²ε)
  double empirical_constant = 0;  // max ‖inverse‖∞·m² over the checked range
  int violations = 0;
  bool pass = false;
};

// Bound: ‖(−M̃(m,λ₀)+iκ₀)⁻¹‖∞ ≤ 3λ₀²/(4π²ε m²) for m0 < |m| ≤ m_max.
// m0 comes from the Neumann-series argument: for |m| > m0 the perturbation
// part has ∞-norm at most a third of the diffusion part.
ResolventDecayReport resolvent_decay_check(const Model& m, double lambda0, double kappa0,
                                           int m_max = 200);
CMat4 critical_resolvent(const Model& m, int mode, double lambda0, double kappa0);

struct SemisimplicityReport {
  std::array<cplx, 4> eig_plus, eig_minus;  // spectra of M₁, M₋₁
  double margin = 0;                        // min pairwise eigenvalue distance
  double plus_kernel_residual = 0;          // |M₁ v₀|
  double minus_kernel_residual = 0;         // |M₋₁ P v₀|
  double plus_kernel_gap = 0, minus_kernel_gap = 0;
  bool pass = false;
};

// M_{±1} = ε₀k₀² ± ik₀U + DA − iμ₀ in the paper's L-form.
SemisimplicityReport semisimplicity_check(const Model& m, double lambda0, double kappa0,
                                          double margin_tol = 1e-6);

}  // namespace hopfkit
