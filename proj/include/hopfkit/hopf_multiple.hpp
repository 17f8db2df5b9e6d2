#pragma once

#include <array>
#include <map>
#include <vector>

#include "hopfkit/spectral.hpp"

namespace hopfkit {

struct KernelBases {
  double k0 = 0, lambda0 = 0, mu0 = 0;  // μ₀ = −κ₀
  CVec4 v0, w0;
  ModeField phi1, phi2, phi1s, phi2s;
};

// φ₁ = e^{i2πx}v₀, φ₂ = e^{−i2πx}Pv₀, duals from w₀, Pw₀; ‖w₀‖ = 1 and
// ⟨v₀,w₀⟩₂ = 1/(2π).
KernelBases kernel_bases(const Model& m, double lambda0, double kappa0);

ModeField conj_field(const ModeField& f);
ModeField g2_field(const ModeField& f, const ModeField& g, const Vec4& c);
// ∫₀¹ f·conj(g) dx = Σₙ f̂(n)·conj(ĝ(n)), compensated.
cplx pair_fields(const ModeField& f, const ModeField& g);
// B = −(1/λ₀²)U∂ₓ on mode n: −(i2πn/λ₀²)U.
ModeField apply_B(const Model& m, double lambda0, const ModeField& f);

struct LinearCoefficient {
  cplx a;         // −ik₀²⟨Uv₀,w₀⟩₂
  cplx b11, b22;  // 2π(Bφ₁,φ₁*), 2π(Bφ₂,φ₂*)
};

// Raises SymmetryViolation when b11 and b22 differ by more than tol.
LinearCoefficient linear_coefficient_a(const Model& m, const KernelBases& kb, double tol = 1e-10);

// Solves (L(n) − σ)x = f with L(n) = ε₀n²k₀² + ink₀U + DA = −M̃(n,λ₀).
// n = 0, σ = 0 goes through the mass-zero solve.
CVec4 resolvent_apply(const Model& m, double lambda0, int n, cplx sigma, const CVec4& f,
                      double* residual = nullptr);
ModeField resolvent_apply(const Model& m, double lambda0, cplx sigma, const ModeField& f);

// Second-harmonic resolvent: plus is (L + 2iμ₀)⁻¹, minus is (L − 2iμ₀)⁻¹.
enum class HarmonicShift { plus, minus };

// Coefficients per equation l of h₁²h̄₁, h₁h₂h̄₁, h₁h₂h̄₂, h₂²h̄₂.
struct MonomialCoeffs {
  std::array<cplx, 4> comp1{}, comp2{};
};

struct Tensor {
  std::map<std::array<int, 4>, cplx> a;  // key (l, i, j, k), indices in {1, 2}
  MonomialCoeffs monomials;
  int vanishing_pairings = 0;  // pairings with no common Fourier mode
  double max_resolvent_residual = 0;
};

// a^l_ijk = 4π(G(L⁻¹G(φⱼ,φ̄ₖ),φᵢ),φₗ*) + 2π(G((L ± 2iμ₀)⁻¹G(φⱼ,φᵢ),φ̄ₖ),φₗ*).
Tensor third_order_tensor(const Model& m, const KernelBases& kb,
                          HarmonicShift shift = HarmonicShift::plus);

enum class RealForm {
  reference,  // Υ and P₀B with the y-columns zeroed
  literal,    // full real representation of −i and a
};

struct RealSystem {
  Mat4 Upsilon, P0B;
  MonomialCoeffs coeffs;
  Vec4 E3(const Vec4& v) const;
  Mat4 dE3(const Vec4& v) const;
  // Υv + ρP₀Bv − E⁽³⁾(v) at v = (x1, y1, x2, 0); u = (x1, y1, x2, ρ).
  Vec4 residual(const Vec4& u) const;
  Mat4 jacobian(const Vec4& u) const;
};

RealSystem assemble_real_system(cplx a, const MonomialCoeffs& coeffs,
                                RealForm form = RealForm::reference);

struct BranchSolution {
  Vec4 u;  // (x1, y1, x2, ρ)
  double residual = 0;
};

struct BranchSearch {
  std::vector<BranchSolution> roots;  // nontrivial, deduplicated, x1 ≥ 0
  int selected = -1;                  // x1 = x2, y1 = 0 if present, else the first root
  int starts = 0;
  const BranchSolution& best() const;
};

// Raises NoNontrivialBranch when every start lands on v = 0 or fails.
BranchSearch solve_branch(const RealSystem& sys);

// det[P₀B·v⁰ | Υ̂ − DÊ⁽³⁾(v⁰)] with the fourth column dropped. include_rho
// adds ρP₀B to the second block.
double existence_determinant(const RealSystem& sys, const Vec4& root, bool include_rho = false);

struct ReducedSystem {
  KernelBases bases;
  LinearCoefficient linear;
  Tensor tensor;
  RealSystem system;
  std::optional<BranchSearch> branch;
  std::optional<double> determinant;
};

ReducedSystem analyze_multiple(const Model& m, double lambda0, double kappa0,
                               HarmonicShift shift = HarmonicShift::plus,
                               RealForm form = RealForm::reference);

}  // namespace hopfkit
