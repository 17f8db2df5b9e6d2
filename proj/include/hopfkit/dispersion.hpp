#pragma once

#include <array>
#include <vector>

#include "hopfkit/model.hpp"

namespace hopfkit {

// M(k) = −ikU − DA − εk²·Id with ε = ε₀.
CMat4 symbol_matrix(const Model& m, double k);
// M̃(n,λ) = M(2πn/λ) with ε = ε(λ).
CMat4 symbol_matrix_mode(const Model& m, int n, double lambda);
// ∂M̃(n,λ)/∂λ.
CMat4 symbol_matrix_mode_dlambda(const Model& m, int n, double lambda);

std::array<cplx, 4> eigenvalues(const CMat4& A);

std::vector<double> uniform_grid(double a, double b, double h);

struct DispersionScan {
  std::vector<double> k;
  std::vector<std::array<cplx, 4>> z;     // z[i][j] = branch j at k[i]
  std::vector<std::array<int, 4>> perm;   // raw eigenvalue index assigned to each branch
  std::vector<bool> ambiguous;            // a competing pairing was within the tie tolerance
};

DispersionScan eigen_branches(const Model& m, const std::vector<double>& k_grid);
DispersionScan eigen_branches(const Model& m);  // k ∈ [−12, 12], step 0.01

enum class PatternClass { no_patterns, stationary, oscillatory };
const char* to_string(PatternClass c);

struct GrowthReport {
  std::vector<double> omega;
  PatternClass classification = PatternClass::no_patterns;
  bool inconclusive = false;
  std::vector<double> k_max;     // global maximizers of Ω
  std::vector<cplx> z_at_max;    // maximizing branch value at each k_max
  double omega_max = 0;
};

GrowthReport growth_rate_and_classify(const DispersionScan& scan);

struct CrossingResult {
  double k0 = 0;
  double kappa0 = 0;
  double lambda0 = 0;
  int branch = -1;
};

std::vector<CrossingResult> all_crossings(const Model& m, const DispersionScan& scan);
// Largest |κ|; ties go to κ < 0, then to k > 0.
CrossingResult find_crossing(const Model& m, const DispersionScan& scan);
CrossingResult find_crossing(const Model& m);

bool turing_stationary_check(const Eigen::Matrix2d& A, double D1, double D2);

}  // namespace hopfkit
