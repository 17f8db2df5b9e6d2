#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopfkit/types.hpp"

namespace hopfkit {

enum class ModelKind { nonsymmetric, symmetric };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct Model {
  ModelKind kind = ModelKind::nonsymmetric;
  double delta = 1.0;
  double epsilon0 = 0.1;
  Vec4 c = Vec4::Ones();
  Mat4 D, U, A0, M, A, DA;
  // Reference wavelength for the symmetric rule ε(λ) = ε₀λ²/λ_ref².
  // Unset means ε is constant.
  std::optional<double> lambda_ref;

  double epsilon(double lambda) const;
};

Mat4 matrix_D();
Mat4 matrix_U();
Mat4 matrix_A0();
Mat4 matrix_Mns();
Mat4 matrix_Ms();
Mat4 matrix_P();

Model build_model(ModelKind kind, double delta, double epsilon0, const Vec4& c);
Model default_model(ModelKind kind);

// Copies with one ingredient replaced; DA is recomputed.
Model with_A(Model m, const Mat4& A);
Model with_U(Model m, const Mat4& U);
Model with_c(Model m, const Vec4& c);
Model with_lambda_ref(Model m, double lambda_ref);

template <class S>
Eigen::Matrix<S, 4, 1> eval_Q(const Eigen::Matrix<S, 4, 1>& y, const Vec4& c) {
  const S q1 = c(0) * y(0) * y(0), q2 = c(1) * y(1) * y(1);
  const S q3 = c(2) * y(2) * y(2), q4 = c(3) * y(3) * y(3);
  return {q4 - q1, q1 - q2, q2 - q3, q3 - q4};
}

template <class S>
Eigen::Matrix<S, 4, 4> eval_DQ(const Eigen::Matrix<S, 4, 1>& y, const Vec4& c) {
  Eigen::Matrix<S, 4, 4> J = Eigen::Matrix<S, 4, 4>::Zero();
  for (int j = 0; j < 4; ++j) {
    const S d = 2.0 * c(j) * y(j);
    J(j, j) = -d;
    J((j + 1) % 4, j) = d;
  }
  return J;
}

template <class S>
Eigen::Matrix<S, 4, 1> eval_G2(const Eigen::Matrix<S, 4, 1>& u, const Eigen::Matrix<S, 4, 1>& v,
                               const Vec4& c) {
  const S p1 = c(0) * u(0) * v(0), p2 = c(1) * u(1) * v(1);
  const S p3 = c(2) * u(2) * v(2), p4 = c(3) * u(3) * v(3);
  return {p4 - p1, p1 - p2, p2 - p3, p3 - p4};
}

struct StructureReport {
  std::vector<Check> checks;
  bool pass() const;
};

StructureReport check_mass_structure(const Model& m, int samples = 16, unsigned seed = 7);

// The six linear reflection conditions on A, as residuals.
std::vector<double> reflection_residuals(const Mat4& A);
bool reflection_conditions_hold(const Mat4& A, double tol = 1e-12);

struct ReflectionReport {
  std::vector<double> residuals;
  bool conditions_hold = false;
  bool coefficients_symmetric = false;  // c1 = c3, c2 = c4
  // Max |W F(W y) − F(y)| over random grid functions; only evaluated when
  // the conditions hold.
  std::optional<double> commutation_residual;
  bool satisfied() const;
};

ReflectionReport check_reflection(const Model& m, unsigned seed = 11);

// Mode representation: coefficient of e^{i2πnx} per n.
using ModeField = std::map<int, CVec4>;
// Grid representation: samples at x_j = j/N, j = 0..N−1.
using GridField = std::vector<CVec4>;

ModeField apply_W(const ModeField& f);
GridField apply_W(const GridField& g);

}  // namespace hopfkit
