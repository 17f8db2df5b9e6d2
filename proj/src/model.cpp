#include "hopfkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hopfkit {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::symmetric ? "symmetric" : "nonsymmetric";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "nonsymmetric") return ModelKind::nonsymmetric;
  if (name == "symmetric") return ModelKind::symmetric;
  throw DomainError("unknown model kind: " + name);
}

double Model::epsilon(double lambda) const {
  if (kind == ModelKind::symmetric && lambda_ref) {
    const double r = lambda / *lambda_ref;
    return epsilon0 * r * r;
  }
  return epsilon0;
}

Mat4 matrix_D() {
  Mat4 D;
  D << 1, 0, 0, -1,
      -1, 1, 0, 0,
      0, -1, 1, 0,
      0, 0, -1, 1;
  return D;
}

Mat4 matrix_U() { return Vec4(2, 1, -2, -1).asDiagonal(); }

Mat4 matrix_A0() {
  Mat4 A;
  A << 0, -1, 0, 0,
      0, -0.5, 0, 0,
      0, 0, 0, -1,
      0, 0, 0, -0.5;
  return A;
}

Mat4 matrix_Mns() {
  Mat4 M;
  M << 0, 1, 1, 0,
      0, 0.5, 0, 0,
      1, 0, 0, 2,
      0, 0, 0, -0.5;
  return M;
}

Mat4 matrix_Ms() {
  Mat4 M;
  M << 1, 0, 1.1, 1,
      0, 0, 0, 0,
      1.1, 1, 1, 0,
      0, 0, 0, 0;
  return M;
}

Mat4 matrix_P() {
  Mat4 P = Mat4::Zero();
  P(0, 2) = P(2, 0) = P(1, 3) = P(3, 1) = 1;
  return P;
}

Model build_model(ModelKind kind, double delta, double epsilon0, const Vec4& c) {
  if (!(epsilon0 > 0)) throw DomainError("epsilon0 must be positive");
  if (!(delta >= 0)) throw DomainError("delta must be nonnegative");
  if (!c.allFinite()) throw DomainError("nonlinearity coefficients must be finite");
  Model m;
  m.kind = kind;
  m.delta = delta;
  m.epsilon0 = epsilon0;
  m.c = c;
  m.D = matrix_D();
  m.U = matrix_U();
  m.A0 = matrix_A0();
  m.M = kind == ModelKind::symmetric ? matrix_Ms() : matrix_Mns();
  m.A = m.A0 + delta * m.M;
  m.DA = m.D * m.A;
  return m;
}

Model default_model(ModelKind kind) {
  if (kind == ModelKind::symmetric) return build_model(kind, 0.001, 0.001, Vec4(1, 0, 1, 0));
  return build_model(kind, 1.0, 0.1, Vec4::Ones());
}

Model with_A(Model m, const Mat4& A) {
  m.A = A;
  m.DA = m.D * A;
  return m;
}

Model with_U(Model m, const Mat4& U) {
  m.U = U;
  return m;
}

Model with_c(Model m, const Vec4& c) {
  m.c = c;
  return m;
}

Model with_lambda_ref(Model m, double lambda_ref) {
  if (lambda_ref == 0.0) throw DomainError("reference wavelength must be nonzero");
  m.lambda_ref = lambda_ref;
  return m;
}

bool StructureReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

StructureReport check_mass_structure(const Model& m, int samples, unsigned seed) {
  constexpr double tol = 1e-12;
  StructureReport r;
  const Vec4 b = Vec4::Ones();
  const double bDA = (b.transpose() * m.DA).cwiseAbs().maxCoeff();
  r.checks.push_back({"b^T DA = 0", bDA < tol, bDA, tol});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double qsum = 0;
  for (int s = 0; s < samples; ++s) {
    CVec4 y;
    for (int j = 0; j < 4; ++j) y(j) = {g(rng), g(rng)};
    qsum = std::max(qsum, std::abs(eval_Q(y, m.c).sum()));
  }
  r.checks.push_back({"b^T Q(y) = 0", qsum < tol, qsum, tol});

  const double det = m.DA.determinant();
  r.checks.push_back({"det(DA) = 0", std::abs(det) < tol, std::abs(det), tol});
  return r;
}

std::vector<double> reflection_residuals(const Mat4& A) {
  auto a = [&](int i, int j) { return A(i - 1, j - 1); };
  return {
      (a(1, 1) - a(4, 1)) - (a(3, 3) - a(2, 3)),
      (a(1, 2) - a(4, 2)) - (a(3, 4) - a(2, 4)),
      (a(1, 3) - a(4, 3)) - (a(3, 1) - a(2, 1)),
      (a(1, 4) - a(4, 4)) - (a(3, 2) - a(2, 2)),
      (a(2, 1) + a(2, 3)) - (a(4, 1) + a(4, 3)),
      (a(2, 2) + a(2, 4)) - (a(4, 2) + a(4, 4)),
  };
}

bool reflection_conditions_hold(const Mat4& A, double tol) {
  const auto r = reflection_residuals(A);
  return std::all_of(r.begin(), r.end(), [&](double x) { return std::abs(x) <= tol; });
}

bool ReflectionReport::satisfied() const {
  return conditions_hold && coefficients_symmetric && commutation_residual &&
         *commutation_residual < 1e-10;
}

namespace {

// F(y) on a trigonometric polynomial, exact: linear part per mode and Q through
// a direct transform on a grid fine enough to hold the quadratic products.
ModeField apply_F(const Model& m, const ModeField& y, double lambda) {
  int kmax = 0;
  for (const auto& [n, _] : y) kmax = std::max(kmax, std::abs(n));
  const int N = 4 * kmax + 1;
  GridField g(N, CVec4::Zero());
  for (int j = 0; j < N; ++j)
    for (const auto& [n, v] : y) g[j] += std::exp(kI * (2 * kPi * n * j / N)) * v;
  ModeField out;
  for (int n = -2 * kmax; n <= 2 * kmax; ++n) {
    CVec4 acc = CVec4::Zero();
    for (int j = 0; j < N; ++j) acc += std::exp(-kI * (2 * kPi * n * j / N)) * eval_Q(g[j], m.c);
    out[n] = acc / double(N);
  }
  const double eps = m.epsilon(lambda);
  for (const auto& [n, v] : y) {
    const double k = 2 * kPi * n / lambda;
    const CMat4 L = -kI * k * m.U.cast<cplx>() - m.DA.cast<cplx>() -
                    cplx(eps * k * k) * CMat4::Identity();
    out[n] += L * v;
  }
  return out;
}

}  // namespace

ReflectionReport check_reflection(const Model& m, unsigned seed) {
  ReflectionReport r;
  r.residuals = reflection_residuals(m.A);
  r.conditions_hold = reflection_conditions_hold(m.A);
  r.coefficients_symmetric = m.c(0) == m.c(2) && m.c(1) == m.c(3);
  if (!r.conditions_hold) return r;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int trial = 0; trial < 4; ++trial) {
    ModeField y;
    for (int n = -3; n <= 3; ++n) {
      CVec4 v;
      for (int j = 0; j < 4; ++j) v(j) = {g(rng), g(rng)};
      y[n] = v;
    }
    const double lambda = 0.5 + std::abs(g(rng));
    const ModeField lhs = apply_W(apply_F(m, apply_W(y), lambda));
    const ModeField rhs = apply_F(m, y, lambda);
    for (const auto& [n, v] : rhs) {
      const auto it = lhs.find(n);
      const CVec4 d = it == lhs.end() ? v : CVec4(it->second - v);
      worst = std::max(worst, d.cwiseAbs().maxCoeff() / (1 + v.cwiseAbs().maxCoeff()));
    }
  }
  r.commutation_residual = worst;
  return r;
}

ModeField apply_W(const ModeField& f) {
  const Mat4 P = matrix_P();
  ModeField out;
  for (const auto& [n, v] : f) out[-n] = P.cast<cplx>() * v;
  return out;
}

GridField apply_W(const GridField& g) {
  const Mat4 P = matrix_P();
  const std::size_t N = g.size();
  GridField out(N);
  for (std::size_t j = 0; j < N; ++j) out[j] = P.cast<cplx>() * g[(N - j) % N];
  return out;
}

}  // namespace hopfkit
