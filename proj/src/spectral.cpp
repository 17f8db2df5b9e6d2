#include "hopfkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/parallel.hpp"

namespace hopfkit {

namespace {

// Rotate so the largest-modulus entry is real and positive.
CVec4 fix_phase(const CVec4& v) {
  int j = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(v(i)) > std::abs(v(j)) * (1 + 1e-12)) j = i;
  return v * (std::abs(v(j)) / v(j));
}

double inf_norm(const CMat4& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

CriticalEigenData mode_eigensystem(const Model& m, double lambda0, double kappa0, Normalization norm,
                                   double kernel_tol) {
  CriticalEigenData d;
  d.lambda0 = lambda0;
  d.kappa0 = kappa0;
  d.M0 = -symbol_matrix_mode(m, 1, lambda0) + kI * kappa0 * CMat4::Identity();
  d.M0_eigenvalues = eigenvalues(d.M0);

  Eigen::JacobiSVD<CMat4> svd(d.M0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  d.kernel_gap = s(2);
  if (s(3) > kernel_tol * scale || s(2) <= kernel_tol * scale)
    throw SimplicityViolation("kernel of M0 is not one-dimensional");

  CVec4 v = fix_phase(svd.matrixV().col(3));
  CVec4 w = fix_phase(svd.matrixU().col(3));
  const cplx p = pair2(v, w);
  if (std::abs(p) < 1e-12) throw DegeneratePairing("<v0, w0> vanishes");
  if (norm == Normalization::unit_right) {
    w /= std::conj(p);
  } else {
    v /= 2 * kPi * p;
  }
  d.v0 = v;
  d.w0 = w;
  d.normalization = pair2(v, w);
  d.right_residual = (d.M0 * v).norm() / v.norm();
  d.left_residual = (d.M0.adjoint() * w).norm() / w.norm();
  return d;
}

CVec4 mass_zero_solve(const CMat4& B, const CVec4& f, double tol) {
  const CVec4 b = CVec4::Ones();
  const double scale = std::max(1.0, inf_norm(B));
  const double left = (b.transpose() * B).cwiseAbs().maxCoeff();
  if (left <= tol * scale) {
    if (std::abs(f.sum()) > tol * (1 + f.cwiseAbs().maxCoeff()))
      throw ConstraintViolation("mass_zero_solve: right-hand side has nonzero component sum");
    const CMat4 K = B + b * b.transpose();
    Eigen::JacobiSVD<CMat4> svd(K);
    if (svd.singularValues()(3) <= tol * svd.singularValues()(0))
      throw DegeneracyError("mass_zero_solve: mass-zero kernel is nontrivial");
    CVec4 x = K.fullPivLu().solve(f);
    x -= CVec4::Constant(x.sum() / 4.0);  // remove rounding drift off the subspace
    return x;
  }
  Eigen::JacobiSVD<CMat4> svd(B);
  if (svd.singularValues()(3) <= tol * svd.singularValues()(0))
    throw DegeneracyError("mass_zero_solve: matrix is singular without the mass structure");
  return B.fullPivLu().solve(f);
}

NonresonanceReport nonresonance_report(const Model& m, double lambda0, double kappa0, int n_max,
                                       double tol) {
  if (n_max < 2) throw DomainError("nonresonance_report: n_max must be at least 2");
  NonresonanceReport r;
  r.n_max = n_max;
  std::vector<int> ns;
  for (int n = -n_max; n <= n_max; ++n)
    if (n != -1 && n != 0 && n != 1) ns.push_back(n);
  r.entries.resize(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    const int n = ns[i];
    const auto e = eigenvalues(symbol_matrix_mode(m, n, lambda0));
    const cplx target = kI * double(n) * kappa0;
    NonresonanceEntry en{n, std::numeric_limits<double>::infinity(), -1};
    for (int j = 0; j < 4; ++j)
      if (std::abs(e[j] - target) < en.distance) en = {n, std::abs(e[j] - target), j};
    r.entries[i] = en;
  });
  r.min_distance = std::numeric_limits<double>::infinity();
  for (const auto& e : r.entries) r.min_distance = std::min(r.min_distance, e.distance);

  Eigen::Matrix<double, 5, 5> K = Eigen::Matrix<double, 5, 5>::Zero();
  K.topLeftCorner<4, 4>() = m.A;
  K.block<4, 1>(0, 4) = -Vec4::Ones();
  K.block<1, 4>(4, 0) = Vec4::Ones().transpose();
  r.zero_mode_sigma_min = Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>>(K).singularValues()(4);

  // Orthonormal basis of {Σv = 0}.
  Eigen::Matrix<double, 4, 3> Q;
  Q << 1, 1, 1,
      -1, 1, 1,
      0, -2, 1,
      0, 0, -3;
  for (int j = 0; j < 3; ++j) Q.col(j).normalize();
  const Eigen::Matrix<double, 4, 3> R = m.DA * Q;
  r.zero_mode_restricted_sigma = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>>(R).singularValues()(2);
  r.zero_mode_trivial = r.zero_mode_sigma_min > tol && r.zero_mode_restricted_sigma > tol;
  r.pass = r.min_distance > tol && r.zero_mode_trivial;
  return r;
}

CMat4 critical_resolvent(const Model& m, int mode, double lambda0, double kappa0) {
  if (mode == 1) throw ResonanceDetected("mode 1 is singular by definition of the crossing");
  const CMat4 B = -symbol_matrix_mode(m, mode, lambda0) + kI * kappa0 * CMat4::Identity();
  Eigen::JacobiSVD<CMat4> svd(B);
  if (svd.singularValues()(3) <= 1e-13 * svd.singularValues()(0))
    throw ResonanceDetected("critical resolvent is singular");
  return B.inverse();
}

ResolventDecayReport resolvent_decay_check(const Model& m, double lambda0, double kappa0, int m_max) {
  ResolventDecayReport r;
  r.m_max = m_max;
  const double eps = m.epsilon(lambda0);
  const double l = std::abs(lambda0);
  const double normU = m.U.cwiseAbs().rowwise().sum().maxCoeff();
  const double normDA = m.DA.cwiseAbs().rowwise().sum().maxCoeff();
  auto t_bound = [&](double mm) {
    return l / (eps * 2 * kPi) * normU / mm +
           l * l / (eps * 4 * kPi * kPi) * (std::abs(kappa0) + normDA) / (mm * mm);
  };
  int m0 = 1;
  while (t_bound(m0 + 1) > 0.5) ++m0;
  r.m0 = m0;
  r.bound_constant = 3 * lambda0 * lambda0 / (4 * kPi * kPi * eps);
  for (int s : {-1, 1})
    for (int mm = m0 + 1; mm <= m_max; ++mm) {
      const double norm = inf_norm(critical_resolvent(m, s * mm, lambda0, kappa0));
      r.empirical_constant = std::max(r.empirical_constant, norm * mm * mm);
      if (norm > r.bound_constant / (double(mm) * mm)) ++r.violations;
    }
  r.pass = r.violations == 0;
  return r;
}

SemisimplicityReport semisimplicity_check(const Model& m, double lambda0, double kappa0,
                                          double margin_tol) {
  SemisimplicityReport r;
  const CMat4 shift = kI * kappa0 * CMat4::Identity();
  const CMat4 Mp = -symbol_matrix_mode(m, 1, lambda0) + shift;
  const CMat4 Mm = -symbol_matrix_mode(m, -1, lambda0) + shift;
  r.eig_plus = eigenvalues(Mp);
  r.eig_minus = eigenvalues(Mm);
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto* e : {&r.eig_plus, &r.eig_minus})
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) r.margin = std::min(r.margin, std::abs((*e)[i] - (*e)[j]));

  Eigen::JacobiSVD<CMat4> sp(Mp, Eigen::ComputeFullV), sm(Mm, Eigen::ComputeFullV);
  r.plus_kernel_gap = sp.singularValues()(2);
  r.minus_kernel_gap = sm.singularValues()(2);
  const CVec4 v0 = sp.matrixV().col(3);
  const CVec4 Pv0 = matrix_P().cast<cplx>() * v0;
  r.plus_kernel_residual = (Mp * v0).norm();
  r.minus_kernel_residual = (Mm * Pv0).norm();
  if (r.margin <= margin_tol)
    throw SemisimplicityUnverified("critical mode matrices have a repeated eigenvalue");
  r.pass = r.plus_kernel_residual < 1e-10 && r.minus_kernel_residual < 1e-10 &&
           r.plus_kernel_gap > margin_tol && r.minus_kernel_gap > margin_tol;
  return r;
}

}  // namespace hopfkit
