#include "hopfkit/hopf_multiple.hpp"

#include <algorithm>
#include <cmath>

#include "hopfkit/dispersion.hpp"

namespace hopfkit {

namespace {

// Neumaier summation over complex terms.
struct CompensatedSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void add(double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void operator+=(cplx z) {
    add(re, cre, z.real());
    add(im, cim, z.imag());
  }
  cplx value() const { return {re + cre, im + cim}; }
};

}  // namespace

KernelBases kernel_bases(const Model& m, double lambda0, double kappa0) {
  const CriticalEigenData crit = mode_eigensystem(m, lambda0, kappa0, Normalization::unit_adjoint);
  const CMat4 P = matrix_P().cast<cplx>();
  KernelBases kb;
  kb.lambda0 = lambda0;
  kb.k0 = 2 * kPi / lambda0;
  kb.mu0 = -kappa0;
  kb.v0 = crit.v0;
  kb.w0 = crit.w0;
  kb.phi1 = {{1, crit.v0}};
  kb.phi2 = {{-1, P * crit.v0}};
  kb.phi1s = {{1, crit.w0}};
  kb.phi2s = {{-1, P * crit.w0}};
  return kb;
}

ModeField conj_field(const ModeField& f) {
  ModeField out;
  for (const auto& [n, v] : f) out[-n] = v.conjugate();
  return out;
}

ModeField g2_field(const ModeField& f, const ModeField& g, const Vec4& c) {
  ModeField out;
  for (const auto& [n, u] : f)
    for (const auto& [p, v] : g) {
      auto [it, fresh] = out.try_emplace(n + p, CVec4::Zero());
      it->second += eval_G2<cplx>(u, v, c);
    }
  return out;
}

cplx pair_fields(const ModeField& f, const ModeField& g) {
  CompensatedSum s;
  for (const auto& [n, u] : f) {
    const auto it = g.find(n);
    if (it == g.end()) continue;
    for (int j = 0; j < 4; ++j) s += u(j) * std::conj(it->second(j));
  }
  return s.value();
}

ModeField apply_B(const Model& m, double lambda0, const ModeField& f) {
  ModeField out;
  for (const auto& [n, v] : f)
    out[n] = -(kI * (2 * kPi * n / (lambda0 * lambda0))) * (m.U.cast<cplx>() * v);
  return out;
}

LinearCoefficient linear_coefficient_a(const Model& m, const KernelBases& kb, double tol) {
  LinearCoefficient r;
  r.a = -kI * kb.k0 * kb.k0 * pair2(m.U.cast<cplx>() * kb.v0, kb.w0);
  r.b11 = 2 * kPi * pair_fields(apply_B(m, kb.lambda0, kb.phi1), kb.phi1s);
  r.b22 = 2 * kPi * pair_fields(apply_B(m, kb.lambda0, kb.phi2), kb.phi2s);
  if (std::abs(r.b11 - r.b22) > tol * (1 + std::abs(r.b11)))
    throw SymmetryViolation("(Bφ₂,φ₂*) differs from (Bφ₁,φ₁*)");
  return r;
}

CVec4 resolvent_apply(const Model& m, double lambda0, int n, cplx sigma, const CVec4& f,
                      double* residual) {
  const CMat4 L = -symbol_matrix_mode(m, n, lambda0) - sigma * CMat4::Identity();
  CVec4 x;
  if (n == 0 && sigma == cplx(0)) {
    x = mass_zero_solve(L, f);
  } else {
    Eigen::JacobiSVD<CMat4> svd(L);
    if (svd.singularValues()(3) <= 1e-13 * svd.singularValues()(0))
      throw ResonanceDetected("resolvent_apply: singular mode matrix at n = " + std::to_string(n));
    x = L.fullPivLu().solve(f);
  }
  if (residual) *residual = (L * x - f).norm() / std::max(1.0, f.norm());
  return x;
}

ModeField resolvent_apply(const Model& m, double lambda0, cplx sigma, const ModeField& f) {
  ModeField out;
  for (const auto& [n, v] : f) out[n] = resolvent_apply(m, lambda0, n, sigma, v);
  return out;
}

Tensor third_order_tensor(const Model& m, const KernelBases& kb, HarmonicShift shift) {
  Tensor t;
  const ModeField* phi[3] = {nullptr, &kb.phi1, &kb.phi2};
  const ModeField* dual[3] = {nullptr, &kb.phi1s, &kb.phi2s};
  const cplx sigma = (shift == HarmonicShift::plus ? -2.0 : 2.0) * kI * kb.mu0;

  auto solve = [&](const ModeField& f, cplx s) {
    ModeField out;
    for (const auto& [n, v] : f) {
      double res = 0;
      out[n] = resolvent_apply(m, kb.lambda0, n, s, v, &res);
      t.max_resolvent_residual = std::max(t.max_resolvent_residual, res);
    }
    return out;
  };
  auto pair_tracked = [&](const ModeField& f, const ModeField& g) {
    bool shared = false;
    for (const auto& [n, _] : f) shared = shared || g.count(n);
    if (!shared) ++t.vanishing_pairings;
    return pair_fields(f, g);
  };

  for (int l = 1; l <= 2; ++l)
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        for (int k = 1; k <= 2; ++k) {
          const ModeField pk_bar = conj_field(*phi[k]);
          const ModeField mean = solve(g2_field(*phi[j], pk_bar, m.c), 0.0);
          const ModeField harm = solve(g2_field(*phi[j], *phi[i], m.c), sigma);
          const cplx t1 = pair_tracked(g2_field(mean, *phi[i], m.c), *dual[l]);
          const cplx t2 = pair_tracked(g2_field(harm, pk_bar, m.c), *dual[l]);
          t.a[{l, i, j, k}] = 4 * kPi * t1 + 2 * kPi * t2;
        }

  auto agg = [&](int l) -> std::array<cplx, 4> {
    return {t.a[{l, 1, 1, 1}], t.a[{l, 1, 2, 1}] + t.a[{l, 2, 1, 1}],
            t.a[{l, 1, 2, 2}] + t.a[{l, 2, 1, 2}], t.a[{l, 2, 2, 2}]};
  };
  t.monomials.comp1 = agg(1);
  t.monomials.comp2 = agg(2);
  return t;
}

namespace {

// Exponents (i, j, k) of h_i h_j h̄_k in the order of MonomialCoeffs.
constexpr std::array<std::array<int, 3>, 4> kMonomials{{{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}}};

}  // namespace

Vec4 RealSystem::E3(const Vec4& v) const {
  const cplx h[2] = {{v(0), v(1)}, {v(2), v(3)}};
  cplx e[2] = {0, 0};
  for (int q = 0; q < 4; ++q) {
    const auto& [a, b, c] = kMonomials[q];
    const cplx mono = h[a] * h[b] * std::conj(h[c]);
    e[0] += coeffs.comp1[q] * mono;
    e[1] += coeffs.comp2[q] * mono;
  }
  return 2.0 * Vec4(e[0].real(), e[0].imag(), e[1].real(), e[1].imag());
}

Mat4 RealSystem::dE3(const Vec4& v) const {
  const cplx h[2] = {{v(0), v(1)}, {v(2), v(3)}};
  Mat4 J = Mat4::Zero();
  for (int p = 0; p < 2; ++p) {
    cplx dx[2] = {0, 0}, dy[2] = {0, 0};
    for (int q = 0; q < 4; ++q) {
      const auto& [a, b, c] = kMonomials[q];
      const cplx hb = std::conj(h[c]);
      const cplx da = a == p ? h[b] * hb : 0.0;
      const cplx db = b == p ? h[a] * hb : 0.0;
      const cplx dc = c == p ? h[a] * h[b] : 0.0;
      const cplx mx = da + db + dc;
      const cplx my = kI * (da + db) - kI * dc;
      dx[0] += coeffs.comp1[q] * mx;
      dx[1] += coeffs.comp2[q] * mx;
      dy[0] += coeffs.comp1[q] * my;
      dy[1] += coeffs.comp2[q] * my;
    }
    for (int l = 0; l < 2; ++l) {
      J(2 * l, 2 * p) = 2 * dx[l].real();
      J(2 * l + 1, 2 * p) = 2 * dx[l].imag();
      J(2 * l, 2 * p + 1) = 2 * dy[l].real();
      J(2 * l + 1, 2 * p + 1) = 2 * dy[l].imag();
    }
  }
  return J;
}

Vec4 RealSystem::residual(const Vec4& u) const {
  const Vec4 v(u(0), u(1), u(2), 0);
  return Upsilon * v + u(3) * (P0B * v) - E3(v);
}

Mat4 RealSystem::jacobian(const Vec4& u) const {
  const Vec4 v(u(0), u(1), u(2), 0);
  const Mat4 lin = Upsilon + u(3) * P0B - dE3(v);
  Mat4 J;
  J.leftCols<3>() = lin.leftCols<3>();
  J.col(3) = P0B * v;
  return J;
}

RealSystem assemble_real_system(cplx a, const MonomialCoeffs& coeffs, RealForm form) {
  RealSystem s;
  s.coeffs = coeffs;
  const double ar = a.real(), ai = a.imag();
  s.Upsilon = Mat4::Zero();
  s.P0B = Mat4::Zero();
  for (int l = 0; l < 2; ++l) {
    const int r = 2 * l;
    s.Upsilon(r + 1, r) = -1;
    s.P0B(r, r) = ar;
    s.P0B(r + 1, r) = ai;
    if (form == RealForm::literal) {
      s.Upsilon(r, r + 1) = 1;
      s.P0B(r, r + 1) = -ai;
      s.P0B(r + 1, r + 1) = ar;
    }
  }
  return s;
}

const BranchSolution& BranchSearch::best() const {
  if (selected < 0) throw NoNontrivialBranch("no nontrivial root");
  return roots[selected];
}

namespace {

std::optional<BranchSolution> newton(const RealSystem& sys, Vec4 u) {
  Vec4 F = sys.residual(u);
  for (int it = 0; it < 200; ++it) {
    const double fn = F.cwiseAbs().maxCoeff();
    if (fn < 1e-15) break;
    const Mat4 J = sys.jacobian(u);
    Eigen::FullPivLU<Mat4> lu(J);
    if (!lu.isInvertible()) return std::nullopt;
    const Vec4 du = lu.solve(F);
    double step = 1;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      const Vec4 cand = u - step * du;
      const Vec4 Fc = sys.residual(cand);
      if (Fc.allFinite() && Fc.cwiseAbs().maxCoeff() < fn) {
        u = cand;
        F = Fc;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (!u.allFinite()) return std::nullopt;
  // Polish with undamped steps once inside the quadratic basin.
  for (int it = 0; it < 3; ++it) {
    Eigen::FullPivLU<Mat4> lu(sys.jacobian(u));
    if (!lu.isInvertible()) break;
    const Vec4 cand = u - lu.solve(sys.residual(u));
    if (sys.residual(cand).cwiseAbs().maxCoeff() <= sys.residual(u).cwiseAbs().maxCoeff()) u = cand;
  }
  return BranchSolution{u, sys.residual(u).cwiseAbs().maxCoeff()};
}

}  // namespace

BranchSearch solve_branch(const RealSystem& sys) {
  static const double xs[] = {-0.2, -0.1, -0.05, -0.02, 0.02, 0.05, 0.1, 0.2};
  static const double ys[] = {-0.05, 0.0, 0.05};
  static const double rhos[] = {-30, -10, -1, 1, 10, 30};
  BranchSearch out;
  for (double x1 : xs)
    for (double y1 : ys)
      for (double x2 : xs)
        for (double rho : rhos) {
          ++out.starts;
          auto sol = newton(sys, Vec4(x1, y1, x2, rho));
          if (!sol || sol->residual >= 1e-12) continue;
          Vec4 u = sol->u;
          if (u.head<3>().norm() < 1e-8) continue;
          // h → −h leaves the system invariant; keep x1 > 0 (or x2 > 0 if x1 = 0).
          const double lead = std::abs(u(0)) > 1e-14 ? u(0) : u(2);
          if (lead < 0) u.head<3>() = -u.head<3>();
          const bool dup = std::any_of(out.roots.begin(), out.roots.end(), [&](const BranchSolution& r) {
            return (r.u - u).norm() < 1e-8 * (1 + u.norm());
          });
          if (!dup) out.roots.push_back({u, sol->residual});
        }
  if (out.roots.empty()) throw NoNontrivialBranch("multi-start Newton found only the trivial root");
  std::sort(out.roots.begin(), out.roots.end(), [](const BranchSolution& a, const BranchSolution& b) {
    for (int i = 0; i < 4; ++i)
      if (a.u(i) != b.u(i)) return a.u(i) < b.u(i);
    return false;
  });
  out.selected = 0;
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const Vec4& u = out.roots[i].u;
    const double s = std::max(std::abs(u(0)), std::abs(u(2)));
    if (std::abs(u(0) - u(2)) <= 1e-8 * s && std::abs(u(1)) <= 1e-8 * s && s > 0) {
      out.selected = int(i);
      break;
    }
  }
  return out;
}

double existence_determinant(const RealSystem& sys, const Vec4& root, bool include_rho) {
  const Vec4 v(root(0), root(1), root(2), 0);
  Mat4 lin = sys.Upsilon - sys.dE3(v);
  if (include_rho) lin += root(3) * sys.P0B;
  Mat4 K;
  K.col(0) = sys.P0B * v;
  K.rightCols<3>() = lin.leftCols<3>();
  return K.determinant();
}

ReducedSystem analyze_multiple(const Model& m, double lambda0, double kappa0, HarmonicShift shift,
                               RealForm form) {
  ReducedSystem r;
  r.bases = kernel_bases(m, lambda0, kappa0);
  r.linear = linear_coefficient_a(m, r.bases);
  r.tensor = third_order_tensor(m, r.bases, shift);
  r.system = assemble_real_system(r.linear.a, r.tensor.monomials, form);
  try {
    r.branch = solve_branch(r.system);
    r.determinant = existence_determinant(r.system, r.branch->best().u);
  } catch (const NoNontrivialBranch&) {
  }
  return r;
}

}  // namespace hopfkit
