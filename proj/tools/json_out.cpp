#include "json_out.hpp"

#include <cmath>
#include <string>

#include "hopfkit/reproduce.hpp"

namespace hopfkit::cli {

double r9(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(fmt9(x));
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return r9(x);
}

json num(cplx z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

json vec(const Vec4& v) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(num(v(i)));
  return a;
}

json vec(const CVec4& v) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(num(v(i)));
  return a;
}

json mat(const Mat4& m) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(vec(Vec4(m.row(i).transpose())));
  return a;
}

json mat(const CMat4& m) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(vec(CVec4(m.row(i).transpose())));
  return a;
}

json to_json(const Model& m) {
  json j{{"kind", to_string(m.kind)}, {"delta", num(m.delta)}, {"epsilon0", num(m.epsilon0)}, {"c", vec(m.c)},
         {"D", mat(m.D)}, {"U", mat(m.U)}, {"A0", mat(m.A0)}, {"M", mat(m.M)}, {"A", mat(m.A)}, {"DA", mat(m.DA)}};
  j["lambda_ref"] = m.lambda_ref ? num(*m.lambda_ref) : json(nullptr);
  return j;
}

json to_json(const StructureReport& r) {
  json a = json::array();
  for (const auto& c : r.checks)
    a.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"residual", num(c.value)},
                 {"tolerance", num(c.tolerance)}});
  return a;
}

json to_json(const ReflectionReport& r) {
  json res = json::array();
  for (double x : r.residuals) res.push_back(num(x));
  return {{"conditions_hold", r.conditions_hold},
          {"coefficients_symmetric", r.coefficients_symmetric},
          {"residuals", res},
          {"commutation_residual", r.commutation_residual ? num(*r.commutation_residual) : json(nullptr)},
          {"satisfied", r.satisfied()}};
}

json to_json(const CrossingResult& c) {
  return {{"k0", num(c.k0)}, {"kappa0", num(c.kappa0)}, {"lambda0", num(c.lambda0)}, {"branch", c.branch}};
}

json to_json(const CriticalEigenData& d) {
  json e = json::array();
  for (const cplx& z : d.M0_eigenvalues) e.push_back(num(z));
  return {{"v0", vec(d.v0)},
          {"w0", vec(d.w0)},
          {"pairing", num(d.normalization)},
          {"M0_eigenvalues", e},
          {"kernel_gap", num(d.kernel_gap)},
          {"right_residual", num(d.right_residual)},
          {"left_residual", num(d.left_residual)}};
}

json to_json(const NonresonanceReport& r) {
  json worst = json::array();
  for (const auto& e : r.entries)
    if (std::abs(e.n) <= 4) worst.push_back({{"n", e.n}, {"distance", num(e.distance)}});
  return {{"status", r.pass ? "pass" : "fail"},
          {"n_max", r.n_max},
          {"min_distance", num(r.min_distance)},
          {"low_modes", worst},
          {"zero_mode_sigma_min", num(r.zero_mode_sigma_min)},
          {"zero_mode_restricted_sigma", num(r.zero_mode_restricted_sigma)},
          {"zero_mode_trivial", r.zero_mode_trivial}};
}

json to_json(const ResolventDecayReport& r) {
  return {{"status", r.pass ? "pass" : "fail"},
          {"m0", r.m0},
          {"m_max", r.m_max},
          {"vacuous", r.m0 >= r.m_max},
          {"bound_constant", num(r.bound_constant)},
          {"empirical_constant", num(r.empirical_constant)},
          {"violations", r.violations}};
}

json to_json(const SemisimplicityReport& r) {
  json p = json::array(), m = json::array();
  for (int i = 0; i < 4; ++i) {
    p.push_back(num(r.eig_plus[i]));
    m.push_back(num(r.eig_minus[i]));
  }
  return {{"status", r.pass ? "pass" : "fail"},
          {"eigenvalues_plus", p},
          {"eigenvalues_minus", m},
          {"margin", num(r.margin)},
          {"plus_kernel_residual", num(r.plus_kernel_residual)},
          {"minus_kernel_residual", num(r.minus_kernel_residual)}};
}

json to_json(const HopfSingleReport& r) {
  return {{"z_prime", num(r.result.z_prime)},
          {"z_prime_k", num(r.speed.dz_dk)},
          {"d2_phi", num(r.result.d2_phi)},
          {"lambda_curv", num(r.result.lambda_curv)},
          {"branch_type", to_string(r.result.branch_type)},
          {"residuals",
           {{"z_prime_fd", num(r.speed.dz_dlambda_fd)},
            {"z_prime_k_fd", num(r.speed.dz_dk_fd)},
            {"rel_diff_lambda", num(r.speed.rel_diff_lambda)},
            {"rel_diff_k", num(r.speed.rel_diff_k)},
            {"second_harmonic_term", num(r.terms.second_harmonic)},
            {"mean_flow_term", num(r.terms.mean_flow)},
            {"mean_flow_source_sum", num(r.terms.mean_flow_source_sum)},
            {"kernel_residual", num(r.critical.right_residual)}}},
          {"critical", to_json(r.critical)}};
}

json to_json(const ReducedSystem& r) {
  auto coeffs = [](const std::array<cplx, 4>& c) {
    return json{{"h1^2 h1b", num(c[0])}, {"h1 h2 h1b", num(c[1])}, {"h1 h2 h2b", num(c[2])}, {"h2^2 h2b", num(c[3])}};
  };
  json tensor = json::array();
  for (const auto& [key, val] : r.tensor.a)
    tensor.push_back({{"l", key[0]}, {"i", key[1]}, {"j", key[2]}, {"k", key[3]}, {"value", num(val)}});
  json j{{"mu0", num(r.bases.mu0)},
         {"k0", num(r.bases.k0)},
         {"lambda0", num(r.bases.lambda0)},
         {"v0", vec(r.bases.v0)},
         {"w0", vec(r.bases.w0)},
         {"a", num(r.linear.a)},
         {"B11", num(r.linear.b11)},
         {"B22", num(r.linear.b22)},
         {"tensor", tensor},
         {"monomial_coeffs", {{"component1", coeffs(r.tensor.monomials.comp1)}, {"component2", coeffs(r.tensor.monomials.comp2)}}},
         {"vanishing_pairings", r.tensor.vanishing_pairings},
         {"Upsilon", mat(r.system.Upsilon)},
         {"P0B", mat(r.system.P0B)}};
  if (r.branch) {
    json roots = json::array();
    for (const auto& s : r.branch->roots)
      roots.push_back({{"x1", num(s.u(0))}, {"y1", num(s.u(1))}, {"x2", num(s.u(2))}, {"rho", num(s.u(3))}, {"residual", num(s.residual)}});
    const Vec4 u = r.branch->best().u;
    j["solution"] = {{"x1", num(u(0))}, {"y1", num(u(1))}, {"x2", num(u(2))}, {"rho", num(u(3))}};
    j["roots"] = roots;
  } else {
    j["solution"] = nullptr;
  }
  j["det_value"] = r.determinant ? num(*r.determinant) : json(nullptr);
  j["det_value_with_rho"] =
      r.branch ? num(existence_determinant(r.system, r.branch->best().u, true)) : json(nullptr);
  return j;
}

json to_json(const SimDiagnostics& d) {
  auto opt = [](const std::optional<double>& x) { return x ? num(*x) : json(nullptr); };
  return {{"growth_rate", opt(d.growth_rate)},
          {"period", opt(d.period)},
          {"angular_frequency", opt(d.angular_frequency)},
          {"amplitude", num(d.amplitude)},
          {"limit_cycle", d.limit_cycle},
          {"blowup", d.blowup},
          {"blowup_time", d.blowup ? num(d.blowup_time) : json(nullptr)},
          {"samples", d.t.size()}};
}

}  // namespace hopfkit::cli
