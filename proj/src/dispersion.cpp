#include "hopfkit/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "hopfkit/parallel.hpp"

namespace hopfkit {

namespace {

CMat4 symbol_with(const Model& m, double k, double eps) {
  return -kI * k * m.U.cast<cplx>() - m.DA.cast<cplx>() - cplx(eps * k * k) * CMat4::Identity();
}

std::array<std::array<int, 4>, 24> all_permutations() {
  std::array<std::array<int, 4>, 24> out{};
  std::array<int, 4> p{0, 1, 2, 3};
  int i = 0;
  do out[i++] = p;
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

CMat4 symbol_matrix(const Model& m, double k) { return symbol_with(m, k, m.epsilon0); }

CMat4 symbol_matrix_mode(const Model& m, int n, double lambda) {
  if (lambda == 0.0) throw DomainError("symbol_matrix_mode: lambda must be nonzero");
  return symbol_with(m, 2 * kPi * n / lambda, m.epsilon(lambda));
}

CMat4 symbol_matrix_mode_dlambda(const Model& m, int n, double lambda) {
  if (lambda == 0.0) throw DomainError("symbol_matrix_mode_dlambda: lambda must be nonzero");
  const double l2 = lambda * lambda;
  // d/dλ of −ε(λ)(2πn/λ)²: zero under the symmetric rule, 8π²n²ε/λ³ otherwise.
  const double diff = (m.kind == ModelKind::symmetric && m.lambda_ref)
                          ? 0.0
                          : 8 * kPi * kPi * n * n * m.epsilon0 / (l2 * lambda);
  return cplx(diff) * CMat4::Identity() + kI * (2 * kPi * n / l2) * m.U.cast<cplx>();
}

std::array<cplx, 4> eigenvalues(const CMat4& A) {
  Eigen::ComplexEigenSolver<CMat4> es(A, false);
  const auto& e = es.eigenvalues();
  return {e(0), e(1), e(2), e(3)};
}

std::vector<double> uniform_grid(double a, double b, double h) {
  if (!(h > 0) || !(b > a)) throw DomainError("uniform_grid: need a < b and h > 0");
  const long n = std::lround((b - a) / h);
  std::vector<double> k(n + 1);
  for (long i = 0; i <= n; ++i) k[i] = a + (b - a) * double(i) / double(n);
  return k;
}

DispersionScan eigen_branches(const Model& m, const std::vector<double>& k_grid) {
  if (k_grid.empty()) throw DomainError("eigen_branches: empty grid");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()))
    throw DomainError("eigen_branches: grid must be sorted");
  const std::size_t n = k_grid.size();
  std::vector<std::array<cplx, 4>> raw(n);
  parallel_for(n, [&](std::size_t i) { raw[i] = eigenvalues(symbol_matrix(m, k_grid[i])); });

  static const auto perms = all_permutations();
  DispersionScan s;
  s.k = k_grid;
  s.z.resize(n);
  s.perm.resize(n);
  s.ambiguous.assign(n, false);

  std::array<int, 4> first{0, 1, 2, 3};
  std::sort(first.begin(), first.end(), [&](int a, int b) {
    if (raw[0][a].real() != raw[0][b].real()) return raw[0][a].real() > raw[0][b].real();
    return raw[0][a].imag() > raw[0][b].imag();
  });
  s.perm[0] = first;
  for (int j = 0; j < 4; ++j) s.z[0][j] = raw[0][first[j]];

  for (std::size_t i = 1; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity(), second = best;
    int arg = 0;
    for (int p = 0; p < 24; ++p) {
      double cost = 0;
      for (int j = 0; j < 4; ++j) cost += std::abs(raw[i][perms[p][j]] - s.z[i - 1][j]);
      if (cost < best) {
        second = best;
        best = cost;
        arg = p;
      } else if (cost < second) {
        second = cost;
      }
    }
    s.perm[i] = perms[arg];
    s.ambiguous[i] = second - best <= 1e-9 * (1 + best);
    for (int j = 0; j < 4; ++j) s.z[i][j] = raw[i][perms[arg][j]];
  }
  return s;
}

DispersionScan eigen_branches(const Model& m) {
  return eigen_branches(m, uniform_grid(-12, 12, 0.01));
}

const char* to_string(PatternClass c) {
  switch (c) {
    case PatternClass::stationary: return "stationary";
    case PatternClass::oscillatory: return "oscillatory";
    default: return "no_patterns";
  }
}

GrowthReport growth_rate_and_classify(const DispersionScan& scan) {
  GrowthReport r;
  const std::size_t n = scan.k.size();
  if (n == 0) throw DomainError("growth_rate_and_classify: empty scan");
  r.omega.resize(n);
  std::vector<int> arg(n);
  for (std::size_t i = 0; i < n; ++i) {
    int j = 0;
    for (int q = 1; q < 4; ++q)
      if (scan.z[i][q].real() > scan.z[i][j].real()) j = q;
    arg[i] = j;
    r.omega[i] = scan.z[i][j].real();
  }
  r.omega_max = *std::max_element(r.omega.begin(), r.omega.end());
  const double tol = 1e-9 * (1 + std::abs(r.omega_max));
  const double h = n > 1 ? (scan.k.back() - scan.k.front()) / double(n - 1) : 1.0;
  bool at_zero = false, oscillatory = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.omega[i] < r.omega_max - tol) continue;
    const cplx z = scan.z[i][arg[i]];
    r.k_max.push_back(scan.k[i]);
    r.z_at_max.push_back(z);
    if (i == 0 || i + 1 == n) r.inconclusive = true;
    if (std::abs(scan.k[i]) < 0.5 * h) at_zero = true;
    if (std::abs(z.imag()) > 1e-9 * (1 + std::abs(z))) oscillatory = true;
  }
  if (at_zero)
    r.classification = PatternClass::no_patterns;
  else
    r.classification = oscillatory ? PatternClass::oscillatory : PatternClass::stationary;
  return r;
}

std::vector<CrossingResult> all_crossings(const Model& m, const DispersionScan& scan) {
  std::vector<CrossingResult> out;
  const std::size_t n = scan.k.size();
  for (int j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double ka = scan.k[i], kb = scan.k[i + 1];
      if (std::abs(ka) < 1e-6 || std::abs(kb) < 1e-6) continue;
      if ((ka < 0) != (kb < 0)) continue;
      const cplx za = scan.z[i][j], zb = scan.z[i + 1][j];
      if (za.real() == 0.0 && i > 0) continue;  // counted by the previous interval
      if ((za.real() > 0) == (zb.real() > 0) && za.real() != 0.0 && zb.real() != 0.0) continue;

      auto track = [&](double k) {
        const double t = (k - ka) / (kb - ka);
        const cplx guess = za + t * (zb - za);
        const auto e = eigenvalues(symbol_matrix(m, k));
        cplx best = e[0];
        for (const cplx& v : e)
          if (std::abs(v - guess) < std::abs(best - guess)) best = v;
        return best;
      };
      double k0;
      if (zb.real() == 0.0) {
        k0 = kb;
      } else if (za.real() == 0.0) {
        k0 = ka;
      } else {
        std::uintmax_t iters = 200;
        const auto f = [&](double k) { return track(k).real(); };
        const auto [lo, hi] = boost::math::tools::toms748_solve(
            f, ka, kb, za.real(), zb.real(), boost::math::tools::eps_tolerance<double>(52), iters);
        k0 = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
      }
      const cplx z0 = track(k0);
      if (std::abs(z0.real()) >= 1e-10) continue;
      out.push_back({k0, z0.imag(), 2 * kPi / k0, j});
    }
  }
  return out;
}

CrossingResult find_crossing(const Model& m, const DispersionScan& scan) {
  const auto all = all_crossings(m, scan);
  if (all.empty()) throw NoCrossing("no imaginary-axis crossing on the scanned grid");
  auto better = [](const CrossingResult& a, const CrossingResult& b) {
    const double tol = 1e-9 * (1 + std::abs(b.kappa0));
    if (std::abs(std::abs(a.kappa0) - std::abs(b.kappa0)) > tol)
      return std::abs(a.kappa0) > std::abs(b.kappa0);
    if ((a.kappa0 < 0) != (b.kappa0 < 0)) return a.kappa0 < 0;
    return a.k0 > b.k0;
  };
  CrossingResult best = all.front();
  for (const auto& c : all)
    if (better(c, best)) best = c;
  return best;
}

CrossingResult find_crossing(const Model& m) { return find_crossing(m, eigen_branches(m)); }

bool turing_stationary_check(const Eigen::Matrix2d& A, double D1, double D2) {
  if (!(D1 > 0) || !(D2 > 0)) throw DomainError("turing_stationary_check: diffusivities must be positive");
  const double tr = A.trace(), det = A.determinant();
  if (!(tr < 0) || !(det > 0)) return false;
  const double rhs = 2 * std::sqrt(D1 * D2 * det);
  return A(0, 0) * D2 + A(1, 1) * D1 > rhs && rhs > 0;
}

}  // namespace hopfkit
