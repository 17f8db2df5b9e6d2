#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

using namespace hopfkit;

std::vector<cplx> char_poly(const Eigen::MatrixXcd& A) {
  const int n = int(A.rows());
  std::vector<cplx> c(n + 1);  // c[i] multiplies z^i
  c[n] = 1;
  Eigen::MatrixXcd Mk = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = A * Mk + c[n - k + 1] * I;
    c[n - k] = -(A * Mk).trace() / double(k);
  }
  std::reverse(c.begin(), c.end());
  return c;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  const int n = int(coeffs.size()) - 1;
  std::vector<cplx> a(coeffs.begin(), coeffs.end());
  for (auto& x : a) x /= coeffs[0];
  auto eval = [&](cplx z) {
    cplx p = 0;
    for (const cplx& x : a) p = p * z + x;
    return p;
  };
  auto deriv = [&](cplx z) {
    cplx d = 0;
    for (int i = 0; i < n; ++i) d = d * z + a[i] * double(n - i);
    return d;
  };
  double R = 1;
  for (int i = 1; i <= n; ++i) R = std::max(R, 1 + std::abs(a[i]));
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = R * std::pow(cplx(0.4, 0.9), i);
  for (int it = 0; it < 2000; ++it) {
    double move = 0;
    for (int i = 0; i < n; ++i) {
      cplx den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const cplx dz = eval(z[i]) / den;
      z[i] -= dz;
      move = std::max(move, std::abs(dz));
    }
    if (move < 1e-15 * R) break;
  }
  for (auto& r : z)
    for (int it = 0; it < 3; ++it) {
      const cplx d = deriv(r);
      if (std::abs(d) > 0) r -= eval(r) / d;
    }
  return z;
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& A) { return poly_roots(char_poly(A)); }

CMat4 symbol(const Model& m, double k) {
  CMat4 M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx v = -m.DA(i, j);
      if (i == j) v += cplx(-m.epsilon0 * k * k, -k * m.U(i, i));
      M(i, j) = v;
    }
  return M;
}

double rd_growth(const Eigen::MatrixXd& A, const Eigen::VectorXd& D, double k) {
  Eigen::MatrixXcd S = A.cast<cplx>();
  for (int i = 0; i < D.size(); ++i) S(i, i) -= D(i) * k * k;
  double g = -1e300;
  for (const cplx& z : eigenvalues(S)) g = std::max(g, z.real());
  return g;
}

ScanMax dense_scan_max(const Model& m, double a, double b, int n) {
  ScanMax best{a, -1e300, 0};
  for (int i = 0; i <= n; ++i) {
    const double k = a + (b - a) * i / n;
    for (const cplx& z : eigenvalues(symbol(m, k)))
      if (z.real() > best.omega) best = {k, z.real(), z};
  }
  return best;
}

Crossing bisect_crossing(const Model& m, double ka, double kb) {
  auto f = [&](double k) {
    double g = -1e300;
    for (const cplx& z : eigenvalues(symbol(m, k))) g = std::max(g, z.real());
    return g;
  };
  double fa = f(ka);
  for (int it = 0; it < 200 && kb - ka > 1e-15 * std::max(1.0, std::abs(ka)); ++it) {
    const double mid = 0.5 * (ka + kb);
    const double fm = f(mid);
    if ((fm > 0) == (fa > 0)) {
      ka = mid;
      fa = fm;
    } else {
      kb = mid;
    }
  }
  const double k0 = 0.5 * (ka + kb);
  cplx best = 0;
  double bre = -1e300;
  for (const cplx& z : eigenvalues(symbol(m, k0)))
    if (z.real() > bre) {
      bre = z.real();
      best = z;
    }
  return {k0, best.imag()};
}

CVec4 augmented_lstsq(const CMat4& B, const CVec4& f) {
  Eigen::Matrix<cplx, 5, 4> K;
  K.topRows<4>() = B;
  K.row(4).setOnes();
  Eigen::Matrix<cplx, 5, 1> rhs;
  rhs.head<4>() = f;
  rhs(4) = 0;
  return K.colPivHouseholderQr().solve(rhs);
}

namespace {

using Grid = std::vector<CVec4>;

std::vector<std::pair<int, CVec4>> dft(const Grid& g) {
  const int n = int(g.size());
  std::vector<std::pair<int, CVec4>> out;
  for (int m = -n / 2 + 1; m <= n / 2; ++m) {
    CVec4 acc = CVec4::Zero();
    for (int j = 0; j < n; ++j) acc += std::exp(cplx(0, -2 * kPi * m * j / n)) * g[j];
    acc /= double(n);
    if (acc.norm() > 1e-13) out.emplace_back(m, acc);
  }
  return out;
}

Grid synth(const std::vector<std::pair<int, CVec4>>& modes, int n) {
  Grid g(n, CVec4::Zero());
  for (int j = 0; j < n; ++j)
    for (const auto& [m, v] : modes) g[j] += std::exp(cplx(0, 2 * kPi * m * j / n)) * v;
  return g;
}

cplx quad(const Grid& u, const Grid& w) {
  cplx s = 0;
  for (std::size_t j = 0; j < u.size(); ++j) s += (u[j].array() * w[j].conjugate().array()).sum();
  return s / double(u.size());
}

CMat4 dq(const CVec4& y, const Vec4& c) {
  CMat4 J = CMat4::Zero();
  J(0, 0) = -2 * c(0) * y(0);
  J(1, 0) = 2 * c(0) * y(0);
  J(1, 1) = -2 * c(1) * y(1);
  J(2, 1) = 2 * c(1) * y(1);
  J(2, 2) = -2 * c(2) * y(2);
  J(3, 2) = 2 * c(2) * y(2);
  J(3, 3) = -2 * c(3) * y(3);
  J(0, 3) = 2 * c(3) * y(3);
  return J;
}

}  // namespace

cplx d2phi_quadrature(const Model& m, const CVec4& v0, const CVec4& w0, double lambda0, double kappa0,
                      int n) {
  Grid phi(n), phis(n);
  for (int j = 0; j < n; ++j) {
    const cplx e = std::exp(cplx(0, 2 * kPi * j / n));
    phi[j] = e * v0;
    phis[j] = e * w0;
  }
  Grid g1(n), g0(n);
  for (int j = 0; j < n; ++j) {
    g1[j] = dq(phi[j], m.c) * phi[j];
    g0[j] = dq(phi[j], m.c) * phi[j].conjugate();
  }
  auto m1 = dft(g1);
  for (auto& [mode, v] : m1) {
    const CMat4 R = cplx(0, 2 * kappa0) * CMat4::Identity() - symbol(m, 2 * kPi * mode / lambda0);
    v = R.fullPivLu().solve(v).eval();
  }
  const Grid u1 = synth(m1, n);
  Grid h1(n);
  for (int j = 0; j < n; ++j) h1[j] = dq(phi[j].conjugate(), m.c) * u1[j];

  auto m0 = dft(g0);
  for (auto& [mode, v] : m0) {
    // Linearization inverse on the mean mode: M̃(0,λ₀) = −DA.
    const CMat4 L = symbol(m, 2 * kPi * mode / lambda0);
    v = (mode == 0 ? augmented_lstsq(L, v) : CVec4(L.fullPivLu().solve(v)));
  }
  const Grid u0 = synth(m0, n);
  Grid h0(n);
  for (int j = 0; j < n; ++j) h0[j] = dq(phi[j], m.c) * u0[j];

  return -quad(h1, phis) + 2.0 * quad(h0, phis);
}

Mat4 fd_jacobian(const RealSystem& s, const Vec4& v, double h) {
  Mat4 J;
  for (int k = 0; k < 4; ++k) {
    Vec4 e = Vec4::Zero();
    e(k) = h;
    J.col(k) = (s.E3(v + e) - s.E3(v - e)) / (2 * h);
  }
  return J;
}

}  // namespace oracle
