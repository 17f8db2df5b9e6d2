#pragma once

// Independent reference computations used only by the tests. They avoid the
// library's eigen-solvers and mode bookkeeping so agreement is meaningful.

#include <vector>

#include "hopfkit/hopf_multiple.hpp"
#include "hopfkit/model.hpp"

namespace oracle {

using hopfkit::cplx;

// Coefficients of det(zI − A) via Faddeev–LeVerrier, highest degree first.
std::vector<cplx> char_poly(const Eigen::MatrixXcd& A);
// All roots by Durand–Kerner, polished with Newton.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);
std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& A);

// M(k) written out entry by entry.
hopfkit::CMat4 symbol(const hopfkit::Model& m, double k);

// max_j Re z_j(k) of a general reaction–diffusion symbol −diag(D)k² + A.
double rd_growth(const Eigen::MatrixXd& A, const Eigen::VectorXd& D, double k);

// Dense-scan maximum of Ω over [a, b].
struct ScanMax {
  double k, omega;
  cplx z;
};
ScanMax dense_scan_max(const hopfkit::Model& m, double a, double b, int n);

// Crossing by bisection on Re of the characteristic root nearest the branch.
struct Crossing {
  double k0, kappa0;
};
Crossing bisect_crossing(const hopfkit::Model& m, double ka, double kb);

// Least-squares solve of [B; bᵗ] x = [f; 0].
hopfkit::CVec4 augmented_lstsq(const hopfkit::CMat4& B, const hopfkit::CVec4& f);

// D²ᵣᵣΦ⁰ from grid functions on an n-point grid, with every product formed
// pointwise and every pairing a quadrature ∫ u·conj(w) dx.
cplx d2phi_quadrature(const hopfkit::Model& m, const hopfkit::CVec4& v0, const hopfkit::CVec4& w0,
                      double lambda0, double kappa0, int n = 256);

// Central-difference Jacobian.
hopfkit::Mat4 fd_jacobian(const hopfkit::RealSystem& s, const hopfkit::Vec4& v, double h = 1e-6);

}  // namespace oracle
