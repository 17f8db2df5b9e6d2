#pragma once

#include <array>

#include "hopfkit/hopf_multiple.hpp"

// Published target values the pipeline is validated against.
namespace hopfkit::reference {

inline constexpr double k0 = -4.47675;
inline constexpr double kappa0 = -4.54605;
inline const std::array<cplx, 4> M0_eigenvalues{
    cplx(1.99739, -13.5171), cplx(2.00414, -9.02281), cplx(2.01502, 4.35574), cplx(0, 0)};
inline constexpr double re_dz_dk = 0.896648;

inline constexpr cplx a{-0.0000324659, -0.0406768};

inline MonomialCoeffs e3_coefficients() {
  const cplx A(316.127, 912.071), B(0.0660957, 0.175946), C(-316.128, -912.074),
      D(0.00475099, 0.0576605);
  return {{A, B, C, D}, {D, C, B, A}};
}

inline constexpr double x1 = 0.0756877;
inline constexpr double x2 = 0.0756877;
inline constexpr double y1 = 0.0;
inline constexpr double rho = -24.64899;
inline constexpr double determinant = 6.28814e-7;

}  // namespace hopfkit::reference
