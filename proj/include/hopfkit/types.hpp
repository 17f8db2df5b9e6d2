#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hopfkit {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using CMat4 = Eigen::Matrix4cd;
using CVec4 = Eigen::Vector4cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HOPFKIT_ERROR(Name)            \
  struct Name : Error {                \
    using Error::Error;                \
  }

HOPFKIT_ERROR(DomainError);
HOPFKIT_ERROR(NoCrossing);
HOPFKIT_ERROR(SimplicityViolation);
HOPFKIT_ERROR(DegeneratePairing);
HOPFKIT_ERROR(ConstraintViolation);
HOPFKIT_ERROR(DegeneracyError);
HOPFKIT_ERROR(ResonanceDetected);
HOPFKIT_ERROR(InternalInconsistency);
HOPFKIT_ERROR(NonvanishingSpeedViolation);
HOPFKIT_ERROR(SemisimplicityUnverified);
HOPFKIT_ERROR(SymmetryViolation);
HOPFKIT_ERROR(NoNontrivialBranch);
HOPFKIT_ERROR(BlowupDetected);

#undef HOPFKIT_ERROR

// Σ u_j conj(w_j)
inline cplx pair2(const CVec4& u, const CVec4& w) { return w.dot(u); }

// One named pass/fail line of a structural check.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

}  // namespace hopfkit
