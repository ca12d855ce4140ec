#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace brionlab {

using Real = double;
using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

inline constexpr Real pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

/// Absolute tolerance used by every geometric predicate.
inline constexpr Real geom_tol = 1e-9;

/// Raised for invalid input or violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bilinear (non-Hermitian) pairing of a real point with a complex frequency.
inline Complex pair(const Vec& x, const CVec& z) {
  Complex s{0.0, 0.0};
  for (Eigen::Index k = 0; k < x.size(); ++k) s += x[k] * z[k];
  return s;
}

inline Real inf_norm(const CVec& z) {
  Real m = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) m = std::max(m, std::abs(z[k]));
  return m;
}

}  // namespace brionlab
