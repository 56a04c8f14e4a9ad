#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ahgr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Invalid parameters or unusable configuration (CLI exit code 1).
class param_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data: files, ranges, shapes (CLI exit code 2).
class data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-finite values, failed solves (CLI exit code 3).
class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Default denominator guard for multiplicative updates.
inline constexpr double kEpsilon = 1e-12;

inline void check_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite())
    throw numeric_error(what + ": matrix contains non-finite values");
}

inline void check_symmetric(const Matrix& m, const std::string& what,
                            double tol = 1e-9) {
  if (m.rows() != m.cols())
    throw param_error(what + ": matrix is not square");
  double d = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && d > tol)
    throw param_error(what + ": matrix is not symmetric (max asymmetry " +
                      std::to_string(d) + ")");
}

} // namespace ahgr
