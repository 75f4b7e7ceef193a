#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fbs {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Every failure mode carries a short machine-readable kind.
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

struct BranchError : Error {
  explicit BranchError(const std::string& m) : Error("branch-ambiguity", m) {}
};
struct SingularError : Error {
  explicit SingularError(const std::string& m) : Error("singular-system", m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};
struct ConfigError : Error {
  std::string key;
  ConfigError(std::string k, const std::string& m) : Error("config", m), key(std::move(k)) {}
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace fbs
