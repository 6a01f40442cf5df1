#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace tubes {

using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;

// Points closer than this to the boundary of an open set are reported outside.
inline constexpr double kBoundaryTol = 1e-12;

enum class ErrorKind {
  DegenerateInput,
  OutsideDomain,
  StencilOutOfDomain,
  BadRho,
  ConfigConflict,
  BranchPrecondition,
  BadEpsilon,
  StepTooLarge,
  AllZero,
  ContinuationFailure,
  InvalidPoint,
  InvalidDomain,
  DimensionMismatch,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }

void require_dim(const Vec& v, Eigen::Index dim, const char* what);

/// Seeded generator with hand-rolled distributions, so that sample streams
/// replay identically across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vec uniform_in_box(const Vec& lo, const Vec& hi);
  /// Uniform direction on the unit sphere of R^n.
  Vec unit_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finaliser; used to derive independent per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tubes
