#include "tubes/core.hpp"

#include <cmath>
#include <numbers>

namespace tubes {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::BadRho: return "BadRho";
    case ErrorKind::ConfigConflict: return "ConfigConflict";
    case ErrorKind::BranchPrecondition: return "BranchPrecondition";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::ContinuationFailure: return "ContinuationFailure";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void require_dim(const Vec& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                  std::to_string(dim) + ", got " +
                                                  std::to_string(v.size()));
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vec Rng::uniform_in_box(const Vec& lo, const Vec& hi) {
  Vec x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
  return x;
}

Vec Rng::unit_vector(Eigen::Index n) {
  Vec v(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

}  // namespace tubes
