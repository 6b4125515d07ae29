#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cfb/jet.hpp"

namespace cfb {

/// Error taxonomy shared by all modules. Every failure carries a short code
/// usable in reports plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define CFB_ERROR_TYPE(Name)                                    \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& msg) : Error(#Name, msg) {} \
  }

CFB_ERROR_TYPE(NonConvergence);
CFB_ERROR_TYPE(RankDeficient);
CFB_ERROR_TYPE(EvenDimension);
CFB_ERROR_TYPE(DegenerateContact);
CFB_ERROR_TYPE(FlowEscape);
CFB_ERROR_TYPE(NotContact);
CFB_ERROR_TYPE(NotInvariant);
CFB_ERROR_TYPE(NotInvariantFiberForm);
CFB_ERROR_TYPE(NotHorizontal);
CFB_ERROR_TYPE(FrameExtensionFailure);
CFB_ERROR_TYPE(OddHorizontalDimension);
CFB_ERROR_TYPE(NonFreePoint);
CFB_ERROR_TYPE(DegenerateFiberRestriction);
CFB_ERROR_TYPE(EtaOutsideSlice);
CFB_ERROR_TYPE(NoSolutions);
CFB_ERROR_TYPE(SplittingFailure);
CFB_ERROR_TYPE(PolarBreakdown);
CFB_ERROR_TYPE(ConfigError);
CFB_ERROR_TYPE(ScenarioError);

#undef CFB_ERROR_TYPE

/// Deterministic random source. Uniform doubles are produced from the raw
/// 64-bit stream, so sequences are reproducible bit-for-bit across platforms
/// for a fixed seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t bits() { return eng_(); }

  double uniform() {  // [0,1)
    return static_cast<double>(bits() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; one value per pair keeps the stream layout simple.
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

/// Index-parallel map with order-deterministic results: slot i of the output
/// depends only on i and the (pure) body, never on the thread schedule.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Number of worker threads: explicit value, else CFB_THREADS, else hardware.
int resolve_threads(int requested);

namespace linalg {

/// Orthonormal basis of the null space of A (columns), via SVD.
/// rank_tol is relative to the largest singular value.
Mat null_space(const Mat& A, double rank_tol);

/// Orthonormalize the columns of A, dropping near-dependent ones.
Mat orthonormalize(const Mat& A, double rank_tol = 1e-12);

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases of equal dimension.
double max_principal_angle(const Mat& Q1, const Mat& Q2);

/// Pfaffian of a skew-symmetric matrix of even size, by Parlett-Reid
/// elimination with partial pivoting. Odd size returns 0.
double pfaffian(Mat A);

/// Signed square root of a symmetric positive semidefinite matrix.
Mat sym_sqrt(const Mat& S);

}  // namespace linalg
}  // namespace cfb
