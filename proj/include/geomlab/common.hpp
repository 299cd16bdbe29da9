#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace geomlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define GEOMLAB_ERROR_TYPE(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

GEOMLAB_ERROR_TYPE(OutOfDomain);
GEOMLAB_ERROR_TYPE(NotSPD);
GEOMLAB_ERROR_TYPE(StepTooLarge);
GEOMLAB_ERROR_TYPE(DimensionMismatch);
GEOMLAB_ERROR_TYPE(BadSymmetry);
GEOMLAB_ERROR_TYPE(DegeneratePlane);
GEOMLAB_ERROR_TYPE(SingularOperator);
GEOMLAB_ERROR_TYPE(StepRejected);
GEOMLAB_ERROR_TYPE(NoConvergence);
GEOMLAB_ERROR_TYPE(OutOfNormalBall);
GEOMLAB_ERROR_TYPE(NonPositiveInput);
GEOMLAB_ERROR_TYPE(SingularJacobian);
GEOMLAB_ERROR_TYPE(NotTame);
GEOMLAB_ERROR_TYPE(SingularA);
GEOMLAB_ERROR_TYPE(DegenerateForm);
GEOMLAB_ERROR_TYPE(SingularMatrix);
GEOMLAB_ERROR_TYPE(NotAlmostComplex);
GEOMLAB_ERROR_TYPE(Unclassifiable);
GEOMLAB_ERROR_TYPE(ConfigError);

#undef GEOMLAB_ERROR_TYPE

/// Thrown when a geodesic leaves its chart before the requested time.
class LeftDomain : public Error {
 public:
  explicit LeftDomain(double exit_time)
      : Error("LeftDomain at t=" + std::to_string(exit_time)),
        exit_time(exit_time) {}
  double exit_time;
};

// Dense value-indexed tensors of ranks 3..6. Dimensions here never exceed 8,
// so flat std::vector storage is plenty.
template <int Rank>
class Tensor {
 public:
  Tensor() : n_(0) {}
  explicit Tensor(int n) : n_(n), a_(static_cast<size_t>(ipow(n, Rank)), 0.0) {}

  int dim() const { return n_; }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return a_[flat(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return a_[flat(idx...)];
  }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::fabs(v));
    return m;
  }
  double frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

 private:
  static size_t ipow(int b, int e) {
    size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<size_t>(b);
    return r;
  }
  template <typename... I>
  size_t flat(I... idx) const {
    size_t f = 0;
    for (int i : {static_cast<int>(idx)...}) f = f * static_cast<size_t>(n_) + static_cast<size_t>(i);
    return f;
  }
  int n_;
  std::vector<double> a_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;
using Tensor6 = Tensor<6>;

/// Deterministic RNG. Distribution helpers are hand-rolled so that output
/// streams are reproducible independent of the standard library build.
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  double normal() {
    // Box-Muller; one value per call keeps the stream simple.
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  VectorXd normal_vector(int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  VectorXd unit_vector(int n) {
    VectorXd v = normal_vector(n);
    double norm = v.norm();
    while (norm < 1e-12) {
      v = normal_vector(n);
      norm = v.norm();
    }
    return v / norm;
  }
  VectorXd in_ball(const VectorXd& center, double radius) {
    const int n = static_cast<int>(center.size());
    VectorXd dir = unit_vector(n);
    double r = radius * std::pow(uniform01(), 1.0 / n);
    return center + r * dir;
  }

 private:
  uint64_t s_;
};

/// 17-significant-digit decimal formatting: round-trips IEEE-754 doubles.
inline std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Cholesky-based orthonormalization: columns of the result are a g-orthonormal
/// basis expressed in chart coordinates (E^T g E = Id).
inline MatrixXd orthonormal_columns(const MatrixXd& g) {
  Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw NotSPD("orthonormal_columns: matrix not SPD");
  MatrixXd L = llt.matrixL();
  return L.transpose().triangularView<Eigen::Upper>().solve(
      MatrixXd::Identity(g.rows(), g.cols()));
}

template <typename Derived>
double sym_defect(const Eigen::MatrixBase<Derived>& m) {
  return static_cast<double>((m - m.transpose()).cwiseAbs().maxCoeff());
}

/// Static-partition parallel map over [0, n). Results must be written to
/// index-addressed slots; the partition is deterministic, so output content is
/// independent of the worker count.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace geomlab
