#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "geomlab/common.hpp"

namespace geomlab {

/// Coordinate ball serving as the chart of a metric field. `periods` holds an
/// optional period per coordinate (0 = aperiodic); it is consulted only by the
/// meeting-defect and distance computations, never by the domain test.
struct ChartDomain {
  VectorXd center;
  double radius = 0.0;
  VectorXd periods;  // empty or per-coordinate period, 0 meaning none

  ChartDomain() = default;
  ChartDomain(VectorXd c, double r) : center(std::move(c)), radius(r) {
    if (radius <= 0.0) throw NonPositiveInput("ChartDomain: radius must be positive");
  }
  ChartDomain(VectorXd c, double r, VectorXd per) : ChartDomain(std::move(c), r) {
    periods = std::move(per);
  }

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const VectorXd& x, double margin = 0.0) const {
    return (x - center).norm() <= radius - margin;
  }
  double period(int i) const {
    return (periods.size() > i && i >= 0) ? periods[i] : 0.0;
  }
  /// Coordinate difference a-b with periodic coordinates wrapped to the
  /// shortest representative.
  VectorXd wrap_difference(const VectorXd& a, const VectorXd& b) const {
    VectorXd d = a - b;
    for (int i = 0; i < d.size(); ++i) {
      double p = period(i);
      if (p > 0.0) d[i] -= p * std::round(d[i] / p);
    }
    return d;
  }
  bool same_as(const ChartDomain& o) const {
    if (dim() != o.dim() || radius != o.radius) return false;
    if ((center - o.center).norm() > 0.0) return false;
    VectorXd pa = periods.size() ? periods : VectorXd::Zero(dim());
    VectorXd pb = o.periods.size() ? o.periods : VectorXd::Zero(dim());
    return (pa - pb).norm() == 0.0;
  }
};

enum class DerivMode { Analytic, FiniteDifference };

/// Smooth metric coefficient field g_ij on a chart ball, with derivative
/// access up to order three, either from closed-form partials or by central
/// differences of the coefficient callable.
class MetricField {
 public:
  using CoeffFn = std::function<MatrixXd(const VectorXd&)>;
  using D1Fn = std::function<MatrixXd(const VectorXd&, int)>;
  using D2Fn = std::function<MatrixXd(const VectorXd&, int, int)>;
  using D3Fn = std::function<MatrixXd(const VectorXd&, int, int, int)>;

  MetricField() = default;

  static MetricField analytic(int dim, std::string label, ChartDomain domain,
                              CoeffFn coeff, D1Fn d1, D2Fn d2, D3Fn d3);
  static MetricField finite_difference(int dim, std::string label, ChartDomain domain,
                                       CoeffFn coeff);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const ChartDomain& domain() const { return domain_; }
  DerivMode mode() const { return mode_; }
  bool has_analytic_partials() const { return static_cast<bool>(d1_); }

  double fd_step1() const { return h1_; }
  double fd_step23() const { return h23_; }
  void set_fd_steps(double h1, double h23);

  /// Copy of the field evaluating derivatives in the given mode. Switching to
  /// Analytic requires closed-form partials.
  MetricField with_mode(DerivMode mode) const;

  /// Metric coefficients at x. Checks the chart domain, symmetry and positive
  /// definiteness.
  MatrixXd eval(const VectorXd& x) const;
  /// Same without the checks; used by derivative stencils and integrators.
  MatrixXd eval_raw(const VectorXd& x) const { return coeff_(x); }

  MatrixXd partial1(const VectorXd& x, int i) const;
  MatrixXd partial2(const VectorXd& x, int i, int j) const;
  MatrixXd partial3(const VectorXd& x, int i, int j, int k) const;

  /// Unchecked variants for integrator stages that may poke just outside the
  /// chart ball.
  MatrixXd partial1_raw(const VectorXd& x, int i) const;
  MatrixXd partial2_raw(const VectorXd& x, int i, int j) const;
  MatrixXd partial3_raw(const VectorXd& x, int i, int j, int k) const;

  void require_margin(const VectorXd& x, int order) const;

 private:
  int dim_ = 0;
  std::string label_;
  ChartDomain domain_;
  DerivMode mode_ = DerivMode::Analytic;
  double h1_ = 0.0, h23_ = 0.0;
  CoeffFn coeff_;
  D1Fn d1_;
  D2Fn d2_;
  D3Fn d3_;
};

MetricField convex_sum(const MetricField& g0, const MetricField& g1, double s);

/// Interpolation path s -> (1-s) g0 + s g1 between two fields on a shared
/// chart; at(0) and at(1) reproduce the endpoints entrywise.
struct MetricPath {
  MetricField g0;
  MetricField g1;

  MetricPath(MetricField a, MetricField b) : g0(std::move(a)), g1(std::move(b)) {
    if (g0.dim() != g1.dim() || !g0.domain().same_as(g1.domain()))
      throw DimensionMismatch("MetricPath: endpoints live on different charts");
  }
  MetricField at(double s) const { return convex_sum(g0, g1, s); }
};

/// Gallery constructor: flat | scaled:<c> | sphere:<r> | poincare-disk |
/// half-plane | cigar | polyrand:<seed>:<amplitude> | cylinder:<r>.
/// The chart may be overridden to put two gallery fields on a common domain.
MetricField gallery_field(const std::string& label, int dim,
                          std::optional<ChartDomain> domain = std::nullopt);

/// Metric field from a symmetric polynomial coefficient matrix (closed-form
/// partials of all orders).
MetricField polynomial_field(std::vector<std::vector<class Polynomial>> entries,
                             std::string label, ChartDomain domain);

/// Truncated normal-coordinate expansion of a metric from curvature data at
/// the origin: identity plus quadratic (R), cubic (DR) and quartic
/// (D2R and R*R) corrections. The input arrays use the expansion's own sign
/// convention, which for a 2D space form of curvature K puts R(1,2,2,1) = -K;
/// riemann_lowered() of the resulting field at 0 equals minus the input.
MetricField taylor_normal_metric(const Tensor4& R, const Tensor5& DR,
                                 const Tensor6& D2R, double radius);

/// Smallest A >= 1 with (1/A) g0(u,u) <= g1(u,u) <= A g0(u,u) over the sample
/// set, from extreme generalized eigenvalues of (g1, g0). Quadratic-form
/// level: the norm-level ratio of the same pair is sqrt of this value.
double quadratic_quasi_isometry_constant(const MetricField& g0, const MetricField& g1,
                                         const std::vector<VectorXd>& samples);

/// Generalized eigenvalues of (g1(x), g0(x)), ascending.
VectorXd generalized_metric_eigenvalues(const MetricField& g0, const MetricField& g1,
                                        const VectorXd& x);

}  // namespace geomlab
