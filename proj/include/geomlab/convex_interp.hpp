#pragma once

#include <functional>

#include "geomlab/curvature.hpp"

namespace geomlab {

/// Endomorphism P with g0(PX, Y) = g1(X, Y); matrix g0^{-1} g1, self-adjoint
/// with respect to g0 with positive spectrum (the generalized eigenvalues of
/// (g1, g0)).
struct EndoP {
  VectorXd at;
  MatrixXd matrix;
  VectorXd eigenvalues;  // ascending
  double lambda_min = 0.0;
};

EndoP endo_P(const MetricField& g0, const MetricField& g1, const VectorXd& x);

/// Difference of Levi-Civita connections D^k_ij = Gamma^k_ij(g1) - Gamma^k_ij(g0),
/// a (1,2)-tensor symmetric in the lower indices.
struct ConnectionDifference {
  VectorXd at;
  Tensor3 components;  // (k, i, j)
  double norm = 0.0;   // Frobenius in a g0-orthonormal frame

  VectorXd apply(const VectorXd& u, const VectorXd& v) const {
    const int n = components.dim();
    VectorXd w = VectorXd::Zero(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[k] += components(k, i, j) * u[i] * v[j];
    return w;
  }
};

ConnectionDifference connection_difference(const MetricField& g0, const MetricField& g1,
                                           const VectorXd& x);

/// Convex-sum curvature formula evaluated term by term. `value` is the full
/// right-hand side; the two pairings are kept separate so the skew combination
/// printed in some statements of the formula (which vanishes identically for
/// the symmetric tensor D) can be reported as a diagnostic.
struct RsFormulaValue {
  double value = 0.0;
  double affine_part = 0.0;    // (1-s) R0(u,v,v,u) + s R1(u,v,v,u)
  double pair_uu_vv = 0.0;     // g1(Q D(u,u), D(v,v))
  double pair_uv_vu = 0.0;     // g1(Q D(u,v), D(v,u))
  double skew_residual = 0.0;  // g1(Q D(u,v), D(v,u)) - g1(Q D(v,u), D(u,v))
};

RsFormulaValue curvature_via_formula(const MetricField& g0, const MetricField& g1, double s,
                                     const VectorXd& x, const VectorXd& u, const VectorXd& v);

/// 1/(1-s+s*lambda_P) together with the measured g0-operator norm of
/// ((1-s)Id + sP)^{-1} and the global cap 1/min{1, lambda_P}.
struct InverseNormBound {
  double bound = 0.0;
  double measured = 0.0;
  double cap = 0.0;
  bool ok = false;  // measured <= bound <= cap (within 1e-12 slack)
};

InverseNormBound inverse_norm_bound(const EndoP& p, double s);

/// (1-s) C0 + s C1 + 2 s (1-s) (Cprime)^2 / min{1, lambda_P}.
double rs_bound(double c0, double c1, double cprime, double lambda_p, double s);

struct QuasiIsometrySample {
  VectorXd at;
  double a_plus = 0.0;   // sup |v|_g1 over |v|_g0 = 1
  double a_minus = 0.0;  // inf |v|_g1 over |v|_g0 = 1
  double m_value = 0.0;  // max_i |log(mu_i)/2|
};

struct QuasiIsometryReport {
  std::vector<QuasiIsometrySample> samples;
  double a = 1.0;             // norm-level ratio over the sample set
  double sup_m = 0.0;
  double log_identity_residual = 0.0;  // |log a - sup_m|
};

QuasiIsometryReport quasi_isometric_ratio(const MetricField& g0, const MetricField& g1,
                                          const std::vector<VectorXd>& samples);

using DistanceFn = std::function<double(const VectorXd&, const VectorXd&)>;

struct BilipschitzCheck {
  bool pass = true;
  double worst_violation = 0.0;  // most negative slack across all inequalities
  int violating_pair = -1;
};

/// Convex sums of A-bilipschitz distance functions stay A-bilipschitz:
/// checks both two-sided inequalities for d_s = (1-s) d0 + s d1 on each pair.
BilipschitzCheck distance_convex_bilipschitz_check(
    const DistanceFn& d0, const DistanceFn& d1, double a, double s,
    const std::vector<std::pair<VectorXd, VectorXd>>& pairs);

/// Sweep cell of the formula-vs-direct comparison.
struct ConvexPathCell {
  double s = 0.0;
  VectorXd x;
  double r_formula = 0.0;
  double r_direct = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

struct ConvexPathSweep {
  std::vector<ConvexPathCell> cells;
  std::vector<double> s_grid;
  std::vector<double> sup_rs;      // per s: max |R_s(X,Y,Y,X)| over probes
  std::vector<double> bound;       // per s: rs_bound from measured constants
  std::vector<double> sup_drs;     // per s: max DR_s norm over samples
  double c0 = 0.0, c1 = 0.0, cprime = 0.0, lambda_p = 0.0;
  double max_rel_err = 0.0;
  bool bound_ok = true;
};

struct SweepOptions {
  int probe_pairs = 4;
  double margin = 0.05;     // slack factor on the measured C'
  bool compute_drs = true;  // also record sup ||DR_s|| per s
  int workers = 1;
};

/// Runs the full oracle sweep: formula vs direct curvature of convex_sum on an
/// s-grid times a sample set, plus the explicit curvature bound check with all
/// constants measured on the same samples and probe directions. Probe pairs
/// are g0-orthonormalized; D is measured with g0-unit inputs and g1-length
/// output, which is the convention that makes the bound self-consistent.
ConvexPathSweep convex_path_sweep(const MetricField& g0, const MetricField& g1,
                                  const std::vector<double>& s_grid,
                                  const std::vector<VectorXd>& samples, uint64_t seed,
                                  const SweepOptions& opts = {});

}  // namespace geomlab
