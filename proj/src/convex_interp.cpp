#include "geomlab/convex_interp.hpp"

#include <Eigen/Eigenvalues>

namespace geomlab {

EndoP endo_P(const MetricField& g0, const MetricField& g1, const VectorXd& x) {
  MatrixXd a = g0.eval(x), b = g1.eval(x);
  EndoP p;
  p.at = x;
  p.matrix = Eigen::LLT<MatrixXd>(a).solve(b);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(b, a);
  if (es.info() != Eigen::Success) throw NotSPD("endo_P: eigensolve failed");
  p.eigenvalues = es.eigenvalues();
  p.lambda_min = p.eigenvalues.minCoeff();
  if (p.lambda_min <= 0.0) throw NotSPD("endo_P: nonpositive eigenvalue");
  return p;
}

ConnectionDifference connection_difference(const MetricField& g0, const MetricField& g1,
                                           const VectorXd& x) {
  const int n = g0.dim();
  if (n != g1.dim()) throw DimensionMismatch("connection_difference: dimension mismatch");
  Tensor3 c0 = christoffel(g0, x), c1 = christoffel(g1, x);
  ConnectionDifference d;
  d.at = x;
  d.components = Tensor3(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d.components(k, i, j) = c1(k, i, j) - c0(k, i, j);
  d.norm = christoffel_norm(d.components, g0.eval(x));
  return d;
}

RsFormulaValue curvature_via_formula(const MetricField& g0, const MetricField& g1, double s,
                                     const VectorXd& x, const VectorXd& u, const VectorXd& v) {
  const int n = g0.dim();
  MatrixXd a = g0.eval(x), b = g1.eval(x);
  Tensor4 r0 = riemann_lowered(g0, x), r1 = riemann_lowered(g1, x);
  ConnectionDifference d = connection_difference(g0, g1, x);

  auto contract = [&](const Tensor4& r) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) sum += r(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
    return sum;
  };

  RsFormulaValue out;
  out.affine_part = (1.0 - s) * contract(r0) + s * contract(r1);

  MatrixXd p = Eigen::LLT<MatrixXd>(a).solve(b);
  MatrixXd op = (1.0 - s) * MatrixXd::Identity(n, n) + s * p;
  Eigen::FullPivLU<MatrixXd> lu(op);
  if (!lu.isInvertible()) throw SingularOperator("curvature_via_formula: (1-s)Id+sP singular");

  VectorXd duv = d.apply(u, v), dvu = d.apply(v, u);
  VectorXd duu = d.apply(u, u), dvv = d.apply(v, v);
  auto pair_g1 = [&](const VectorXd& p1, const VectorXd& p2) {
    return (lu.solve(p1)).dot(b * p2);
  };
  out.pair_uv_vu = pair_g1(duv, dvu);
  out.pair_uu_vv = pair_g1(duu, dvv);
  out.skew_residual = out.pair_uv_vu - pair_g1(dvu, duv);
  out.value = out.affine_part + s * (1.0 - s) * (out.pair_uu_vv - out.pair_uv_vu);
  return out;
}

InverseNormBound inverse_norm_bound(const EndoP& p, double s) {
  InverseNormBound b;
  b.bound = 1.0 / (1.0 - s + s * p.lambda_min);
  b.cap = 1.0 / std::min(1.0, p.lambda_min);
  // ((1-s)Id + sP)^{-1} is g0-symmetric with eigenvalues 1/(1-s+s*mu); its
  // g0-operator norm is the largest of those.
  double measured = 0.0;
  for (int i = 0; i < p.eigenvalues.size(); ++i)
    measured = std::max(measured, 1.0 / (1.0 - s + s * p.eigenvalues[i]));
  b.measured = measured;
  double slack = 1e-12 * (1.0 + b.cap);
  b.ok = (b.measured <= b.bound + slack) && (b.bound <= b.cap + slack);
  return b;
}

double rs_bound(double c0, double c1, double cprime, double lambda_p, double s) {
  if (c0 < 0.0 || c1 < 0.0 || cprime < 0.0 || lambda_p <= 0.0)
    throw NonPositiveInput("rs_bound: constants must be positive");
  return (1.0 - s) * c0 + s * c1 +
         2.0 * s * (1.0 - s) * cprime * cprime / std::min(1.0, lambda_p);
}

QuasiIsometryReport quasi_isometric_ratio(const MetricField& g0, const MetricField& g1,
                                          const std::vector<VectorXd>& samples) {
  if (samples.empty()) throw ConfigError("quasi_isometric_ratio: empty sample set");
  QuasiIsometryReport rep;
  for (const auto& x : samples) {
    VectorXd mu = generalized_metric_eigenvalues(g0, g1, x);
    QuasiIsometrySample s;
    s.at = x;
    s.a_plus = std::sqrt(mu.maxCoeff());
    s.a_minus = std::sqrt(mu.minCoeff());
    for (int i = 0; i < mu.size(); ++i)
      s.m_value = std::max(s.m_value, std::fabs(0.5 * std::log(mu[i])));
    rep.a = std::max({rep.a, s.a_plus, 1.0 / s.a_minus});
    rep.sup_m = std::max(rep.sup_m, s.m_value);
    rep.samples.push_back(std::move(s));
  }
  rep.log_identity_residual = std::fabs(std::log(rep.a) - rep.sup_m);
  return rep;
}

BilipschitzCheck distance_convex_bilipschitz_check(
    const DistanceFn& d0, const DistanceFn& d1, double a, double s,
    const std::vector<std::pair<VectorXd, VectorXd>>& pairs) {
  if (a < 1.0) throw NonPositiveInput("distance_convex_bilipschitz_check: A must be >= 1");
  BilipschitzCheck out;
  int idx = 0;
  for (const auto& [p, q] : pairs) {
    double v0 = d0(p, q), v1 = d1(p, q);
    double vs = (1.0 - s) * v0 + s * v1;
    double slack[4] = {
        vs - ((1.0 - s) + s / a) * v0,
        ((1.0 - s) + s * a) * v0 - vs,
        vs - ((1.0 - s) / a + s) * v1,
        ((1.0 - s) * a + s) * v1 - vs,
    };
    for (double sl : slack) {
      double tol = 1e-12 * (1.0 + vs);
      if (sl < -tol) {
        out.pass = false;
        if (sl < out.worst_violation) {
          out.worst_violation = sl;
          out.violating_pair = idx;
        }
      }
      out.worst_violation = std::min(out.worst_violation, sl);
    }
    ++idx;
  }
  return out;
}

ConvexPathSweep convex_path_sweep(const MetricField& g0, const MetricField& g1,
                                  const std::vector<double>& s_grid,
                                  const std::vector<VectorXd>& samples, uint64_t seed,
                                  const SweepOptions& opts) {
  const int probe_pairs = opts.probe_pairs;
  const double margin = opts.margin;
  if (samples.empty() || s_grid.empty()) throw ConfigError("convex_path_sweep: empty grid");
  const int n = g0.dim();
  ConvexPathSweep sweep;
  sweep.s_grid = s_grid;
  Rng rng(seed);

  // Per sample: g0-orthonormalized probe pairs (X, Y). The first pair is the
  // first two frame vectors; the rest are random rotations of the frame.
  struct Probe {
    VectorXd x;
    std::vector<std::pair<VectorXd, VectorXd>> pairs;
  };
  std::vector<Probe> probes;
  for (const auto& x : samples) {
    Probe pr;
    pr.x = x;
    MatrixXd e = orthonormal_columns(g0.eval(x));
    pr.pairs.emplace_back(e.col(0), e.col(1));
    for (int k = 1; k < probe_pairs; ++k) {
      VectorXd c1 = rng.unit_vector(n), c2 = rng.unit_vector(n);
      // Gram-Schmidt in the Euclidean coefficient space keeps the pair
      // independent; E maps it to a g0-orthonormal pair.
      c2 -= c1.dot(c2) * c1;
      while (c2.norm() < 1e-8) {
        c2 = rng.unit_vector(n);
        c2 -= c1.dot(c2) * c1;
      }
      c2.normalize();
      pr.pairs.emplace_back(e * c1, e * c2);
    }
    probes.push_back(std::move(pr));
  }

  // Constants measured over the same samples and probe directions.
  double c0 = 0.0, c1m = 0.0, cprime = 0.0, lambda_p = std::numeric_limits<double>::infinity();
  for (const auto& pr : probes) {
    Tensor4 r0 = riemann_lowered(g0, pr.x), r1 = riemann_lowered(g1, pr.x);
    ConnectionDifference d = connection_difference(g0, g1, pr.x);
    MatrixXd b = g1.eval(pr.x);
    EndoP p = endo_P(g0, g1, pr.x);
    lambda_p = std::min(lambda_p, p.lambda_min);
    auto quad = [&](const Tensor4& r, const VectorXd& u, const VectorXd& v) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) sum += r(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
      return sum;
    };
    auto g1_len = [&](const VectorXd& w) { return std::sqrt(w.dot(b * w)); };
    for (const auto& [u, v] : pr.pairs) {
      c0 = std::max(c0, std::fabs(quad(r0, u, v)));
      c1m = std::max(c1m, std::fabs(quad(r1, u, v)));
      cprime = std::max({cprime, g1_len(d.apply(u, v)), g1_len(d.apply(u, u)),
                         g1_len(d.apply(v, v))});
    }
  }
  sweep.c0 = c0;
  sweep.c1 = c1m;
  sweep.cprime = cprime * (1.0 + margin);
  sweep.lambda_p = lambda_p;

  const int ns = static_cast<int>(s_grid.size());
  struct PerS {
    std::vector<ConvexPathCell> cells;
    double sup_rs = 0.0;
    double sup_drs = 0.0;
  };
  std::vector<PerS> per_s(ns);

  parallel_for(ns, opts.workers, [&](int si) {
    double s = s_grid[si];
    MetricField gs = convex_sum(g0, g1, s);
    PerS& out = per_s[si];
    for (const auto& pr : probes) {
      Tensor4 rs = riemann_lowered(gs, pr.x);
      MatrixXd gsm = gs.eval(pr.x);
      if (opts.compute_drs)
        out.sup_drs =
            std::max(out.sup_drs, covd_riemann_norm(covariant_derivative_R(gs, pr.x), gsm));
      for (const auto& [u, v] : pr.pairs) {
        double direct = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) direct += rs(i, j, k, l) * u[i] * v[j] * v[k] * u[l];
        out.sup_rs = std::max(out.sup_rs, std::fabs(direct));

        RsFormulaValue f = curvature_via_formula(g0, g1, s, pr.x, u, v);
        ConvexPathCell cell;
        cell.s = s;
        cell.x = pr.x;
        cell.r_formula = f.value;
        cell.r_direct = direct;
        cell.abs_err = std::fabs(f.value - direct);
        double guu = u.dot(gsm * u), gvv = v.dot(gsm * v), guv = u.dot(gsm * v);
        double plane = guu * gvv - guv * guv;
        double denom = std::max({std::fabs(f.value), std::fabs(direct),
                                 rs.frobenius() * plane, 1e-300});
        cell.rel_err = cell.abs_err / denom;
        out.cells.push_back(std::move(cell));
      }
    }
  });

  for (int si = 0; si < ns; ++si) {
    const PerS& out = per_s[si];
    double bound = rs_bound(sweep.c0, sweep.c1, sweep.cprime, sweep.lambda_p, s_grid[si]);
    sweep.sup_rs.push_back(out.sup_rs);
    sweep.sup_drs.push_back(out.sup_drs);
    sweep.bound.push_back(bound);
    if (out.sup_rs > bound + 1e-12 * (1.0 + bound)) sweep.bound_ok = false;
    for (const auto& c : out.cells) {
      sweep.max_rel_err = std::max(sweep.max_rel_err, c.rel_err);
      sweep.cells.push_back(c);
    }
  }
  return sweep;
}

}  // namespace geomlab
