#include "geomlab/symplectic_polar.hpp"

#include <algorithm>
#include <numeric>

namespace geomlab {

double sandwich_check(const MatrixXd& g_t, const MatrixXd& g_jt, const VectorXd& lambdas,
                      Rng& rng, int vectors) {
  if (g_t.rows() != g_jt.rows()) throw DimensionMismatch("sandwich_check: dimension mismatch");
  double lo = std::sqrt(lambdas.minCoeff());
  double hi = std::sqrt(lambdas.maxCoeff());
  double worst = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(g_t.rows());
  for (int k = 0; k < vectors; ++k) {
    VectorXd u = rng.unit_vector(n);
    double qt = u.dot(g_t * u);
    double qj = u.dot(g_jt * u);
    double slack_lo = qj - lo * qt;
    double slack_hi = hi * qt - qj;
    worst = std::min({worst, slack_lo, slack_hi});
  }
  return worst;
}

InterpolationDiagnostics interpolate_J_path(const MatrixXd& omega, const MatrixXd& g0,
                                            const MatrixXd& g1, const std::vector<double>& t_grid,
                                            uint64_t seed, int vectors_per_t) {
  const int n = static_cast<int>(omega.rows());
  if (g0.rows() != n || g1.rows() != n)
    throw DimensionMismatch("interpolate_J_path: dimension mismatch");
  MatrixXd id = MatrixXd::Identity(n, n);

  MatrixXd j0 = polar_J(polar_A(omega, g0), g0);
  MatrixXd j1 = polar_J(polar_A(omega, g1), g1);
  // Endpoints must be compatible images of metric_from_J (retraction domain).
  double scale0 = std::max(1.0, g0.cwiseAbs().maxCoeff());
  double scale1 = std::max(1.0, g1.cwiseAbs().maxCoeff());
  if ((metric_from_J(omega, j0) - g0).cwiseAbs().maxCoeff() > 1e-8 * scale0 ||
      (metric_from_J(omega, j1) - g1).cwiseAbs().maxCoeff() > 1e-8 * scale1)
    throw NotTame("interpolate_J_path: endpoint metric is not polar-compatible with Omega");

  InterpolationDiagnostics diag;

  // quadratic-form quasi-isometry constant of the endpoint pair
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(g1, g0);
  if (ges.info() != Eigen::Success) throw NotSPD("interpolate_J_path: endpoint eigensolve failed");
  VectorXd mu = ges.eigenvalues();
  diag.C = std::max({1.0, mu.maxCoeff(), 1.0 / mu.minCoeff()});
  diag.bounds = pinching_bounds(diag.C);

  // predictions from the eigenvalues of -J1 J0
  Eigen::EigenSolver<MatrixXd> es(-j1 * j0, false);
  Eigen::VectorXcd lam = es.eigenvalues();
  auto tags = case_classification(lam);
  std::vector<double> sum_re(n);
  for (int i = 0; i < n; ++i) sum_re[i] = (lam[i] + 1.0 / lam[i]).real();

  MatrixXd skew_sum = -j1 * j0 - j0 * j1;
  Rng rng(seed);

  for (double t : t_grid) {
    MatrixXd gt = (1.0 - t) * g0 + t * g1;
    MatrixXd at = polar_A(omega, gt);
    MatrixXd jt = polar_J(at, gt);
    InterpolationRow row;
    row.t = t;

    row.lambda_measured = aastar_eigenvalues(at, gt);
    const int m = static_cast<int>(row.lambda_measured.size());
    row.recip_measured = VectorXd(m);
    for (int i = 0; i < m; ++i) row.recip_measured[i] = 1.0 / row.lambda_measured[i];

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> pred(n);
    for (int i = 0; i < n; ++i) pred[i] = 1.0 + t * (1.0 - t) * (sum_re[i] - 2.0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pred[a] < pred[b]; });
    row.recip_predicted = VectorXd(n);
    row.tags.resize(n);
    for (int i = 0; i < n; ++i) {
      row.recip_predicted[i] = pred[order[i]];
      row.tags[i] = tags[order[i]].tag;
    }
    VectorXd recip_sorted = row.recip_measured;
    std::sort(recip_sorted.data(), recip_sorted.data() + m);
    row.recip_measured = recip_sorted;
    // measured lambda re-sorted to match the reciprocal order
    for (int i = 0; i < m; ++i) row.lambda_measured[i] = 1.0 / recip_sorted[i];
    row.prediction_residual = (row.recip_measured - row.recip_predicted).cwiseAbs().maxCoeff();

    // matrix identity (A_t*)^{-1} A_t^{-1} = Id + t(1-t)(-J0J1 - J1J0 - 2 Id)
    MatrixXd at_inv = at.inverse();
    MatrixXd astar_inv = g_adjoint(at, gt).inverse();
    MatrixXd lhs = astar_inv * at_inv;
    MatrixXd rhs = id + t * (1.0 - t) * (skew_sum - 2.0 * id);
    row.identity_residual = (lhs - rhs).cwiseAbs().maxCoeff();

    row.j_square_residual = (jt * jt + id).cwiseAbs().maxCoeff();

    MatrixXd gs = gt * skew_sum;
    row.symmetry_defect = (gs - gs.transpose()).cwiseAbs().maxCoeff();

    double symp = 0.0, taming = std::numeric_limits<double>::infinity();
    for (int k = 0; k < vectors_per_t; ++k) {
      VectorXd u = rng.unit_vector(n), v = rng.unit_vector(n);
      double w_uv = u.dot(omega * v);
      double w_j = (jt * u).dot(omega * (jt * v));
      symp = std::max(symp, std::fabs(w_j - w_uv));
      taming = std::min(taming, v.dot(omega * (jt * v)));
    }
    row.symplectic_residual = symp;
    row.taming_min = taming;

    MatrixXd g_jt = metric_from_J(omega, jt);
    row.sandwich_violation = sandwich_check(gt, g_jt, row.lambda_measured, rng, vectors_per_t);

    for (int i = 0; i < m; ++i) {
      double r = row.recip_measured[i];
      double tol = 1e-10 * (1.0 + diag.bounds.envelope_hi);
      if (r < diag.bounds.envelope_lo - tol || r > diag.bounds.envelope_hi + tol)
        diag.pinching_ok = false;
    }
    if (row.symmetry_defect > 10.0 * std::max(row.identity_residual, 1e-14))
      diag.skew_diagnostic_flag = true;

    diag.max_prediction_residual = std::max(diag.max_prediction_residual, row.prediction_residual);
    diag.max_identity_residual = std::max(diag.max_identity_residual, row.identity_residual);
    diag.max_j_square_residual = std::max(diag.max_j_square_residual, row.j_square_residual);
    diag.max_symmetry_defect = std::max(diag.max_symmetry_defect, row.symmetry_defect);
    diag.max_symplectic_residual = std::max(diag.max_symplectic_residual, row.symplectic_residual);
    diag.min_taming = std::min(diag.min_taming, row.taming_min);
    diag.worst_sandwich_violation = std::min(diag.worst_sandwich_violation, row.sandwich_violation);
    diag.rows.push_back(std::move(row));
  }

  MatrixXd a0 = polar_A(omega, g0), a1 = polar_A(omega, g1);
  diag.endpoint_residual = std::max((a0 - j0).cwiseAbs().maxCoeff(),
                                    (a1 - j1).cwiseAbs().maxCoeff());
  return diag;
}

}  // namespace geomlab
