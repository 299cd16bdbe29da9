#pragma once

#include <Eigen/Eigenvalues>
#include <complex>

#include "geomlab/common.hpp"

namespace geomlab {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Gram matrix of the standard symplectic form on R^{2m} in block order
/// (x_1..x_m, y_1..y_m): Omega(u, v) = u^T W v with W = [[0, I], [-I, 0]].
template <typename Scalar>
DenseMatrix<Scalar> standard_symplectic_matrix(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw DimensionMismatch("standard_symplectic_matrix: dimension must be even");
  int m = dim / 2;
  DenseMatrix<Scalar> w = DenseMatrix<Scalar>::Zero(dim, dim);
  for (int i = 0; i < m; ++i) {
    w(i, m + i) = Scalar(1);
    w(m + i, i) = Scalar(-1);
  }
  return w;
}

/// Standard compatible complex structure J0 = [[0, -I], [I, 0]]; W J0 = Id.
template <typename Scalar = double>
DenseMatrix<Scalar> standard_complex_structure(int dim) {
  DenseMatrix<Scalar> w = standard_symplectic_matrix<Scalar>(dim);
  return -w;  // for the standard W, J0 = W^{-1} = -W
}

template <typename Scalar>
void require_spd(const DenseMatrix<Scalar>& g, const char* who) {
  double scale = std::max(1.0, static_cast<double>(g.cwiseAbs().maxCoeff()));
  if (sym_defect(g) > 1e-12 * scale) throw NotSPD(std::string(who) + ": matrix not symmetric");
  Eigen::LLT<DenseMatrix<Scalar>> llt(g);
  if (llt.info() != Eigen::Success) throw NotSPD(std::string(who) + ": matrix not SPD");
}

/// Adjoint with respect to the inner product G: A* = G^{-1} A^T G.
template <typename Scalar>
DenseMatrix<Scalar> g_adjoint(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& g) {
  return Eigen::LLT<DenseMatrix<Scalar>>(g).solve(a.transpose() * g);
}

/// Unique endomorphism with Omega(u, v) = G(A u, v): A = G^{-1} W^T, G-skew.
template <typename Scalar>
DenseMatrix<Scalar> polar_A(const DenseMatrix<Scalar>& omega, const DenseMatrix<Scalar>& g) {
  if (omega.rows() != g.rows() || omega.cols() != g.cols())
    throw DimensionMismatch("polar_A: dimension mismatch");
  if (static_cast<double>((omega + omega.transpose()).cwiseAbs().maxCoeff()) >
      1e-12 * std::max(1.0, static_cast<double>(omega.cwiseAbs().maxCoeff())))
    throw DegenerateForm("polar_A: form is not antisymmetric");
  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(omega);
  if (!lu.isInvertible()) throw DegenerateForm("polar_A: form is degenerate");
  require_spd(g, "polar_A");
  return Eigen::LLT<DenseMatrix<Scalar>>(g).solve(omega.transpose());
}

/// Unique SPD square root via eigendecomposition (Euclidean inner product).
template <typename Scalar>
DenseMatrix<Scalar> spd_sqrt(const DenseMatrix<Scalar>& s) {
  require_spd(s, "spd_sqrt");
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= Scalar(0))
    throw NotSPD("spd_sqrt: nonpositive spectrum");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

/// SPD square root of a G-symmetric positive definite endomorphism, computed
/// in the G inner product: solve the generalized symmetric problem
/// (G S) x = lambda G x, rescale the G-orthonormal eigenbasis.
template <typename Scalar>
DenseMatrix<Scalar> spd_sqrt(const DenseMatrix<Scalar>& s, const DenseMatrix<Scalar>& g) {
  DenseMatrix<Scalar> gs = g * s;
  if (sym_defect(gs) > 1e-10 * std::max(1.0, static_cast<double>(gs.cwiseAbs().maxCoeff())))
    throw NotSPD("spd_sqrt: endomorphism is not G-symmetric");
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> es((gs + gs.transpose()) / 2, g);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= Scalar(0))
    throw NotSPD("spd_sqrt: nonpositive G-spectrum");
  DenseMatrix<Scalar> v = es.eigenvectors();  // V^T G V = Id
  return v * es.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose() * g;
}

/// Eigenvalues of A A* in the G inner product, ascending.
template <typename Scalar>
DenseVector<Scalar> aastar_eigenvalues(const DenseMatrix<Scalar>& a,
                                       const DenseMatrix<Scalar>& g) {
  DenseMatrix<Scalar> s = a * g_adjoint(a, g);
  DenseMatrix<Scalar> gs = g * s;
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> es((gs + gs.transpose()) / 2, g);
  if (es.info() != Eigen::Success) throw NotSPD("aastar_eigenvalues: eigensolve failed");
  return es.eigenvalues();
}

/// Polar factor J = (sqrt(AA*))^{-1} A; squares to -Id and is G-orthogonal.
template <typename Scalar>
DenseMatrix<Scalar> polar_J(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& g) {
  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(a);
  if (!lu.isInvertible()) throw SingularA("polar_J: A is singular");
  DenseMatrix<Scalar> s = a * g_adjoint(a, g);
  DenseMatrix<Scalar> root = spd_sqrt(s, g);
  return Eigen::FullPivLU<DenseMatrix<Scalar>>(root).solve(a);
}

/// Metric of a tame J: g_J(u,v) = (Omega(u, Jv) + Omega(v, Ju))/2.
template <typename Scalar>
DenseMatrix<Scalar> metric_from_J(const DenseMatrix<Scalar>& omega,
                                  const DenseMatrix<Scalar>& j) {
  int n = static_cast<int>(j.rows());
  if ((j * j + DenseMatrix<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw NotAlmostComplex("metric_from_J: J^2 != -Id");
  DenseMatrix<Scalar> wj = omega * j;
  DenseMatrix<Scalar> g = (wj + wj.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(g);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= Scalar(0))
    throw NotTame("metric_from_J: symmetrized form is not positive definite");
  return g;
}

/// The operators of the polar decomposition at one point, bundled with the
/// spectrum of A A*.
template <typename Scalar>
struct PolarDecomposition {
  DenseMatrix<Scalar> A;
  DenseMatrix<Scalar> AAstar;
  DenseMatrix<Scalar> sqrtAAstar;
  DenseMatrix<Scalar> J;
  DenseVector<Scalar> eigenvalues;  // of A A*, ascending
};

template <typename Scalar>
PolarDecomposition<Scalar> polar_decompose(const DenseMatrix<Scalar>& omega,
                                           const DenseMatrix<Scalar>& g) {
  PolarDecomposition<Scalar> p;
  p.A = polar_A(omega, g);
  p.AAstar = p.A * g_adjoint(p.A, g);
  p.sqrtAAstar = spd_sqrt(p.AAstar, g);
  p.J = Eigen::FullPivLU<DenseMatrix<Scalar>>(p.sqrtAAstar).solve(p.A);
  p.eigenvalues = aastar_eigenvalues(p.A, g);
  return p;
}

/// Round trip g_J -> A -> J of a compatible structure reproduces J.
template <typename Scalar>
Scalar retraction_check(const DenseMatrix<Scalar>& omega, const DenseMatrix<Scalar>& j) {
  DenseMatrix<Scalar> g = metric_from_J(omega, j);
  DenseMatrix<Scalar> j2 = polar_J(polar_A(omega, g), g);
  return (j2 - j).cwiseAbs().maxCoeff();
}

/// ||(-J1 J0)(-J0 J1) - Id||: the inverse identity (-J1 J0)^{-1} = -J0 J1.
template <typename Scalar>
Scalar inverse_identity_check(const DenseMatrix<Scalar>& j0, const DenseMatrix<Scalar>& j1) {
  int n = static_cast<int>(j0.rows());
  DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  if ((j0 * j0 + id).cwiseAbs().maxCoeff() > 1e-10 ||
      (j1 * j1 + id).cwiseAbs().maxCoeff() > 1e-10)
    throw NotAlmostComplex("inverse_identity_check: inputs do not square to -Id");
  return ((-j1 * j0) * (-j0 * j1) - id).cwiseAbs().maxCoeff();
}

enum class EigenCase { Real, UnitModulus };

struct ClassifiedEigenvalue {
  std::complex<double> lambda;
  EigenCase tag = EigenCase::Real;
};

/// Tags each eigenvalue of -J1 J0 as real or unit-modulus (tolerance 1e-10);
/// anything else signals a non-compatible input. Unit-modulus eigenvalues must
/// satisfy lambda + 1/lambda >= 0.
inline std::vector<ClassifiedEigenvalue> case_classification(
    const Eigen::VectorXcd& lambdas, double tol = 1e-10) {
  std::vector<ClassifiedEigenvalue> out;
  for (int i = 0; i < lambdas.size(); ++i) {
    std::complex<double> l = lambdas[i];
    ClassifiedEigenvalue c;
    c.lambda = l;
    if (std::fabs(l.imag()) <= tol) {
      c.tag = EigenCase::Real;
    } else if (std::fabs(std::abs(l) - 1.0) <= tol) {
      c.tag = EigenCase::UnitModulus;
      double sum = (l + 1.0 / l).real();
      if (sum < -tol)
        throw Unclassifiable("case_classification: unit-modulus eigenvalue with lambda+1/lambda < 0");
    } else {
      throw Unclassifiable("case_classification: eigenvalue neither real nor unit-modulus");
    }
    out.push_back(c);
  }
  return out;
}

struct PinchingBounds {
  double real_lo = 1.0, real_hi = 1.0;      // Case 1 interval for 1/lambda_{i,t}
  double um_lo = 0.5, um_hi = 1.0;          // Case 2 interval [1/2, 1)
  double envelope_lo = 0.5, envelope_hi = 1.0;
};

/// Two-sided bounds on the reciprocals 1/lambda_{i,t}: real case
/// [1, 1/2 + (C + 1/C)/4], unit-modulus case [1/2, 1), overall envelope
/// [1/2, 1/2 + (C + 1/C)/4].
inline PinchingBounds pinching_bounds(double c) {
  if (c < 1.0) throw NonPositiveInput("pinching_bounds: C must be >= 1");
  PinchingBounds b;
  b.real_hi = 0.5 + 0.25 * (c + 1.0 / c);
  b.envelope_hi = b.real_hi;
  return b;
}

struct JordanSumReport {
  Eigen::VectorXcd m_eigenvalues;
  Eigen::VectorXcd sum_eigenvalues;  // of M + M^{-1}
  double max_match_error = 0.0;
  bool pass = false;
};

/// Multiset comparison: eigenvalues of M + M^{-1} against {lambda + 1/lambda}
/// over the eigenvalues of M, greedily matched nearest-first.
template <typename Scalar>
JordanSumReport jordan_sum_eigenvalues(const DenseMatrix<Scalar>& m, double tol = 1e-8) {
  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(m);
  if (std::fabs(static_cast<double>(lu.determinant())) <= 1e-12)
    throw SingularMatrix("jordan_sum_eigenvalues: |det M| <= 1e-12");
  const int n = static_cast<int>(m.rows());
  bool upper = true, lower = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i > j && m(i, j) != Scalar(0)) upper = false;
      if (i < j && m(i, j) != Scalar(0)) lower = false;
    }
  // Triangular inputs (the representable defective cases) are inverted by
  // back substitution: M + M^{-1} then stays exactly triangular and the
  // eigensolver reads its diagonal instead of scattering the defective
  // eigenvalues by roundoff^(1/k).
  DenseMatrix<Scalar> minv;
  DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  if (upper)
    minv = m.template triangularView<Eigen::Upper>().solve(id);
  else if (lower)
    minv = m.template triangularView<Eigen::Lower>().solve(id);
  else
    minv = lu.inverse();
  DenseMatrix<Scalar> sum = m + minv;
  Eigen::EigenSolver<DenseMatrix<Scalar>> es_m(m, false), es_s(sum, false);
  JordanSumReport rep;
  rep.m_eigenvalues = es_m.eigenvalues().template cast<std::complex<double>>();
  rep.sum_eigenvalues = es_s.eigenvalues().template cast<std::complex<double>>();
  std::vector<std::complex<double>> predicted;
  for (int i = 0; i < rep.m_eigenvalues.size(); ++i) {
    std::complex<double> l = rep.m_eigenvalues[i];
    predicted.push_back(l + 1.0 / l);
  }
  std::vector<bool> used(predicted.size(), false);
  for (int i = 0; i < rep.sum_eigenvalues.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (size_t k = 0; k < predicted.size(); ++k) {
      if (used[k]) continue;
      double d = std::abs(rep.sum_eigenvalues[i] - predicted[k]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(k);
      }
    }
    used[static_cast<size_t>(arg)] = true;
    rep.max_match_error = std::max(rep.max_match_error, best);
  }
  rep.pass = rep.max_match_error <= tol;
  return rep;
}

/// Seeded random compatible structure: draw an SPD matrix with moderate
/// spectrum, run it through the polar pipeline and return the compatible
/// metric it retracts onto (guaranteed member of the retraction domain).
struct CompatiblePair {
  MatrixXd J;
  MatrixXd g;
};

inline CompatiblePair random_compatible_structure(Rng& rng, const MatrixXd& omega) {
  int n = static_cast<int>(omega.rows());
  MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(b);
  MatrixXd q = qr.householderQ();
  VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam[i] = rng.uniform(0.5, 2.0);
  MatrixXd draw = q * lam.asDiagonal() * q.transpose();
  draw = (draw + draw.transpose()) / 2.0;
  CompatiblePair out;
  out.J = polar_J(polar_A(omega, draw), draw);
  out.g = metric_from_J(omega, out.J);
  return out;
}

struct InterpolationRow {
  double t = 0.0;
  VectorXd lambda_measured;       // eigenvalues of A_t A_t*, ascending by reciprocal
  VectorXd recip_measured;        // 1/lambda_{i,t}
  VectorXd recip_predicted;       // from the eigenvalues of -J1 J0
  std::vector<EigenCase> tags;    // matched to the sorted order
  double prediction_residual = 0.0;
  double identity_residual = 0.0;   // (A_t*)^{-1}A_t^{-1} = Id + t(1-t)(-J0J1-J1J0-2Id)
  double j_square_residual = 0.0;   // ||J_t^2 + Id||
  double symmetry_defect = 0.0;     // g_t-symmetry of -J1J0 - J0J1
  double symplectic_residual = 0.0; // Omega(J_t u, J_t v) = Omega(u, v)
  double taming_min = 0.0;          // min Omega(v, J_t v) over unit probes
  double sandwich_violation = 0.0;  // worst signed slack (negative = violation)
};

struct InterpolationDiagnostics {
  std::vector<InterpolationRow> rows;
  double C = 1.0;  // quadratic-form quasi-isometry constant of (g0, g1)
  PinchingBounds bounds;
  double endpoint_residual = 0.0;  // max(||A_0 - J_0||, ||A_1 - J_1||)
  double max_prediction_residual = 0.0;
  double max_identity_residual = 0.0;
  double max_j_square_residual = 0.0;
  double max_symmetry_defect = 0.0;
  double max_symplectic_residual = 0.0;
  double min_taming = std::numeric_limits<double>::infinity();
  double worst_sandwich_violation = 0.0;
  bool pinching_ok = true;
  bool skew_diagnostic_flag = false;  // direct symmetry defect > 10x identity residual
};

/// Runs the full interpolation pipeline g_t = (1-t) g0 + t g1 -> A_t -> J_t
/// over a t grid, recording measured and predicted eigenvalues of A_t A_t*,
/// the matrix identity, compatibility invariants and the sandwich inequality.
InterpolationDiagnostics interpolate_J_path(const MatrixXd& omega, const MatrixXd& g0,
                                            const MatrixXd& g1, const std::vector<double>& t_grid,
                                            uint64_t seed = 20240801, int vectors_per_t = 64);

/// min sqrt(lam) g_t(u,u) <= g_{J_t}(u,u) <= max sqrt(lam) g_t(u,u) on random
/// unit vectors; returns the worst signed slack (negative means violated).
double sandwich_check(const MatrixXd& g_t, const MatrixXd& g_jt, const VectorXd& lambdas,
                      Rng& rng, int vectors = 256);

}  // namespace geomlab
