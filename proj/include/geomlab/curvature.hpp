#pragma once

#include "geomlab/metric_field.hpp"

namespace geomlab {

/// Christoffel symbols Gamma^k_ij, indexed (k, i, j).
Tensor3 christoffel(const MetricField& field, const VectorXd& x);

/// d_m Gamma^k_ij, indexed (m, k, i, j).
Tensor4 christoffel_partial(const MetricField& field, const VectorXd& x);

/// d_n d_m Gamma^k_ij, indexed (n, m, k, i, j).
Tensor5 christoffel_second_partial(const MetricField& field, const VectorXd& x);

/// Lowered curvature tensor R_ijkl = g(R(d_i,d_j)d_k, d_l) with
/// R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z. In this convention
/// R(u,v,v,u) is the sectional numerator and the round sphere is positive.
Tensor4 riemann_lowered(const MetricField& field, const VectorXd& x);

/// Coordinate derivative d_m R_ijkl, indexed (m, i, j, k, l).
Tensor5 riemann_partial(const MetricField& field, const VectorXd& x);

/// Covariant derivative R_ijkl;m, indexed (i, j, k, l, m).
Tensor5 covariant_derivative_R(const MetricField& field, const VectorXd& x);

/// Sectional curvature of span{u, v}.
double sectional(const MetricField& field, const VectorXd& x, const VectorXd& u,
                 const VectorXd& v);

double sectional_from_tensor(const Tensor4& R, const MatrixXd& g, const VectorXd& u,
                             const VectorXd& v);

/// Worst violation of the algebraic curvature symmetries
/// R_ijkl = -R_jikl = -R_ijlk = R_klij.
double riemann_symmetry_residual(const Tensor4& R);
/// Worst violation of R_ijkl + R_iklj + R_iljk = 0.
double first_bianchi_residual(const Tensor4& R);
/// Worst violation of the cyclic sum of R_ijkl;m in (k, l, m).
double second_bianchi_residual(const Tensor5& DR);

/// Frobenius norms of tensors with all slots orthonormalized by the field's
/// own metric at the point.
double riemann_norm(const Tensor4& R, const MatrixXd& g);
double covd_riemann_norm(const Tensor5& DR, const MatrixXd& g);
double christoffel_norm(const Tensor3& gamma, const MatrixXd& g);

struct CurvatureSample {
  VectorXd at;
  Tensor3 gamma;
  Tensor4 riemann;
  std::vector<double> sectional_values;  // over coordinate-plane pairs i<j
  Tensor5 covd_riemann;
  double norm_R = 0.0;
  double norm_DR = 0.0;
  double norm_gamma = 0.0;
};

CurvatureSample curvature_sample(const MetricField& field, const VectorXd& x);

/// Flat CSV row: point coords, Gamma entries lexicographic in (k,i,j),
/// R entries lexicographic in (i,j,k,l), then norm_R, norm_DR, norm_gamma.
std::string curvature_csv_header(int dim);
std::string curvature_csv_row(const CurvatureSample& s);
std::string curvature_json(const CurvatureSample& s);

struct NormEstimate {
  double sup_R = 0.0;
  double sup_DR = 0.0;
  double sup_gamma = 0.0;
};

/// Suprema of pointwise tensor norms over a finite sample set. These are
/// sampled estimates, not global suprema.
NormEstimate curvature_norm_estimate(const MetricField& field,
                                     const std::vector<VectorXd>& samples);

}  // namespace geomlab
