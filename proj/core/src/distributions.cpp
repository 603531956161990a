// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "btf/errors.hpp"

namespace btf {

Cholesky cholesky_spd(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument(what + ": not square");
  if (!m.allFinite()) throw NumericalError(what);
  Cholesky llt(m);
  if (llt.info() == Eigen::Success) return llt;

  const auto d = static_cast<double>(m.rows());
  const double jitter = 1e-6 * m.trace() / d;
  if (jitter > 0.0) {
    Matrix loaded = m;
    loaded.diagonal().array() += jitter;
    llt.compute(loaded);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw NumericalError(what);
}

bool is_spd(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || !m.allFinite()) return false;
  const double tol = 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().array() > tol).any()) return false;
  return Cholesky(m).info() == Eigen::Success;
}

Matrix sample_wishart(const Matrix& scale, double dof, CounterRng& rng) {
  const auto d = scale.rows();
  if (dof < static_cast<double>(d)) {
    throw std::invalid_argument("wishart degrees of freedom must be >= dimension");
  }
  const Cholesky factor = cholesky_spd(scale, "scale matrix not SPD");

  std::normal_distribution<double> normal;
  Matrix bartlett = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    std::chi_squared_distribution<double> chi2(dof - static_cast<double>(i));
    bartlett(i, i) = std::sqrt(chi2(rng));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = normal(rng);
  }
  const Matrix la = factor.matrixL() * bartlett;
  Matrix sample = la * la.transpose();
  return 0.5 * (sample + sample.transpose());
}

Vector sample_mvn(const Vector& mean, const Cholesky& precision_factor, CounterRng& rng) {
  std::normal_distribution<double> normal;
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  // precision = L L^T, so x = mean + L^-T z has covariance (L L^T)^-1.
  precision_factor.matrixU().solveInPlace(z);
  return mean + z;
}

Vector sample_mvn(const Vector& mean, const Matrix& precision, CounterRng& rng) {
  if (precision.rows() != mean.size()) throw std::invalid_argument("sample_mvn: size mismatch");
  return sample_mvn(mean, cholesky_spd(precision, "precision not SPD"), rng);
}

}  // namespace btf
