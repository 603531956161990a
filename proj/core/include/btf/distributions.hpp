// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <Eigen/Dense>

#include "btf/random.hpp"

namespace btf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Cholesky = Eigen::LLT<Matrix>;

/// Cholesky factor of a symmetric matrix. On failure the diagonal is loaded
/// with 1e-6 * trace/D and the factorization retried once; a second failure
/// throws NumericalError(`what`).
Cholesky cholesky_spd(const Matrix& m, const std::string& what);

/// Draw from Wishart(scale, dof) by the Bartlett decomposition: with
/// L = chol(scale) and A lower triangular (A_ii = sqrt(chi2(dof - i)),
/// A_ij ~ N(0,1) below the diagonal), the sample is L A A^T L^T.
/// Requires dof >= D; throws NumericalError("scale matrix not SPD").
Matrix sample_wishart(const Matrix& scale, double dof, CounterRng& rng);

/// Draw from Normal(mean, precision^-1). Uses the Cholesky factor of the
/// precision and a triangular solve; the covariance is never formed.
/// Throws NumericalError("precision not SPD").
Vector sample_mvn(const Vector& mean, const Matrix& precision, CounterRng& rng);

/// Same draw with a precomputed factor of the precision.
Vector sample_mvn(const Vector& mean, const Cholesky& precision_factor, CounterRng& rng);

/// True when `m` is symmetric (to 1e-10 relative) and admits a Cholesky factor.
bool is_spd(const Matrix& m);

}  // namespace btf
