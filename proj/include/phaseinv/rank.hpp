#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace phaseinv {

struct RankOptions {
  /// Singular values at or below rel_tol * sigma_max count as zero.
  double rel_tol = 1e-8;
  /// Central-difference step for Jacobians.
  double fd_step = 1e-6;
  /// Evaluation states are drawn uniformly with every pair at least this far
  /// apart, which keeps finite-difference truncation well below rel_tol.
  double min_separation = 0.1;
};

/// Number of singular values above rel_tol * sigma_max. Tall matrices are
/// QR-reduced before the SVD.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol,
                   Eigen::VectorXd* singular_values = nullptr);

struct RankReport {
  int rank = 0;           // generic rank (max over evaluation points)
  int min_rank = 0;       // smallest rank seen (== rank for a clean certificate)
  int columns = 0;        // number of functions
  int points = 0;         // evaluation points used
  Eigen::VectorXd singular_values;  // at the first evaluation point (or of the stacked matrix)
};

/// Linear rank of the canonical psi^N_q viewed as functions: rows are random
/// states, columns are the (N-1)!/2 canonical psi. num_points = 0 selects
/// 4x the column count. Cost grows like ((N-1)!)^3; N <= 7 is practical.
RankReport psi_linear_rank(int n, int num_points, std::uint64_t seed,
                           const RankOptions& options = {});

/// Functional rank of theta -> (log|psi_q|)_q over all canonical q: rank of
/// the finite-difference Jacobian at each of num_points random states.
RankReport psi_functional_rank(int n, int num_points, std::uint64_t seed,
                               const RankOptions& options = {});

/// Functional rank of theta -> (log|Psi_{q_ref, q_m}|)_m with q_ref the
/// identity and q_m ranging over all canonical permutations.
RankReport invariant_independence_rank(int n, int num_points, std::uint64_t seed,
                                       const RankOptions& options = {});

}  // namespace phaseinv
