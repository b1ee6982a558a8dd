#include "phaseinv/rank.hpp"

#include <algorithm>
#include <cmath>

#include "phaseinv/invariants.hpp"
#include "phaseinv/random.hpp"

namespace phaseinv {
namespace {

constexpr std::size_t kMaxLinearColumns = 5000;

Eigen::MatrixXd log_psi_jacobian(const std::vector<Permutation>& perms,
                                 const PhaseVector& state, double step, bool relative_to_first) {
  const std::size_t n = state.size();
  const std::size_t m = perms.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<double> shifted(state.values());
  for (std::size_t k = 0; k < n; ++k) {
    shifted[k] = state[k] + step;
    const HalfSineTable plus(shifted);
    shifted[k] = state[k] - step;
    const HalfSineTable minus(shifted);
    shifted[k] = state[k];
    for (std::size_t r = 0; r < m; ++r) {
      jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          (plus.psi(perms[r]).log_abs - minus.psi(perms[r]).log_abs) / (2.0 * step);
    }
  }
  if (relative_to_first) {
    const Eigen::RowVectorXd ref = jac.row(0);
    jac.rowwise() -= ref;
  }
  return jac;
}

RankReport jacobian_rank(int n, int num_points, std::uint64_t seed, const RankOptions& options,
                         bool relative_to_first) {
  const auto perms = canonical_permutations(n);
  if (num_points <= 0) num_points = 8;
  RankReport report;
  report.columns = static_cast<int>(perms.size());
  report.points = num_points;
  report.min_rank = n + 1;
  for (int p = 0; p < num_points; ++p) {
    auto rng = substream(seed, static_cast<std::uint64_t>(p));
    const PhaseVector state = random_separated_state(n, options.min_separation, rng);
    Eigen::VectorXd sv;
    const int r = numerical_rank(log_psi_jacobian(perms, state, options.fd_step, relative_to_first),
                                 options.rel_tol, &sv);
    if (p == 0) report.singular_values = sv;
    report.rank = std::max(report.rank, r);
    report.min_rank = std::min(report.min_rank, r);
  }
  return report;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, Eigen::VectorXd* singular_values) {
  if (m.size() == 0) {
    if (singular_values) singular_values->resize(0);
    return 0;
  }
  Eigen::VectorXd sv;
  if (m.rows() > 2 * m.cols()) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  } else {
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  }
  if (singular_values) *singular_values = sv;
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rel_tol * top) ++rank;
  }
  return rank;
}

RankReport psi_linear_rank(int n, int num_points, std::uint64_t seed, const RankOptions& options) {
  const auto perms = canonical_permutations(n);
  if (perms.size() > kMaxLinearColumns) {
    throw InvalidArgument("psi_linear_rank: too many canonical permutations for a dense SVD");
  }
  const auto cols = static_cast<Eigen::Index>(perms.size());
  if (num_points <= 0) num_points = static_cast<int>(4 * perms.size());
  Eigen::MatrixXd values(num_points, cols);
  for (int p = 0; p < num_points; ++p) {
    auto rng = substream(seed, static_cast<std::uint64_t>(p));
    const PhaseVector state = random_separated_state(n, options.min_separation, rng);
    const HalfSineTable table(state.phases());
    for (Eigen::Index c = 0; c < cols; ++c) {
      values(p, c) = table.psi(perms[static_cast<std::size_t>(c)]).value();
    }
  }
  RankReport report;
  report.columns = static_cast<int>(cols);
  report.points = num_points;
  report.rank = numerical_rank(values, options.rel_tol, &report.singular_values);
  report.min_rank = report.rank;
  return report;
}

RankReport psi_functional_rank(int n, int num_points, std::uint64_t seed,
                               const RankOptions& options) {
  return jacobian_rank(n, num_points, seed, options, false);
}

RankReport invariant_independence_rank(int n, int num_points, std::uint64_t seed,
                                       const RankOptions& options) {
  if (n < 4) throw InvalidArgument("invariant_independence_rank: N must be at least 4");
  return jacobian_rank(n, num_points, seed, options, true);
}

}  // namespace phaseinv
