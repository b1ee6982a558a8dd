#include <doctest.h>

#include "phaseinv/errors.hpp"
#include "phaseinv/rank.hpp"

using namespace phaseinv;

TEST_CASE("numerical_rank on constructed matrices") {
  Eigen::MatrixXd m(4, 3);
  m << 1, 2, 3, 2, 4, 6, 1, 0, 1, 0, 1, 1;  // column 3 = column 1 + column 2
  CHECK(numerical_rank(m, 1e-10) == 2);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(5, 5), 1e-10) == 5);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3), 1e-10) == 0);
  // Tall path (QR first) gives the same answer.
  Eigen::MatrixXd tall = Eigen::MatrixXd::Random(60, 4);
  tall.col(3) = 2.0 * tall.col(0) - tall.col(2);
  Eigen::VectorXd sv;
  CHECK(numerical_rank(tall, 1e-10, &sv) == 3);
  CHECK(sv.size() == 4);
}

TEST_CASE("invariant independence rank is N - 3") {
  for (int n = 4; n <= 7; ++n) {
    const RankReport r = invariant_independence_rank(n, 4, 17);
    CAPTURE(n);
    CHECK(r.rank == n - 3);
    CHECK(r.min_rank == n - 3);
  }
  CHECK_THROWS_AS(invariant_independence_rank(3, 4, 1), InvalidArgument);
}

TEST_CASE("psi functional rank is N - 2") {
  for (int n = 4; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(psi_functional_rank(n, 4, 5).rank == n - 2);
  }
}

TEST_CASE("linear span of canonical psi has dimension (N - 2)!") {
  CHECK(psi_linear_rank(4, 0, 3).rank == 2);
  CHECK(psi_linear_rank(5, 0, 3).rank == 6);
  CHECK(psi_linear_rank(6, 0, 3).rank == 24);
}
