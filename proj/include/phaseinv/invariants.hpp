#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "phaseinv/core.hpp"

namespace phaseinv {

/// psi represented as sign * exp(log_abs) so that values near collisions
/// neither overflow nor lose their sign.
struct PsiValue {
  double log_abs = 0.0;
  int sign = 1;

  double value() const;
};

/// Cyclic product of half-angle sines around q, inverted:
/// psi_q = 1 / prod_j sin((theta_{q(j)} - theta_{q(j+1)}) / 2).
PsiValue log_abs_psi(const PhaseVector& state, const Permutation& q,
                     const CollisionGuard& guard = {});

/// sign * exp(log_abs); throws OutOfRange when the magnitude overflows.
double psi(const PhaseVector& state, const Permutation& q, const CollisionGuard& guard = {});

/// psi_{q2} / psi_{q1}.
double big_psi(const PhaseVector& state, const Permutation& q1, const Permutation& q2,
               const CollisionGuard& guard = {});

/// log|psi_{q2} / psi_{q1}| without forming either factor.
double log_abs_big_psi(const PhaseVector& state, const Permutation& q1, const Permutation& q2,
                       const CollisionGuard& guard = {});

using Quadruple = std::array<int, 4>;

/// <i,j,k,l> = sin((ti-tj)/2) sin((tk-tl)/2) / [sin((tj-tk)/2) sin((tl-ti)/2)].
double cross_ratio(const PhaseVector& state, const Quadruple& idx,
                   const CollisionGuard& guard = {});

/// One representative per class of cyclic shifts and reversal: q(1) = 1 and
/// q(2) < q(N), in lexicographic order. (N-1)!/2 entries for N >= 3.
std::vector<Permutation> canonical_permutations(int n);

/// Maps q onto its canonical representative. Returns the sign relating the
/// two psi values: psi_q = sign * psi_canonical (reversal costs (-1)^N).
struct CanonicalForm {
  Permutation representative;
  int sign = 1;
};
CanonicalForm canonicalize(const Permutation& q);

/// Precomputed log|sin| and sign tables for one state, so that many psi
/// values at the same state cost O(N) lookups each.
class HalfSineTable {
 public:
  explicit HalfSineTable(std::span<const double> phases);

  std::size_t size() const noexcept { return n_; }
  double log_abs_sin(int i, int j) const noexcept {
    return log_abs_[static_cast<std::size_t>(i - 1) * n_ + static_cast<std::size_t>(j - 1)];
  }
  int sign(int i, int j) const noexcept {
    return sign_[static_cast<std::size_t>(i - 1) * n_ + static_cast<std::size_t>(j - 1)];
  }
  /// log|psi_q| and its sign from the table.
  PsiValue psi(const Permutation& q) const;

 private:
  std::size_t n_;
  std::vector<double> log_abs_;
  std::vector<int> sign_;
};

/// One step of the Lemma-style reduction removing oscillator N.
struct ReductionRecord {
  int case_label = 1;  // 1..6
  int sign = 1;
  std::vector<Quadruple> factors;
  Permutation reduced_q1;
  Permutation reduced_q2;
};

/// Classifies the neighbourhoods of N in q1 and q2 and factors
/// Psi^N_{q1,q2} = sign * prod <factor> * Psi^{N-1}_{q1',q2'}. Requires N >= 5.
ReductionRecord reduce_once(const Permutation& q1, const Permutation& q2);

struct Decomposition {
  int sign = 1;
  std::vector<Quadruple> factors;
  /// Case labels of each reduce_once step, from N down to 5.
  std::vector<int> cases;
};

/// Full factorisation of Psi^N_{q1,q2} into cross ratios. Requires N >= 4.
Decomposition decompose_full(const Permutation& q1, const Permutation& q2);

/// sign * prod of the cross ratios, evaluated at a state.
double evaluate_decomposition(const PhaseVector& state, const Decomposition& d,
                              const CollisionGuard& guard = {});

/// q1 = (rest, i, j, l, k) and q2 = (rest, i, l, j, k) with the remaining
/// indices ascending; Psi_{q1,q2} = -<i,j,k,l>.
std::pair<Permutation, Permutation> embed_cross_ratio_as_big_psi(int n, const Quadruple& idx);

/// exp((1/sqrt(a)) arctan(tan(theta/2) / sqrt(a))) on the principal branch.
double theta_koopman_observable(double theta, double a);

/// Same observable continued through theta = pi: theta_unwrapped is the
/// accumulated (non-wrapped) phase, and each passage through pi + 2 pi k
/// adds pi/sqrt(a) to the exponent.
double theta_koopman_observable_continued(double theta_unwrapped, double a);

/// Cyclic cotangent telescopes used when applying the PF generator to psi.
/// With c_j = cot((theta_{q(j-1)} - theta_{q(j)})/2) - cot((theta_{q(j)} - theta_{q(j+1)})/2):
///   plain: sum_j c_j
///   cos-weighted: sum_j [cos(theta_{q(j)}) c_j / 2 - sin(theta_{q(j)})]
///   sin-weighted: sum_j [sin(theta_{q(j)}) c_j / 2 + cos(theta_{q(j)})]
/// Each vanishes identically off the collision set.
struct TelescopeSums {
  double plain = 0.0;
  double cos_weighted = 0.0;
  double sin_weighted = 0.0;
};
TelescopeSums cotangent_telescopes(const PhaseVector& state, const Permutation& q,
                                   const CollisionGuard& guard = {});

}  // namespace phaseinv
