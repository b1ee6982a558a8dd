#include "phaseinv/random.hpp"

#include <vector>

namespace phaseinv {

PhaseVector random_separated_state(int n, double min_separation, std::mt19937_64& rng) {
  if (n < 1) throw InvalidArgument("random_separated_state: n must be positive");
  if (!(min_separation >= 0.0) || min_separation * n >= kTwoPi) {
    throw InvalidArgument("random_separated_state: separation cannot be met");
  }
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (;;) {
    for (double& p : phases) p = uniform_phase(rng);
    PhaseVector state(phases);
    if (n < 2 || closest_pair(state).distance > min_separation) return state;
  }
}

}  // namespace phaseinv
