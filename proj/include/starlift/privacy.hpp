#pragma once

#include <optional>
#include <vector>

#include "starlift/strassen.hpp"

namespace starlift {

// A probabilistic computation from inputs to output distributions, together
// with the adjacency relation its privacy guarantee quantifies over. The
// adjacency relation may be asymmetric.
struct Mechanism {
  SampleSpace input_space;
  SampleSpace output_space;
  std::vector<SubDistribution> kernel;  // indexed by input atom
  FiniteRelation adjacency;             // over input_space x input_space

  Mechanism(SampleSpace inputs, SampleSpace outputs, std::vector<SubDistribution> kernel,
            FiniteRelation adjacency);

  const SubDistribution& operator()(int input) const { return kernel.at(input); }
};

FiniteRelation symmetric_closure(const FiniteRelation& r);

struct DpViolation {
  int input_a = -1;
  int input_b = -1;
  Event event;   // output event where M(a)[E] > k*M(b)[E] + delta
  Rat excess{0};  // achieved divergence minus delta
};

// Divergence route: checks dp_divergence(k, M(a), M(a')) <= delta on every
// adjacent pair, reporting the first violation with its maximizing event.
std::optional<DpViolation> check_dp(const Mechanism& m, const Rat& k, const Rat& delta);

struct LiftingDpResult {
  std::optional<DpViolation> violation;  // event = the refuting output subset
  // Witnesses for every adjacent pair when private (in adjacency order).
  std::vector<std::tuple<int, int, WitnessPair>> witnesses;
};

// Lifting route: synthesizes a star lifting of the equality relation on
// outputs for every adjacent pair. Agrees with check_dp on every mechanism.
LiftingDpResult dp_via_lifting(const Mechanism& m, const Rat& k, const Rat& delta);

// Least delta for which the mechanism is (ln k, delta)-private.
Rat tightest_dp_delta(const Mechanism& m, const Rat& k);

// Inputs {0,1}; answers truthfully with probability 1-p. Private at
// (k = (1-p)/p, 0), tightly. Requires p in (0, 1/2].
Mechanism randomized_response(const Rat& p);

// Inputs and outputs {0..n}; two-sided geometric noise with ratio 1/k_step
// around the true value, all tail mass folded onto the boundary atoms, so
// adjacent outputs stay within a pointwise factor of k_step. Private at
// (k_step, 0), tightly. Requires k_step > 1.
Mechanism truncated_geometric(const Rat& k_step, int n);

}  // namespace starlift
