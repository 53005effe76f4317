#pragma once

// Seeded instance generators and independent brute-force oracles shared by
// the unit and acceptance suites. Everything here is test-only and stays
// independent of the implementation paths it cross-checks.

#include <random>
#include <vector>

#include "starlift/composition.hpp"
#include "starlift/privacy.hpp"

namespace starlift::testing {

struct Rng {
  std::mt19937_64 engine;

  explicit Rng(unsigned long seed) : engine(seed) {}

  int uniform(int lo, int hi);  // inclusive
  bool coin(double p = 0.5);
  const Rat& pick(const std::vector<Rat>& choices);
};

SampleSpace random_space(Rng& rng, int min_size, int max_size, const std::string& prefix);

// Masses i/d with a common random denominator d <= max_denominator, total
// <= 1; proper = total exactly 1. Some atoms may get zero mass.
SubDistribution random_subdist(Rng& rng, const SampleSpace& space, int max_denominator,
                               bool proper);

FiniteRelation random_relation(Rng& rng, const SampleSpace& left, const SampleSpace& right,
                               double density = 0.5);

Event random_event(Rng& rng, const SampleSpace& space, double density = 0.5);

TotalMap random_map(Rng& rng, const SampleSpace& from, const SampleSpace& to);

// A joint with support inside `relation` whose marginals stay pointwise below
// mu1 and mu2: greedy randomized filling of row/column budgets.
JointSubDistribution random_coupling_below(Rng& rng, const SubDistribution& mu1,
                                           const SubDistribution& mu2,
                                           const FiniteRelation& relation);

// sup over all 2^n events of mu1[E] - k*mu2[E], by exhaustive enumeration.
Rat bruteforce_dp_divergence(const Rat& k, const SubDistribution& mu1,
                             const SubDistribution& mu2);

// Minimum cut by enumerating every source-side subset of the internal nodes.
// Unbounded edges count as (sum of finite capacities) + 1, as in the flow
// module's convention.
Rat bruteforce_min_cut(const FlowNetwork& net);

// A valid star judgment with freshly synthesized witnesses: delta is the
// tightest value plus an occasional random slack.
struct StarInstance {
  LiftingJudgment judgment;
  WitnessPair witnesses;
};
StarInstance random_valid_star_instance(Rng& rng, int max_atoms, int max_denominator);

// A valid symmetric one-witness judgment (witness built first, marginals
// padded above it, delta set to the achieved two-sided divergence).
struct SymOneInstance {
  LiftingJudgment judgment;
  JointSubDistribution witness;
};
SymOneInstance random_valid_sym_one_instance(Rng& rng, int max_atoms, int max_denominator);

// Witnesses for (mu1, mu2) under the full relation: an independent product
// coupling with mass then rerouted inside rows of eta_left and columns of
// eta_right (keeping KL finite). Divergence is whatever the reroutes achieve.
WitnessPair random_fdiv_witness_pair(Rng& rng, const FDivergence& divergence,
                                     const SubDistribution& mu1, const SubDistribution& mu2);

// A valid fdiv-star instance built from the pair above, with the bound set to
// the achieved divergence (plus occasional slack).
struct FdivInstance {
  LiftingJudgment judgment;
  WitnessPair witnesses;
};
FdivInstance random_valid_fdiv_instance(Rng& rng, const FDivergence& divergence, int max_atoms,
                                        int max_denominator);

// A single Kleisli step with proper kernels and per-pair witnesses
// synthesized at the per-step tightest delta (up to the given factor).
KernelLifting random_kernel_lifting(Rng& rng, const SampleSpace& from_left,
                                    const SampleSpace& from_right, const FiniteRelation& source,
                                    int max_atoms, int max_denominator, bool symmetric);

// Symmetric star witnesses built from a greedy coupling through the
// one-witness conversion; raises delta_accumulator to the achieved two-sided
// divergence.
WitnessPair symmetric_star_witnesses(Rng& rng, const SubDistribution& mu1,
                                     const SubDistribution& mu2, const FiniteRelation& relation,
                                     const Rat& k, Rat& delta_accumulator);

const std::vector<Rat>& factor_choices();  // {1, 3/2, 2, 3}
const std::vector<Rat>& delta_choices();   // {0, 1/8, 1/2}

}  // namespace starlift::testing
