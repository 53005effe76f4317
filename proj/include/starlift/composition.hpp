#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starlift/strassen.hpp"

namespace starlift {

// How per-step (k_i, delta_i) parameters combine under sequential
// composition. symmetric_only rules may only be applied to chains whose
// per-step witnesses validate in both distance directions.
struct CompositionRule {
  std::string name;
  bool symmetric_only = false;
  std::function<PrivacyParams(const std::vector<PrivacyParams>&)> apply;
};

// (prod k_i, sum delta_i).
CompositionRule basic_rule();

// The sqrt(2 n ln(1/omega))-style rule for n uniform symmetric steps:
// eps* = sqrt(2 n ln(1/omega))*eps + n*eps*(e^eps - 1), delta* = n*delta + omega.
// k* = e^(eps*) is computed in floating point and rounded up to a rational
// with 12 significant digits, so downstream exact checks stay sound.
CompositionRule advanced_rule(const Rat& omega);

struct TransitiveComposition {
  PrivacyParams params;     // (k*k', delta + k*delta')
  FiniteRelation relation;  // S o R
};

// mu1 ~ mu2 at (k, delta) and mu2 ~ mu3 at (k', delta') combine into
// mu1 ~ mu3 for the relational composition. Both inputs are validated; the
// middle distributions must agree.
TransitiveComposition transitive_compose(const LiftingJudgment& j1, const WitnessPair& w1,
                                         const LiftingJudgment& j2, const WitnessPair& w2);

// One Kleisli step: kernels out of the current pair of spaces, a target
// relation, and a validating witness pair for every related source pair.
struct KernelLifting {
  SampleSpace to_left;
  SampleSpace to_right;
  FiniteRelation target_relation;             // over to_left x to_right
  std::vector<SubDistribution> left_kernel;   // indexed by source left atoms
  std::vector<SubDistribution> right_kernel;  // indexed by source right atoms
  std::map<std::pair<int, int>, WitnessPair> pair_witnesses;
  PrivacyParams params;
  double fdiv_delta = 0.0;
};

struct BindComposition {
  LiftingJudgment judgment;  // bind(mu1, g) ~ bind(mu2, h) over the target relation
  WitnessPair witnesses;
};

// Composes outer witnesses with per-pair inner witnesses through the bind.
// Star-fringe mass of the outer witnesses propagates through the kernels
// paired with a Dirac at star; parameters combine as (k*k', delta + delta')
// (additively in delta for the f-divergence kinds).
BindComposition bind_compose_witnesses(const LiftingJudgment& outer, const WitnessPair& w,
                                       const KernelLifting& inner);

enum class UpToBadSide { left, right };

// Trades a conditional relation (theta implies R) for plain R:
// left: (k, delta + mu1[not theta]); right: (k, delta + k*mu2[not theta]).
PrivacyParams up_to_bad(UpToBadSide side, const Event& theta, const FiniteRelation& plain,
                        const LiftingJudgment& j, const WitnessPair& w);

struct ConjoinResult {
  PrivacyParams params;
  FiniteRelation relation;
};

// Conjoins a one-sided predicate onto a lifted relation at the cost of the
// predicate's failure probability.
ConjoinResult conjoin_one_sided(UpToBadSide side, const Event& theta, const LiftingJudgment& j,
                                const WitnessPair& w);

struct SubsetCouplingResult {
  enum class Status { holds, fails_first, fails_second, fails_total_mass };
  Status status;
  FiniteRelation relation;  // { (a1,a2) | a1 in P1 iff a2 in P2 }
  std::optional<WitnessPair> witnesses;
};

// Checks mu1[P1] <= k*mu2[P2] + delta and mu1[~P1] <= k*mu2[~P2] + delta and,
// when both hold, synthesizes witnesses for the subset-equivalence relation.
// fails_total_mass flags the sub-distribution corner where the full spaces
// themselves violate the condition (it cannot arise for proper inputs).
SubsetCouplingResult subset_coupling(const SubDistribution& mu1, const SubDistribution& mu2,
                                     const Event& p1, const Event& p2, const Rat& k,
                                     const Rat& delta);

enum class TransferDirection { forward, backward };

struct TransferResult {
  LiftingJudgment judgment;
  std::optional<WitnessPair> witnesses;
};

// Moves a lifting across a pair of total maps at unchanged parameters.
// forward: from mu_i over the domains (relation = pullback of `codomain_relation`)
// to the pushforwards over the codomains; backward: the reverse, which needs
// the preimage distributions. Star judgments re-synthesize witnesses on the
// transferred side; fdiv-star judgments transform the witnesses directly
// (pushforward along f1* x f2* forward, per-class conditional reweighting
// backward), preserving the divergence.
TransferResult mapping_transfer(TransferDirection dir, const TotalMap& f1, const TotalMap& f2,
                                const FiniteRelation& codomain_relation,
                                const LiftingJudgment& j, const WitnessPair& w,
                                const SubDistribution* preimage_mu1 = nullptr,
                                const SubDistribution* preimage_mu2 = nullptr);

// step i maps spaces (A_i, B_i) to (A_{i+1}, B_{i+1}); `initial` is R(0).
struct KernelChain {
  FiniteRelation initial;
  std::vector<KernelLifting> steps;
};

struct ChainComposition {
  LiftingJudgment judgment;
  WitnessPair witnesses;
};

// Iterates the per-step case kernels over the star-extended pair space
// starting from a Dirac at (a0, b0) in R(0), yielding witnesses for the
// composed distributions at rule.apply(per-step params). All per-step kernels
// must be proper on related pairs; a symmetric_only rule additionally needs
// per-step witnesses valid in both directions (symmetric = true).
ChainComposition compose_lifted_chain(const KernelChain& chain, int a0, int b0,
                                      const CompositionRule& rule, bool symmetric);

}  // namespace starlift
