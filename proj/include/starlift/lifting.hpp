#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starlift/divergence.hpp"
#include "starlift/relation.hpp"

namespace starlift {

enum class LiftingKindTag { star, two, one, sym_star, sym_one, fdiv_star };

struct LiftingKind {
  LiftingKindTag tag = LiftingKindTag::star;
  std::optional<FDivergence> divergence;  // set iff tag == fdiv_star

  static LiftingKind star() { return {LiftingKindTag::star, std::nullopt}; }
  static LiftingKind two() { return {LiftingKindTag::two, std::nullopt}; }
  static LiftingKind one() { return {LiftingKindTag::one, std::nullopt}; }
  static LiftingKind sym_star() { return {LiftingKindTag::sym_star, std::nullopt}; }
  static LiftingKind sym_one() { return {LiftingKindTag::sym_one, std::nullopt}; }
  static LiftingKind fdiv_star(FDivergence d) { return {LiftingKindTag::fdiv_star, std::move(d)}; }

  bool is_symmetric() const {
    return tag == LiftingKindTag::sym_star || tag == LiftingKindTag::sym_one;
  }
  bool is_single_witness() const {
    return tag == LiftingKindTag::one || tag == LiftingKindTag::sym_one;
  }
  std::string name() const;
};

// The claim "mu1 and mu2 are related by a lifting of `relation` at the given
// parameters". For fdiv_star the distance bound is `fdiv_delta` (a float, as
// the divergence leaves the rationals); all other kinds use params.delta.
struct LiftingJudgment {
  LiftingKind kind;
  SubDistribution mu1;
  SubDistribution mu2;
  FiniteRelation relation;
  PrivacyParams params;
  double fdiv_delta = 0.0;

  LiftingJudgment(LiftingKind kind, SubDistribution mu1, SubDistribution mu2,
                  FiniteRelation relation, PrivacyParams params, double fdiv_delta = 0.0);

  LiftingJudgment with_kind(LiftingKind new_kind) const;
};

// The two witnesses of a star-style lifting: eta_left over A x B*, eta_right
// over A* x B. The star atom is an ordinary coordinate of the extended space,
// so distance checks over A* x B* are plain joint-distribution operations.
struct WitnessPair {
  JointSubDistribution eta_left;
  JointSubDistribution eta_right;

  WitnessPair(JointSubDistribution left, JointSubDistribution right);

  // Both witnesses padded to A* x B*.
  JointSubDistribution extended_left() const;
  JointSubDistribution extended_right() const;
};

// Embeds a plain joint over A x B as a star witness shape (zero star fringe).
JointSubDistribution pad_star_right(const JointSubDistribution& mu);
JointSubDistribution pad_star_left(const JointSubDistribution& mu);

// Two-witness pair over A x B reinterpreted with star padding.
WitnessPair pad_two_to_star(const JointSubDistribution& left, const JointSubDistribution& right);

// The coupling of mu with itself along the diagonal, as a witness pair.
WitnessPair diagonal_witnesses(const SubDistribution& mu);

struct ValidationReport {
  enum class Condition { none, marginal_left, marginal_right, support, distance };

  bool holds = false;
  Condition failed = Condition::none;
  std::optional<Rat> distance;      // achieved distance, exact kinds
  std::optional<double> distance_f;  // achieved distance, fdiv kind
  std::optional<Rat> slack;         // bound - achieved
  std::optional<double> slack_f;
  std::vector<std::string> atoms;  // offending atoms (marginal failures)
  std::vector<std::pair<std::string, std::string>> pairs;  // offending pairs / event
  std::string message;

  static ValidationReport ok();
  static const char* condition_name(Condition c);
};

// Checks the kind's marginal, support and distance conditions in that order
// and reports the first failure together with a witnessing atom/pair/event.
// `tolerance` applies to fdiv_star distance comparisons only.
ValidationReport validate_witnesses(const LiftingJudgment& j, const WitnessPair& w,
                                    double tolerance = 1e-9);
// Single-witness kinds (one, sym_one): the witness is a joint over A x B.
ValidationReport validate_witnesses(const LiftingJudgment& j, const JointSubDistribution& eta,
                                    double tolerance = 1e-9);

// Reroutes witness mass lying outside supp(mu1) x supp(mu2) to the star
// fringe. Output validates for the same judgment, has support inside
// supp(mu1)* x supp(mu2)*, keeps both marginals, and for fdiv_star has the
// same divergence. Requires a star-style kind and a valid input.
WitnessPair restrict_witness_support(const LiftingJudgment& j, const WitnessPair& w);

// Pointwise-min renormalization: output witnesses additionally satisfy
// eta_right(a,b) <= eta_left(a,b) <= k * eta_right(a,b) away from the star
// fringe. Star judgments only.
WitnessPair normalize_witnesses(const LiftingJudgment& j, const WitnessPair& w);

// star -> one: the pointwise minimum of the two witnesses. The result
// witnesses the one (resp. sym_one) judgment at unchanged parameters.
JointSubDistribution convert_one_star(const LiftingJudgment& star_judgment,
                                      const WitnessPair& w);
// one -> star: per-atom slack scaling. The result witnesses the star
// (resp. sym_star) judgment at unchanged parameters.
WitnessPair convert_one_star(const LiftingJudgment& one_judgment,
                             const JointSubDistribution& eta);

struct TwoLiftingPrecheck {
  bool feasible = true;
  Side side = Side::left;
  int atom = -1;  // index in the offending side's space

  static TwoLiftingPrecheck ok() { return {}; }
};

// Necessary condition for a two-witness lifting: every supported atom must
// have a related partner, since witnesses over A x B cannot place marginal
// mass elsewhere. Checks the right side first, then the left.
TwoLiftingPrecheck two_lifting_feasibility_precheck(const LiftingJudgment& j);

}  // namespace starlift
