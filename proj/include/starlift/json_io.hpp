#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "starlift/composition.hpp"
#include "starlift/privacy.hpp"

namespace starlift {

using Json = nlohmann::json;

// Canonical forms: object keys sorted (the library's native object order),
// rationals as gcd-reduced "p/q" strings with positive denominator, zero
// masses omitted, joint masses as [left, right, "p/q"] triples in space
// order, the star atom written as "@star". serialize(parse(file)) is
// byte-identical for files already in this form.

Json rational_to_json(const Rat& r);
Rat rational_from_json(const Json& j);

Json space_to_json(const SampleSpace& s);
SampleSpace space_from_json(const Json& j);

Json dist_to_json(const SubDistribution& d);
SubDistribution dist_from_json(const Json& j);

Json joint_triples_to_json(const JointSubDistribution& m);
JointSubDistribution joint_from_triples(const SampleSpace& left, const SampleSpace& right,
                                        const Json& triples);

Json relation_pairs_to_json(const FiniteRelation& r);
FiniteRelation relation_from_pairs(const SampleSpace& left, const SampleSpace& right,
                                   const Json& pairs);

Json event_to_json(const SampleSpace& s, const Event& e);
Event event_from_json(const SampleSpace& s, const Json& atoms);

Json witness_pair_to_json(const WitnessPair& w);
WitnessPair witness_pair_from_json(const SampleSpace& left, const SampleSpace& right,
                                   const Json& j);

Json mechanism_to_json(const Mechanism& m);
// Accepts the explicit form or a builtin shorthand:
//   {"builtin": "randomized-response", "p": "1/4"}
//   {"builtin": "truncated-geometric", "k_step": "2/1", "n": 8}
Mechanism mechanism_from_json(const Json& j);

FDivergence fdivergence_from_name(const std::string& name);

struct ProblemFile {
  std::string version;
  std::string problem;
  Json payload;
};

ProblemFile problem_file_from_json(const Json& j);

struct LiftingCheckProblem {
  LiftingJudgment judgment;
  std::optional<WitnessPair> pair;            // pair-witness kinds
  std::optional<JointSubDistribution> single;  // single-witness kinds
};
LiftingCheckProblem parse_lifting_check(const Json& payload);
Json lifting_check_to_json(const LiftingCheckProblem& p);

struct SynthesizeProblem {
  SubDistribution mu1;
  SubDistribution mu2;
  FiniteRelation relation;
  Rat k;
  Rat delta;  // ignored by tightest-delta
};
SynthesizeProblem parse_synthesize(const Json& payload, bool with_delta);
Json synthesize_to_json(const SynthesizeProblem& p, bool with_delta);

struct DivergenceProblem {
  std::string kind;  // dp | sd | kl | hellinger
  SubDistribution mu1;
  SubDistribution mu2;
  Rat k;  // dp only
};
DivergenceProblem parse_divergence(const Json& payload);
Json divergence_to_json(const DivergenceProblem& p);

struct DpCheckProblem {
  Mechanism mechanism;
  Rat k;
  Rat delta;
  std::string via;  // divergence | lifting
};
DpCheckProblem parse_dp_check(const Json& payload);
Json dp_check_to_json(const DpCheckProblem& p);

struct ComposeProblem {
  std::string rule;  // basic | advanced
  std::vector<PrivacyParams> steps;
  std::optional<Rat> omega;
};
ComposeProblem parse_compose(const Json& payload);
Json compose_to_json(const ComposeProblem& p);

struct SubsetCouplingProblem {
  SubDistribution mu1;
  SubDistribution mu2;
  Event p1;
  Event p2;
  Rat k;
  Rat delta;
};
SubsetCouplingProblem parse_subset_coupling(const Json& payload);
Json subset_coupling_to_json(const SubsetCouplingProblem& p);

// Re-serializes a parsed problem file in canonical form.
Json canonical_problem_json(const ProblemFile& file);

}  // namespace starlift
