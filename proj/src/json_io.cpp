#include "starlift/json_io.hpp"

#include <stdexcept>

namespace starlift {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field: ") + name);
  return j.at(name);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) bad(std::string("field must be a string: ") + name);
  return v.get<std::string>();
}

Rat rational_field(const Json& j, const char* name) { return rational_from_json(field(j, name)); }

}  // namespace

Json rational_to_json(const Rat& r) { return format_rational(r); }

Rat rational_from_json(const Json& j) {
  if (!j.is_string()) bad("rationals must be \"p/q\" strings");
  return parse_rational(j.get<std::string>());
}

Json space_to_json(const SampleSpace& s) {
  Json arr = Json::array();
  for (int i = 0; i < s.size(); ++i) arr.push_back(s.label(i));
  return arr;
}

SampleSpace space_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("space must be a non-empty array of atoms");
  std::vector<std::string> atoms;
  bool star = false;
  for (const Json& a : j) {
    if (!a.is_string()) bad("atoms must be strings");
    std::string label = a.get<std::string>();
    if (label == kStarLabel) {
      if (star) bad("duplicate star atom");
      star = true;
      continue;
    }
    if (star) bad("the star atom must come last in a space");
    atoms.push_back(std::move(label));
  }
  SampleSpace base{std::move(atoms)};
  return star ? base.star_extended() : base;
}

Json dist_to_json(const SubDistribution& d) {
  Json mass = Json::object();
  for (int a : d.support()) mass[d.space().label(a)] = rational_to_json(d.mass(a));
  return Json{{"mass", mass}, {"space", space_to_json(d.space())}};
}

SubDistribution dist_from_json(const Json& j) {
  SampleSpace space = space_from_json(field(j, "space"));
  const Json& mass = field(j, "mass");
  if (!mass.is_object()) bad("mass must be an object keyed by atom");
  std::vector<Rat> m(space.size(), Rat(0));
  for (const auto& [atom, value] : mass.items()) m.at(space.index_of(atom)) =
      rational_from_json(value);
  return SubDistribution(std::move(space), std::move(m));
}

Json joint_triples_to_json(const JointSubDistribution& m) {
  Json arr = Json::array();
  for (const auto& [a, b] : m.support())
    arr.push_back(Json::array(
        {m.left_space().label(a), m.right_space().label(b), rational_to_json(m.mass(a, b))}));
  return arr;
}

JointSubDistribution joint_from_triples(const SampleSpace& left, const SampleSpace& right,
                                        const Json& triples) {
  if (!triples.is_array()) bad("joint mass must be an array of [left, right, \"p/q\"] triples");
  std::vector<Rat> m(static_cast<size_t>(left.size()) * right.size(), Rat(0));
  for (const Json& t : triples) {
    if (!t.is_array() || t.size() != 3) bad("joint mass entries must be triples");
    const int a = left.index_of(t.at(0).get<std::string>());
    const int b = right.index_of(t.at(1).get<std::string>());
    m.at(static_cast<size_t>(a) * right.size() + b) = rational_from_json(t.at(2));
  }
  return JointSubDistribution(left, right, std::move(m));
}

Json relation_pairs_to_json(const FiniteRelation& r) {
  Json arr = Json::array();
  for (const auto& [a, b] : r.pairs())
    arr.push_back(Json::array({r.left_space().label(a), r.right_space().label(b)}));
  return arr;
}

FiniteRelation relation_from_pairs(const SampleSpace& left, const SampleSpace& right,
                                   const Json& pairs) {
  if (!pairs.is_array()) bad("relation pairs must be an array");
  std::vector<std::pair<std::string, std::string>> ps;
  for (const Json& p : pairs) {
    if (!p.is_array() || p.size() != 2) bad("relation entries must be [left, right] pairs");
    ps.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  }
  return FiniteRelation::from_pairs(left, right, ps);
}

Json event_to_json(const SampleSpace& s, const Event& e) {
  Json arr = Json::array();
  for (int a : e) arr.push_back(s.label(a));
  return arr;
}

Event event_from_json(const SampleSpace& s, const Json& atoms) {
  if (!atoms.is_array()) bad("event must be an array of atoms");
  std::vector<std::string> labels;
  for (const Json& a : atoms) labels.push_back(a.get<std::string>());
  return event_from_labels(s, labels);
}

Json witness_pair_to_json(const WitnessPair& w) {
  return Json{{"eta_left", joint_triples_to_json(w.eta_left)},
              {"eta_right", joint_triples_to_json(w.eta_right)}};
}

WitnessPair witness_pair_from_json(const SampleSpace& left, const SampleSpace& right,
                                   const Json& j) {
  return WitnessPair(
      joint_from_triples(left, right.star_extended(), field(j, "eta_left")),
      joint_from_triples(left.star_extended(), right, field(j, "eta_right")));
}

Json mechanism_to_json(const Mechanism& m) {
  Json kernel = Json::object();
  for (int a = 0; a < m.input_space.size(); ++a) {
    Json out = Json::object();
    for (int b : m.kernel[a].support())
      out[m.output_space.label(b)] = rational_to_json(m.kernel[a].mass(b));
    kernel[m.input_space.label(a)] = out;
  }
  return Json{{"adjacency", relation_pairs_to_json(m.adjacency)},
              {"input_space", space_to_json(m.input_space)},
              {"kernel", kernel},
              {"output_space", space_to_json(m.output_space)}};
}

Mechanism mechanism_from_json(const Json& j) {
  if (j.is_object() && j.contains("builtin")) {
    const std::string name = string_field(j, "builtin");
    if (name == "randomized-response") return randomized_response(rational_field(j, "p"));
    if (name == "truncated-geometric") {
      const Json& n = field(j, "n");
      if (!n.is_number_integer()) bad("truncated-geometric: n must be an integer");
      return truncated_geometric(rational_field(j, "k_step"), n.get<int>());
    }
    bad("unknown builtin mechanism: " + name);
  }
  SampleSpace inputs = space_from_json(field(j, "input_space"));
  SampleSpace outputs = space_from_json(field(j, "output_space"));
  const Json& kernel = field(j, "kernel");
  if (!kernel.is_object()) bad("kernel must be an object keyed by input atom");
  std::vector<SubDistribution> k;
  for (int a = 0; a < inputs.size(); ++a) {
    const std::string& label = inputs.label(a);
    if (!kernel.contains(label)) bad("kernel missing input: " + label);
    std::vector<Rat> mass(outputs.size(), Rat(0));
    for (const auto& [atom, value] : kernel.at(label).items())
      mass.at(outputs.index_of(atom)) = rational_from_json(value);
    k.emplace_back(outputs, std::move(mass));
  }
  FiniteRelation adjacency = relation_from_pairs(inputs, inputs, field(j, "adjacency"));
  return Mechanism(std::move(inputs), std::move(outputs), std::move(k), std::move(adjacency));
}

FDivergence fdivergence_from_name(const std::string& name) {
  if (name == "sd") return FDivergence::statistical_distance();
  if (name == "kl") return FDivergence::kullback_leibler();
  if (name == "hellinger") return FDivergence::hellinger();
  bad("unknown f-divergence: " + name);
}

ProblemFile problem_file_from_json(const Json& j) {
  ProblemFile f;
  f.version = string_field(j, "version");
  if (f.version != "1") bad("unsupported schema version: " + f.version);
  f.problem = string_field(j, "problem");
  f.payload = field(j, "payload");
  return f;
}

namespace {

LiftingKind kind_from_payload(const Json& payload) {
  const std::string name = string_field(payload, "kind");
  if (name == "star") return LiftingKind::star();
  if (name == "two") return LiftingKind::two();
  if (name == "one") return LiftingKind::one();
  if (name == "sym-star") return LiftingKind::sym_star();
  if (name == "sym-one") return LiftingKind::sym_one();
  if (name == "fdiv-star")
    return LiftingKind::fdiv_star(fdivergence_from_name(string_field(payload, "fdiv")));
  bad("unknown lifting kind: " + name);
}

}  // namespace

LiftingCheckProblem parse_lifting_check(const Json& payload) {
  LiftingKind kind = kind_from_payload(payload);
  SubDistribution mu1 = dist_from_json(field(payload, "mu1"));
  SubDistribution mu2 = dist_from_json(field(payload, "mu2"));
  FiniteRelation relation =
      relation_from_pairs(mu1.space(), mu2.space(), field(field(payload, "relation"), "pairs"));
  PrivacyParams params;
  double fdiv_delta = 0.0;
  if (kind.tag == LiftingKindTag::fdiv_star) {
    const Json& d = field(payload, "fdiv_delta");
    if (!d.is_number()) bad("fdiv_delta must be a number");
    fdiv_delta = d.get<double>();
  } else {
    params.k = rational_field(payload, "k");
    params.delta = rational_field(payload, "delta");
  }
  const SampleSpace a = mu1.space();
  const SampleSpace b = mu2.space();
  LiftingJudgment judgment(std::move(kind), std::move(mu1), std::move(mu2), std::move(relation),
                           std::move(params), fdiv_delta);
  LiftingCheckProblem p{std::move(judgment), std::nullopt, std::nullopt};
  if (p.judgment.kind.is_single_witness())
    p.single = joint_from_triples(a, b, field(payload, "witness"));
  else
    p.pair = witness_pair_from_json(a, b, field(payload, "witnesses"));
  return p;
}

Json lifting_check_to_json(const LiftingCheckProblem& p) {
  Json payload{{"kind", p.judgment.kind.name()},
               {"mu1", dist_to_json(p.judgment.mu1)},
               {"mu2", dist_to_json(p.judgment.mu2)},
               {"relation", Json{{"pairs", relation_pairs_to_json(p.judgment.relation)}}}};
  if (p.judgment.kind.tag == LiftingKindTag::fdiv_star) {
    payload["fdiv"] = p.judgment.kind.divergence->name();
    payload["fdiv_delta"] = p.judgment.fdiv_delta;
  } else {
    payload["k"] = rational_to_json(p.judgment.params.k);
    payload["delta"] = rational_to_json(p.judgment.params.delta);
  }
  if (p.single)
    payload["witness"] = joint_triples_to_json(*p.single);
  else if (p.pair)
    payload["witnesses"] = witness_pair_to_json(*p.pair);
  return payload;
}

SynthesizeProblem parse_synthesize(const Json& payload, bool with_delta) {
  SubDistribution mu1 = dist_from_json(field(payload, "mu1"));
  SubDistribution mu2 = dist_from_json(field(payload, "mu2"));
  FiniteRelation relation =
      relation_from_pairs(mu1.space(), mu2.space(), field(field(payload, "relation"), "pairs"));
  Rat k = rational_field(payload, "k");
  Rat delta = with_delta ? rational_field(payload, "delta") : Rat(0);
  return {std::move(mu1), std::move(mu2), std::move(relation), std::move(k), std::move(delta)};
}

Json synthesize_to_json(const SynthesizeProblem& p, bool with_delta) {
  Json payload{{"k", rational_to_json(p.k)},
               {"mu1", dist_to_json(p.mu1)},
               {"mu2", dist_to_json(p.mu2)},
               {"relation", Json{{"pairs", relation_pairs_to_json(p.relation)}}}};
  if (with_delta) payload["delta"] = rational_to_json(p.delta);
  return payload;
}

DivergenceProblem parse_divergence(const Json& payload) {
  DivergenceProblem p{string_field(payload, "kind"), dist_from_json(field(payload, "mu1")),
                      dist_from_json(field(payload, "mu2")), Rat(1)};
  if (p.kind == "dp") p.k = rational_field(payload, "k");
  else if (p.kind != "sd" && p.kind != "kl" && p.kind != "hellinger")
    bad("unknown divergence kind: " + p.kind);
  if (p.mu1.space() != p.mu2.space()) bad("divergence requires a shared space");
  return p;
}

Json divergence_to_json(const DivergenceProblem& p) {
  Json payload{{"kind", p.kind},
               {"mu1", dist_to_json(p.mu1)},
               {"mu2", dist_to_json(p.mu2)}};
  if (p.kind == "dp") payload["k"] = rational_to_json(p.k);
  return payload;
}

DpCheckProblem parse_dp_check(const Json& payload) {
  DpCheckProblem p{mechanism_from_json(field(payload, "mechanism")),
                   rational_field(payload, "k"), rational_field(payload, "delta"),
                   payload.contains("via") ? string_field(payload, "via") : "divergence"};
  if (p.via != "divergence" && p.via != "lifting") bad("via must be divergence or lifting");
  return p;
}

Json dp_check_to_json(const DpCheckProblem& p) {
  return Json{{"delta", rational_to_json(p.delta)},
              {"k", rational_to_json(p.k)},
              {"mechanism", mechanism_to_json(p.mechanism)},
              {"via", p.via}};
}

ComposeProblem parse_compose(const Json& payload) {
  ComposeProblem p;
  p.rule = string_field(payload, "rule");
  if (p.rule != "basic" && p.rule != "advanced") bad("rule must be basic or advanced");
  const Json& steps = field(payload, "steps");
  if (!steps.is_array() || steps.empty()) bad("steps must be a non-empty array");
  for (const Json& s : steps)
    p.steps.push_back({rational_field(s, "k"), rational_field(s, "delta")});
  if (payload.contains("omega")) p.omega = rational_field(payload, "omega");
  if (p.rule == "advanced" && !p.omega) bad("advanced rule needs omega");
  return p;
}

Json compose_to_json(const ComposeProblem& p) {
  Json steps = Json::array();
  for (const PrivacyParams& s : p.steps)
    steps.push_back(Json{{"delta", rational_to_json(s.delta)}, {"k", rational_to_json(s.k)}});
  Json payload{{"rule", p.rule}, {"steps", steps}};
  if (p.omega) payload["omega"] = rational_to_json(*p.omega);
  return payload;
}

SubsetCouplingProblem parse_subset_coupling(const Json& payload) {
  SubDistribution mu1 = dist_from_json(field(payload, "mu1"));
  SubDistribution mu2 = dist_from_json(field(payload, "mu2"));
  Event p1 = event_from_json(mu1.space(), field(payload, "p1"));
  Event p2 = event_from_json(mu2.space(), field(payload, "p2"));
  return {std::move(mu1), std::move(mu2), std::move(p1), std::move(p2),
          rational_field(payload, "k"), rational_field(payload, "delta")};
}

Json subset_coupling_to_json(const SubsetCouplingProblem& p) {
  return Json{{"delta", rational_to_json(p.delta)},
              {"k", rational_to_json(p.k)},
              {"mu1", dist_to_json(p.mu1)},
              {"mu2", dist_to_json(p.mu2)},
              {"p1", event_to_json(p.mu1.space(), p.p1)},
              {"p2", event_to_json(p.mu2.space(), p.p2)}};
}

Json canonical_problem_json(const ProblemFile& file) {
  Json payload;
  if (file.problem == "lifting-check")
    payload = lifting_check_to_json(parse_lifting_check(file.payload));
  else if (file.problem == "synthesize")
    payload = synthesize_to_json(parse_synthesize(file.payload, true), true);
  else if (file.problem == "tightest-delta")
    payload = synthesize_to_json(parse_synthesize(file.payload, false), false);
  else if (file.problem == "divergence")
    payload = divergence_to_json(parse_divergence(file.payload));
  else if (file.problem == "dp-check")
    payload = dp_check_to_json(parse_dp_check(file.payload));
  else if (file.problem == "compose")
    payload = compose_to_json(parse_compose(file.payload));
  else if (file.problem == "subset-coupling")
    payload = subset_coupling_to_json(parse_subset_coupling(file.payload));
  else
    bad("unknown problem kind: " + file.problem);
  return Json{{"payload", payload}, {"problem", file.problem}, {"version", file.version}};
}

}  // namespace starlift
