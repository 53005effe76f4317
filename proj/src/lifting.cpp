#include "starlift/lifting.hpp"

#include <algorithm>
#include <stdexcept>

namespace starlift {

namespace {

ValidationReport fail(ValidationReport::Condition cond, std::string message) {
  ValidationReport r;
  r.holds = false;
  r.failed = cond;
  r.message = std::move(message);
  return r;
}

// First atom where the marginal differs from the target (exact comparison).
std::optional<int> first_marginal_mismatch(const SubDistribution& got,
                                           const SubDistribution& want) {
  for (int a = 0; a < want.space().size(); ++a)
    if (got.mass(a) != want.mass(a)) return a;
  return std::nullopt;
}

std::optional<int> first_pointwise_excess(const SubDistribution& got,
                                          const SubDistribution& bound) {
  for (int a = 0; a < bound.space().size(); ++a)
    if (got.mass(a) > bound.mass(a)) return a;
  return std::nullopt;
}

// Pairs of the extended product where x > k*y; the maximizing event of the
// DP divergence between two extended joints.
std::vector<std::pair<std::string, std::string>> divergence_event_pairs(
    const Rat& k, const JointSubDistribution& x, const JointSubDistribution& y) {
  std::vector<std::pair<std::string, std::string>> out;
  for (int a = 0; a < x.left_space().size(); ++a)
    for (int b = 0; b < x.right_space().size(); ++b)
      if (x.mass(a, b) > k * y.mass(a, b))
        out.emplace_back(x.left_space().label(a), x.right_space().label(b));
  return out;
}

ValidationReport distance_failure(const Rat& achieved, const Rat& bound,
                                  const JointSubDistribution& ext_l,
                                  const JointSubDistribution& ext_r, const Rat& k,
                                  std::string message) {
  ValidationReport r = fail(ValidationReport::Condition::distance, std::move(message));
  r.distance = achieved;
  r.slack = bound - achieved;
  r.pairs = divergence_event_pairs(k, ext_l, ext_r);
  return r;
}

ValidationReport support_failure(const JointSubDistribution& witness, int a, int b,
                                 const char* which) {
  ValidationReport r = fail(ValidationReport::Condition::support,
                            std::string(which) + " witness places mass outside the relation");
  r.pairs.emplace_back(witness.left_space().label(a), witness.right_space().label(b));
  return r;
}

// Support of a star witness restricted to the base product must lie in R;
// when `forbid_star` is set any star-fringe mass is also a support violation
// (two-witness liftings live on the plain product).
std::optional<ValidationReport> check_support(const JointSubDistribution& witness,
                                              const FiniteRelation& relation, bool forbid_star,
                                              const char* which) {
  for (int a = 0; a < witness.left_space().size(); ++a)
    for (int b = 0; b < witness.right_space().size(); ++b) {
      if (witness.mass(a, b) == 0) continue;
      const bool star = witness.left_space().is_star(a) || witness.right_space().is_star(b);
      if (star) {
        if (forbid_star) return support_failure(witness, a, b, which);
        continue;
      }
      if (!relation.contains(a, b)) return support_failure(witness, a, b, which);
    }
  return std::nullopt;
}

void check_pair_shape(const LiftingJudgment& j, const WitnessPair& w) {
  if (w.eta_left.left_space() != j.mu1.space() ||
      w.eta_left.right_space() != j.mu2.space().star_extended() ||
      w.eta_right.left_space() != j.mu1.space().star_extended() ||
      w.eta_right.right_space() != j.mu2.space())
    throw std::invalid_argument("witness pair spaces do not match the judgment");
}

}  // namespace

std::string LiftingKind::name() const {
  switch (tag) {
    case LiftingKindTag::star:
      return "star";
    case LiftingKindTag::two:
      return "two";
    case LiftingKindTag::one:
      return "one";
    case LiftingKindTag::sym_star:
      return "sym-star";
    case LiftingKindTag::sym_one:
      return "sym-one";
    case LiftingKindTag::fdiv_star:
      return "fdiv-star";
  }
  return "star";
}

LiftingJudgment::LiftingJudgment(LiftingKind kind_in, SubDistribution mu1_in,
                                 SubDistribution mu2_in, FiniteRelation relation_in,
                                 PrivacyParams params_in, double fdiv_delta_in)
    : kind(std::move(kind_in)),
      mu1(std::move(mu1_in)),
      mu2(std::move(mu2_in)),
      relation(std::move(relation_in)),
      params(std::move(params_in)),
      fdiv_delta(fdiv_delta_in) {
  if (mu1.space() != relation.left_space() || mu2.space() != relation.right_space())
    throw std::invalid_argument("judgment distributions do not match the relation spaces");
  if (mu1.space().has_star() || mu2.space().has_star())
    throw std::invalid_argument("judgment spaces must not be star-extended");
  if (params.k < 1) throw std::invalid_argument("factor k must be at least 1");
  if (params.delta < 0) throw std::invalid_argument("delta must be non-negative");
  if (kind.tag == LiftingKindTag::fdiv_star && !kind.divergence)
    throw std::invalid_argument("fdiv-star judgment needs a divergence");
}

LiftingJudgment LiftingJudgment::with_kind(LiftingKind new_kind) const {
  return LiftingJudgment(std::move(new_kind), mu1, mu2, relation, params, fdiv_delta);
}

WitnessPair::WitnessPair(JointSubDistribution left, JointSubDistribution right)
    : eta_left(std::move(left)), eta_right(std::move(right)) {
  if (eta_left.left_space().has_star() || !eta_left.right_space().has_star())
    throw std::invalid_argument("left witness must live over A x B*");
  if (!eta_right.left_space().has_star() || eta_right.right_space().has_star())
    throw std::invalid_argument("right witness must live over A* x B");
  if (eta_left.left_space() != eta_right.left_space().base() ||
      eta_left.right_space().base() != eta_right.right_space())
    throw std::invalid_argument("witnesses disagree on the underlying spaces");
}

JointSubDistribution WitnessPair::extended_left() const { return star_extend(eta_left); }
JointSubDistribution WitnessPair::extended_right() const { return star_extend(eta_right); }

JointSubDistribution pad_star_right(const JointSubDistribution& mu) {
  SampleSpace right = mu.right_space().star_extended();
  std::vector<Rat> m(static_cast<size_t>(mu.left_space().size()) * right.size(), Rat(0));
  for (int a = 0; a < mu.left_space().size(); ++a)
    for (int b = 0; b < mu.right_space().size(); ++b)
      m[static_cast<size_t>(a) * right.size() + b] = mu.mass(a, b);
  return JointSubDistribution(mu.left_space(), std::move(right), std::move(m));
}

JointSubDistribution pad_star_left(const JointSubDistribution& mu) {
  SampleSpace left = mu.left_space().star_extended();
  std::vector<Rat> m(static_cast<size_t>(left.size()) * mu.right_space().size(), Rat(0));
  for (int a = 0; a < mu.left_space().size(); ++a)
    for (int b = 0; b < mu.right_space().size(); ++b)
      m[static_cast<size_t>(a) * mu.right_space().size() + b] = mu.mass(a, b);
  return JointSubDistribution(std::move(left), mu.right_space(), std::move(m));
}

WitnessPair pad_two_to_star(const JointSubDistribution& left, const JointSubDistribution& right) {
  return WitnessPair(pad_star_right(left), pad_star_left(right));
}

WitnessPair diagonal_witnesses(const SubDistribution& mu) {
  const SampleSpace& s = mu.space();
  JointSubDistribution diag(s, s);
  std::vector<Rat> m(static_cast<size_t>(s.size()) * s.size(), Rat(0));
  for (int a = 0; a < s.size(); ++a) m[static_cast<size_t>(a) * s.size() + a] = mu.mass(a);
  JointSubDistribution d(s, s, std::move(m));
  return pad_two_to_star(d, d);
}

ValidationReport ValidationReport::ok() {
  ValidationReport r;
  r.holds = true;
  return r;
}

const char* ValidationReport::condition_name(Condition c) {
  switch (c) {
    case Condition::none:
      return "none";
    case Condition::marginal_left:
      return "marginal-left";
    case Condition::marginal_right:
      return "marginal-right";
    case Condition::support:
      return "support";
    case Condition::distance:
      return "distance";
  }
  return "none";
}

ValidationReport validate_witnesses(const LiftingJudgment& j, const WitnessPair& w,
                                    double tolerance) {
  if (j.kind.is_single_witness())
    throw std::invalid_argument("kind " + j.kind.name() + " takes a single witness");
  check_pair_shape(j, w);

  if (auto a = first_marginal_mismatch(marginal(Side::left, w.eta_left), j.mu1)) {
    auto r = fail(ValidationReport::Condition::marginal_left,
                  "first marginal of the left witness differs from mu1");
    r.atoms.push_back(j.mu1.space().label(*a));
    return r;
  }
  if (auto b = first_marginal_mismatch(marginal(Side::right, w.eta_right), j.mu2)) {
    auto r = fail(ValidationReport::Condition::marginal_right,
                  "second marginal of the right witness differs from mu2");
    r.atoms.push_back(j.mu2.space().label(*b));
    return r;
  }

  const bool forbid_star = j.kind.tag == LiftingKindTag::two;
  if (auto bad = check_support(w.eta_left, j.relation, forbid_star, "left")) return *bad;
  if (auto bad = check_support(w.eta_right, j.relation, forbid_star, "right")) return *bad;

  const JointSubDistribution ext_l = w.extended_left();
  const JointSubDistribution ext_r = w.extended_right();

  if (j.kind.tag == LiftingKindTag::fdiv_star) {
    const double achieved = f_divergence(*j.kind.divergence, ext_l, ext_r);
    if (!(achieved <= j.fdiv_delta + tolerance)) {
      auto r = fail(ValidationReport::Condition::distance,
                    "f-divergence between the witnesses exceeds delta");
      r.distance_f = achieved;
      r.slack_f = j.fdiv_delta - achieved;
      return r;
    }
    ValidationReport r = ValidationReport::ok();
    r.distance_f = achieved;
    r.slack_f = j.fdiv_delta - achieved;
    return r;
  }

  const Rat forward = dp_divergence(j.params.k, ext_l, ext_r);
  if (forward > j.params.delta)
    return distance_failure(forward, j.params.delta, ext_l, ext_r, j.params.k,
                            "divergence between the witnesses exceeds delta");
  Rat achieved = forward;
  if (j.kind.tag == LiftingKindTag::sym_star) {
    const Rat backward = dp_divergence(j.params.k, ext_r, ext_l);
    if (backward > j.params.delta)
      return distance_failure(backward, j.params.delta, ext_r, ext_l, j.params.k,
                              "reverse divergence between the witnesses exceeds delta");
    achieved = std::max(achieved, backward);
  }
  ValidationReport r = ValidationReport::ok();
  r.distance = achieved;
  r.slack = j.params.delta - achieved;
  return r;
}

ValidationReport validate_witnesses(const LiftingJudgment& j, const JointSubDistribution& eta,
                                    double) {
  if (!j.kind.is_single_witness())
    throw std::invalid_argument("kind " + j.kind.name() + " takes a witness pair");
  if (eta.left_space() != j.mu1.space() || eta.right_space() != j.mu2.space())
    throw std::invalid_argument("witness spaces do not match the judgment");

  const SubDistribution p1 = marginal(Side::left, eta);
  const SubDistribution p2 = marginal(Side::right, eta);
  if (auto a = first_pointwise_excess(p1, j.mu1)) {
    auto r = fail(ValidationReport::Condition::marginal_left,
                  "first marginal of the witness exceeds mu1");
    r.atoms.push_back(j.mu1.space().label(*a));
    return r;
  }
  if (auto b = first_pointwise_excess(p2, j.mu2)) {
    auto r = fail(ValidationReport::Condition::marginal_right,
                  "second marginal of the witness exceeds mu2");
    r.atoms.push_back(j.mu2.space().label(*b));
    return r;
  }
  if (auto bad = check_support(eta, j.relation, false, "single")) return *bad;

  const Rat forward = dp_divergence(j.params.k, j.mu1, p1);
  if (forward > j.params.delta) {
    auto r = fail(ValidationReport::Condition::distance,
                  "divergence between mu1 and the first marginal exceeds delta");
    r.distance = forward;
    r.slack = j.params.delta - forward;
    for (int a : dp_divergence_witness_event(j.params.k, j.mu1, p1))
      r.atoms.push_back(j.mu1.space().label(a));
    return r;
  }
  Rat achieved = forward;
  if (j.kind.tag == LiftingKindTag::sym_one) {
    const Rat backward = dp_divergence(j.params.k, j.mu2, p2);
    if (backward > j.params.delta) {
      auto r = fail(ValidationReport::Condition::distance,
                    "divergence between mu2 and the second marginal exceeds delta");
      r.distance = backward;
      r.slack = j.params.delta - backward;
      for (int b : dp_divergence_witness_event(j.params.k, j.mu2, p2))
        r.atoms.push_back(j.mu2.space().label(b));
      return r;
    }
    achieved = std::max(achieved, backward);
  }
  ValidationReport r = ValidationReport::ok();
  r.distance = achieved;
  r.slack = j.params.delta - achieved;
  return r;
}

namespace {

void require_valid(const LiftingJudgment& j, const WitnessPair& w, const char* op) {
  ValidationReport r = validate_witnesses(j, w);
  if (!r.holds)
    throw std::invalid_argument(std::string(op) + ": input witnesses fail validation (" +
                                ValidationReport::condition_name(r.failed) + ")");
}

void require_star_style(const LiftingJudgment& j, const char* op) {
  if (j.kind.tag != LiftingKindTag::star && j.kind.tag != LiftingKindTag::sym_star &&
      j.kind.tag != LiftingKindTag::fdiv_star)
    throw std::invalid_argument(std::string(op) + ": requires a star-style judgment");
}

}  // namespace

WitnessPair restrict_witness_support(const LiftingJudgment& j, const WitnessPair& w) {
  require_star_style(j, "restrict_witness_support");
  require_valid(j, w, "restrict_witness_support");

  const Event s1 = j.mu1.support();
  const Event s2 = j.mu2.support();
  const SampleSpace& a_space = w.eta_left.left_space();
  const SampleSpace& b_star = w.eta_left.right_space();
  const SampleSpace& a_star = w.eta_right.left_space();
  const SampleSpace& b_space = w.eta_right.right_space();

  std::vector<Rat> left(static_cast<size_t>(a_space.size()) * b_star.size(), Rat(0));
  for (int a = 0; a < a_space.size(); ++a) {
    Rat rerouted = 0;
    for (int b = 0; b < b_star.size(); ++b) {
      const Rat& m = w.eta_left.mass(a, b);
      if (!b_star.is_star(b) && event_contains(s1, a) && event_contains(s2, b))
        left[static_cast<size_t>(a) * b_star.size() + b] = m;
      else
        rerouted += m;  // mass outside supp(mu1) x supp(mu2) moves to (a, star)
    }
    left[static_cast<size_t>(a) * b_star.size() + b_star.star_index()] += rerouted;
  }

  std::vector<Rat> right(static_cast<size_t>(a_star.size()) * b_space.size(), Rat(0));
  for (int b = 0; b < b_space.size(); ++b) {
    Rat rerouted = 0;
    for (int a = 0; a < a_star.size(); ++a) {
      const Rat& m = w.eta_right.mass(a, b);
      if (!a_star.is_star(a) && event_contains(s1, a) && event_contains(s2, b))
        right[static_cast<size_t>(a) * b_space.size() + b] = m;
      else
        rerouted += m;
    }
    right[static_cast<size_t>(a_star.star_index()) * b_space.size() + b] += rerouted;
  }

  return WitnessPair(JointSubDistribution(a_space, b_star, std::move(left)),
                     JointSubDistribution(a_star, b_space, std::move(right)));
}

WitnessPair normalize_witnesses(const LiftingJudgment& j, const WitnessPair& w) {
  if (j.kind.tag != LiftingKindTag::star && j.kind.tag != LiftingKindTag::sym_star)
    throw std::invalid_argument("normalize_witnesses: requires a star judgment");
  require_valid(j, w, "normalize_witnesses");

  const SampleSpace& a_space = w.eta_left.left_space();
  const SampleSpace& b_star = w.eta_left.right_space();
  const SampleSpace& a_star = w.eta_right.left_space();
  const SampleSpace& b_space = w.eta_right.right_space();
  const Rat& k = j.params.k;

  // nu_left = min(eta_left, k*eta_right), nu_right = min(eta_left, eta_right)
  // on the base product; the star fringe tops each marginal back up.
  std::vector<Rat> left(static_cast<size_t>(a_space.size()) * b_star.size(), Rat(0));
  for (int a = 0; a < a_space.size(); ++a) {
    Rat row = 0;
    for (int b = 0; b < b_space.size(); ++b) {
      Rat v = std::min(w.eta_left.mass(a, b), k * w.eta_right.mass(a, b));
      left[static_cast<size_t>(a) * b_star.size() + b] = v;
      row += v;
    }
    left[static_cast<size_t>(a) * b_star.size() + b_star.star_index()] = j.mu1.mass(a) - row;
  }

  std::vector<Rat> right(static_cast<size_t>(a_star.size()) * b_space.size(), Rat(0));
  for (int b = 0; b < b_space.size(); ++b) {
    Rat col = 0;
    for (int a = 0; a < a_space.size(); ++a) {
      Rat v = std::min(w.eta_left.mass(a, b), w.eta_right.mass(a, b));
      right[static_cast<size_t>(a) * b_space.size() + b] = v;
      col += v;
    }
    right[static_cast<size_t>(a_star.star_index()) * b_space.size() + b] = j.mu2.mass(b) - col;
  }

  return WitnessPair(JointSubDistribution(a_space, b_star, std::move(left)),
                     JointSubDistribution(a_star, b_space, std::move(right)));
}

JointSubDistribution convert_one_star(const LiftingJudgment& star_judgment,
                                      const WitnessPair& w) {
  const auto tag = star_judgment.kind.tag;
  if (tag != LiftingKindTag::star && tag != LiftingKindTag::sym_star)
    throw std::invalid_argument("convert_one_star: expected a star or sym-star judgment");
  require_valid(star_judgment, w, "convert_one_star");

  const SampleSpace& a_space = w.eta_left.left_space();
  const SampleSpace& b_space = w.eta_right.right_space();
  std::vector<Rat> m(static_cast<size_t>(a_space.size()) * b_space.size());
  for (int a = 0; a < a_space.size(); ++a)
    for (int b = 0; b < b_space.size(); ++b)
      m[static_cast<size_t>(a) * b_space.size() + b] =
          std::min(w.eta_left.mass(a, b), w.eta_right.mass(a, b));
  return JointSubDistribution(a_space, b_space, std::move(m));
}

WitnessPair convert_one_star(const LiftingJudgment& one_judgment,
                             const JointSubDistribution& eta) {
  const auto tag = one_judgment.kind.tag;
  if (tag != LiftingKindTag::one && tag != LiftingKindTag::sym_one)
    throw std::invalid_argument("convert_one_star: expected a one or sym-one judgment");
  {
    ValidationReport r = validate_witnesses(one_judgment, eta);
    if (!r.holds)
      throw std::invalid_argument(std::string("convert_one_star: input fails validation (") +
                                  ValidationReport::condition_name(r.failed) + ")");
  }

  const SampleSpace& a_space = eta.left_space();
  const SampleSpace& b_space = eta.right_space();
  const SampleSpace b_star = b_space.star_extended();
  const SampleSpace a_star = a_space.star_extended();
  const SubDistribution p1 = marginal(Side::left, eta);
  const SubDistribution p2 = marginal(Side::right, eta);
  const Rat& k = one_judgment.params.k;
  const bool symmetric = tag == LiftingKindTag::sym_one;

  // Per-atom slack: delta(a) = max(mu1(a) - k*p1(a), 0); rows are scaled so
  // that exactly mu1(a) - delta(a) stays on B, the rest going to (a, star).
  std::vector<Rat> left(static_cast<size_t>(a_space.size()) * b_star.size(), Rat(0));
  for (int a = 0; a < a_space.size(); ++a) {
    const Rat& m1 = one_judgment.mu1.mass(a);
    Rat slack = m1 - k * p1.mass(a);
    if (slack < 0) slack = 0;
    Rat row = 0;
    if (p1.mass(a) != 0) {
      const Rat scale = (m1 - slack) / p1.mass(a);
      for (int b = 0; b < b_space.size(); ++b) {
        Rat v = eta.mass(a, b) * scale;
        left[static_cast<size_t>(a) * b_star.size() + b] = v;
        row += v;
      }
    }
    left[static_cast<size_t>(a) * b_star.size() + b_star.star_index()] = m1 - row;
  }

  std::vector<Rat> right(static_cast<size_t>(a_star.size()) * b_space.size(), Rat(0));
  for (int b = 0; b < b_space.size(); ++b) {
    const Rat& m2 = one_judgment.mu2.mass(b);
    Rat col = 0;
    if (symmetric) {
      Rat slack = m2 - k * p2.mass(b);
      if (slack < 0) slack = 0;
      if (p2.mass(b) != 0) {
        const Rat scale = (m2 - slack) / p2.mass(b);
        for (int a = 0; a < a_space.size(); ++a) {
          Rat v = eta.mass(a, b) * scale;
          right[static_cast<size_t>(a) * b_space.size() + b] = v;
          col += v;
        }
      }
    } else {
      for (int a = 0; a < a_space.size(); ++a) {
        right[static_cast<size_t>(a) * b_space.size() + b] = eta.mass(a, b);
        col += eta.mass(a, b);
      }
    }
    right[static_cast<size_t>(a_star.star_index()) * b_space.size() + b] = m2 - col;
  }

  return WitnessPair(JointSubDistribution(a_space, b_star, std::move(left)),
                     JointSubDistribution(a_star, b_space, std::move(right)));
}

TwoLiftingPrecheck two_lifting_feasibility_precheck(const LiftingJudgment& j) {
  if (j.kind.tag != LiftingKindTag::two)
    throw std::invalid_argument("two_lifting_feasibility_precheck: expected a two judgment");
  for (int b : j.mu2.support()) {
    bool has_predecessor = false;
    for (int a = 0; a < j.relation.left_space().size() && !has_predecessor; ++a)
      has_predecessor = j.relation.contains(a, b);
    if (!has_predecessor) return {false, Side::right, b};
  }
  for (int a : j.mu1.support()) {
    bool has_successor = false;
    for (int b = 0; b < j.relation.right_space().size() && !has_successor; ++b)
      has_successor = j.relation.contains(a, b);
    if (!has_successor) return {false, Side::left, a};
  }
  return TwoLiftingPrecheck::ok();
}

}  // namespace starlift
