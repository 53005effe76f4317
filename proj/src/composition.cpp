#include "starlift/composition.hpp"

#include <cmath>
#include <stdexcept>

namespace starlift {

namespace {

void require_valid_pair(const LiftingJudgment& j, const WitnessPair& w, const char* op) {
  ValidationReport r = validate_witnesses(j, w);
  if (!r.holds)
    throw std::invalid_argument(std::string(op) + ": witnesses fail validation (" +
                                ValidationReport::condition_name(r.failed) + ")");
}

void require_star_kind(const LiftingJudgment& j, const char* op) {
  if (j.kind.tag != LiftingKindTag::star)
    throw std::invalid_argument(std::string(op) + ": expected a star judgment");
}

LiftingKind pair_kind_of(const LiftingJudgment& outer) { return outer.kind; }

// Validates the hypotheses of a Kleisli step against a source relation:
// kernels total, per-pair witnesses present and valid for every related pair.
void check_kernel_lifting(const KernelLifting& step, const SampleSpace& from_left,
                          const SampleSpace& from_right, const FiniteRelation& source,
                          const LiftingKind& kind, bool require_proper, const char* op) {
  if (static_cast<int>(step.left_kernel.size()) != from_left.size() ||
      static_cast<int>(step.right_kernel.size()) != from_right.size())
    throw std::invalid_argument(std::string(op) + ": kernel not total on its domain");
  for (const SubDistribution& d : step.left_kernel)
    if (d.space() != step.to_left)
      throw std::invalid_argument(std::string(op) + ": left kernel over a mismatched space");
  for (const SubDistribution& d : step.right_kernel)
    if (d.space() != step.to_right)
      throw std::invalid_argument(std::string(op) + ": right kernel over a mismatched space");
  for (const auto& [a, b] : source.pairs()) {
    if (require_proper &&
        (!step.left_kernel[a].is_proper() || !step.right_kernel[b].is_proper()))
      throw std::invalid_argument(std::string(op) +
                                  ": kernels must be proper distributions on related pairs");
    auto it = step.pair_witnesses.find({a, b});
    if (it == step.pair_witnesses.end())
      throw std::invalid_argument(std::string(op) + ": missing witnesses for a related pair");
    LiftingJudgment pair_judgment(kind, step.left_kernel[a], step.right_kernel[b],
                                  step.target_relation, step.params, step.fdiv_delta);
    require_valid_pair(pair_judgment, it->second, op);
  }
}

}  // namespace

CompositionRule basic_rule() {
  CompositionRule r;
  r.name = "basic";
  r.symmetric_only = false;
  r.apply = [](const std::vector<PrivacyParams>& steps) {
    PrivacyParams out;
    for (const PrivacyParams& p : steps) {
      out.k *= p.k;
      out.delta += p.delta;
    }
    return out;
  };
  return r;
}

CompositionRule advanced_rule(const Rat& omega) {
  if (omega <= 0 || omega >= 1)
    throw std::invalid_argument("advanced_rule: omega must lie in (0,1)");
  CompositionRule r;
  r.name = "advanced";
  r.symmetric_only = true;
  r.apply = [omega](const std::vector<PrivacyParams>& steps) {
    if (steps.empty()) throw std::invalid_argument("advanced rule needs at least one step");
    for (const PrivacyParams& p : steps)
      if (p.k != steps.front().k || p.delta != steps.front().delta)
        throw std::invalid_argument("advanced rule needs uniform per-step parameters");
    const auto n = static_cast<double>(steps.size());
    const double eps = epsilon_of(steps.front().k);
    PrivacyParams out;
    if (steps.front().k == 1) {
      out.k = 1;  // eps* degenerates to 0
    } else {
      const double eps_star = std::sqrt(2.0 * n * std::log(1.0 / to_double(omega))) * eps +
                              n * eps * (std::exp(eps) - 1.0);
      out.k = rational_upper_bound(std::exp(eps_star), 12);
    }
    out.delta = Rat(steps.size()) * steps.front().delta + omega;
    return out;
  };
  return r;
}

TransitiveComposition transitive_compose(const LiftingJudgment& j1, const WitnessPair& w1,
                                         const LiftingJudgment& j2, const WitnessPair& w2) {
  require_star_kind(j1, "transitive_compose");
  require_star_kind(j2, "transitive_compose");
  if (j1.relation.right_space() != j2.relation.left_space())
    throw std::invalid_argument("transitive_compose: middle spaces do not match");
  if (!(j1.mu2 == j2.mu1))
    throw std::invalid_argument("transitive_compose: middle distributions differ");
  require_valid_pair(j1, w1, "transitive_compose");
  require_valid_pair(j2, w2, "transitive_compose");
  PrivacyParams params{j1.params.k * j2.params.k,
                       j1.params.delta + j1.params.k * j2.params.delta};
  return {std::move(params), compose(j2.relation, j1.relation)};
}

BindComposition bind_compose_witnesses(const LiftingJudgment& outer, const WitnessPair& w,
                                       const KernelLifting& inner) {
  const auto tag = outer.kind.tag;
  if (tag != LiftingKindTag::star && tag != LiftingKindTag::sym_star &&
      tag != LiftingKindTag::fdiv_star)
    throw std::invalid_argument("bind_compose_witnesses: expected a star-style judgment");
  require_valid_pair(outer, w, "bind_compose_witnesses");
  check_kernel_lifting(inner, outer.mu1.space(), outer.mu2.space(), outer.relation,
                       pair_kind_of(outer), /*require_proper=*/false, "bind_compose_witnesses");

  const SampleSpace& b1 = inner.to_left;
  const SampleSpace& b2 = inner.to_right;
  const SampleSpace b1_star = b1.star_extended();
  const SampleSpace b2_star = b2.star_extended();

  // xi_left = bind of eta_left with the case kernel: inner left witnesses on
  // related pairs, (left kernel x Dirac(star)) on the star column.
  std::vector<Rat> xi_left(static_cast<size_t>(b1.size()) * b2_star.size(), Rat(0));
  const SampleSpace& a2_star = w.eta_left.right_space();
  for (int a1 = 0; a1 < w.eta_left.left_space().size(); ++a1)
    for (int a2 = 0; a2 < a2_star.size(); ++a2) {
      const Rat& m = w.eta_left.mass(a1, a2);
      if (m == 0) continue;
      if (a2_star.is_star(a2)) {
        const SubDistribution& g = inner.left_kernel[a1];
        for (int c1 = 0; c1 < b1.size(); ++c1)
          xi_left[static_cast<size_t>(c1) * b2_star.size() + b2_star.star_index()] +=
              m * g.mass(c1);
      } else {
        const WitnessPair& wp = inner.pair_witnesses.at({a1, a2});
        for (int c1 = 0; c1 < b1.size(); ++c1)
          for (int c2 = 0; c2 < b2_star.size(); ++c2)
            xi_left[static_cast<size_t>(c1) * b2_star.size() + c2] +=
                m * wp.eta_left.mass(c1, c2);
      }
    }

  std::vector<Rat> xi_right(static_cast<size_t>(b1_star.size()) * b2.size(), Rat(0));
  const SampleSpace& a1_star = w.eta_right.left_space();
  for (int a1 = 0; a1 < a1_star.size(); ++a1)
    for (int a2 = 0; a2 < w.eta_right.right_space().size(); ++a2) {
      const Rat& m = w.eta_right.mass(a1, a2);
      if (m == 0) continue;
      if (a1_star.is_star(a1)) {
        const SubDistribution& h = inner.right_kernel[a2];
        for (int c2 = 0; c2 < b2.size(); ++c2)
          xi_right[static_cast<size_t>(b1_star.star_index()) * b2.size() + c2] +=
              m * h.mass(c2);
      } else {
        const WitnessPair& wp = inner.pair_witnesses.at({a1, a2});
        for (int c1 = 0; c1 < b1_star.size(); ++c1)
          for (int c2 = 0; c2 < b2.size(); ++c2)
            xi_right[static_cast<size_t>(c1) * b2.size() + c2] += m * wp.eta_right.mass(c1, c2);
      }
    }

  SubDistribution bound1 =
      bind(outer.mu1, b1, [&](int a) { return inner.left_kernel[a]; });
  SubDistribution bound2 =
      bind(outer.mu2, b2, [&](int a) { return inner.right_kernel[a]; });
  LiftingJudgment judgment(outer.kind, std::move(bound1), std::move(bound2),
                           inner.target_relation,
                           PrivacyParams{outer.params.k * inner.params.k,
                                         outer.params.delta + inner.params.delta},
                           outer.fdiv_delta + inner.fdiv_delta);
  WitnessPair witnesses(JointSubDistribution(b1, b2_star, std::move(xi_left)),
                        JointSubDistribution(b1_star, b2, std::move(xi_right)));
  return {std::move(judgment), std::move(witnesses)};
}

PrivacyParams up_to_bad(UpToBadSide side, const Event& theta, const FiniteRelation& plain,
                        const LiftingJudgment& j, const WitnessPair& w) {
  require_star_kind(j, "up_to_bad");
  const FiniteRelation conditional =
      side == UpToBadSide::left ? implies_left(theta, plain) : implies_right(theta, plain);
  if (!(j.relation == conditional))
    throw std::invalid_argument("up_to_bad: judgment relation is not the conditional relation");
  require_valid_pair(j, w, "up_to_bad");
  if (side == UpToBadSide::left) {
    const Rat bad = j.mu1.event_prob(complement(j.mu1.space(), theta));
    return {j.params.k, j.params.delta + bad};
  }
  const Rat bad = j.mu2.event_prob(complement(j.mu2.space(), theta));
  return {j.params.k, j.params.delta + j.params.k * bad};
}

ConjoinResult conjoin_one_sided(UpToBadSide side, const Event& theta, const LiftingJudgment& j,
                                const WitnessPair& w) {
  require_star_kind(j, "conjoin_one_sided");
  require_valid_pair(j, w, "conjoin_one_sided");
  if (side == UpToBadSide::left) {
    const Rat bad = j.mu1.event_prob(complement(j.mu1.space(), theta));
    return {{j.params.k, j.params.delta + bad}, conjoin_left(theta, j.relation)};
  }
  const Rat bad = j.mu2.event_prob(complement(j.mu2.space(), theta));
  return {{j.params.k, j.params.delta + j.params.k * bad}, conjoin_right(theta, j.relation)};
}

SubsetCouplingResult subset_coupling(const SubDistribution& mu1, const SubDistribution& mu2,
                                     const Event& p1, const Event& p2, const Rat& k,
                                     const Rat& delta) {
  FiniteRelation relation = subset_equivalence(mu1.space(), mu2.space(), p1, p2);
  using Status = SubsetCouplingResult::Status;
  if (mu1.event_prob(p1) > k * mu2.event_prob(p2) + delta)
    return {Status::fails_first, std::move(relation), std::nullopt};
  if (mu1.event_prob(complement(mu1.space(), p1)) >
      k * mu2.event_prob(complement(mu2.space(), p2)) + delta)
    return {Status::fails_second, std::move(relation), std::nullopt};
  SynthesisResult synthesized = synthesize_star_lifting(mu1, mu2, relation, k, delta);
  if (auto* witnesses = std::get_if<WitnessPair>(&synthesized))
    return {Status::holds, std::move(relation), std::move(*witnesses)};
  // Both subset inequalities hold, so only the full spaces can violate; this
  // needs |mu1| > k*|mu2| + delta and cannot arise for proper inputs.
  return {Status::fails_total_mass, std::move(relation), std::nullopt};
}

namespace {

WitnessPair pushforward_witnesses(const TotalMap& f1, const TotalMap& f2, const WitnessPair& w) {
  const SampleSpace b1 = f1.to;
  const SampleSpace b2_star = f2.to.star_extended();
  std::vector<Rat> left(static_cast<size_t>(b1.size()) * b2_star.size(), Rat(0));
  const SampleSpace& a2_star = w.eta_left.right_space();
  for (int a1 = 0; a1 < f1.from.size(); ++a1)
    for (int a2 = 0; a2 < a2_star.size(); ++a2) {
      const Rat& m = w.eta_left.mass(a1, a2);
      if (m == 0) continue;
      const int c2 = a2_star.is_star(a2) ? b2_star.star_index() : f2(a2);
      left[static_cast<size_t>(f1(a1)) * b2_star.size() + c2] += m;
    }
  const SampleSpace b1_star = f1.to.star_extended();
  const SampleSpace b2 = f2.to;
  std::vector<Rat> right(static_cast<size_t>(b1_star.size()) * b2.size(), Rat(0));
  const SampleSpace& a1_star = w.eta_right.left_space();
  for (int a1 = 0; a1 < a1_star.size(); ++a1)
    for (int a2 = 0; a2 < f2.from.size(); ++a2) {
      const Rat& m = w.eta_right.mass(a1, a2);
      if (m == 0) continue;
      const int c1 = a1_star.is_star(a1) ? b1_star.star_index() : f1(a1);
      right[static_cast<size_t>(c1) * b2.size() + f2(a2)] += m;
    }
  return WitnessPair(JointSubDistribution(b1, b2_star, std::move(left)),
                     JointSubDistribution(b1_star, b2, std::move(right)));
}

// Conditional weights alpha(a) = mu(a) / mu[class of a], zero on zero-mass
// classes.
std::vector<Rat> class_weights(const TotalMap& f, const SubDistribution& mu) {
  std::vector<Rat> class_mass(f.to.size(), Rat(0));
  for (int a = 0; a < f.from.size(); ++a) class_mass[f(a)] += mu.mass(a);
  std::vector<Rat> alpha(f.from.size(), Rat(0));
  for (int a = 0; a < f.from.size(); ++a)
    if (class_mass[f(a)] != 0) alpha[a] = mu.mass(a) / class_mass[f(a)];
  return alpha;
}

WitnessPair pullback_witnesses(const TotalMap& f1, const TotalMap& f2,
                               const SubDistribution& mu1, const SubDistribution& mu2,
                               const WitnessPair& w) {
  const std::vector<Rat> alpha1 = class_weights(f1, mu1);
  const std::vector<Rat> alpha2 = class_weights(f2, mu2);
  const SampleSpace& a1_space = mu1.space();
  const SampleSpace& a2_space = mu2.space();
  const SampleSpace a1_star = a1_space.star_extended();
  const SampleSpace a2_star = a2_space.star_extended();
  const SampleSpace& b2_star = w.eta_left.right_space();
  const SampleSpace& b1_star = w.eta_right.left_space();

  std::vector<Rat> left(static_cast<size_t>(a1_space.size()) * a2_star.size(), Rat(0));
  for (int a1 = 0; a1 < a1_space.size(); ++a1) {
    for (int a2 = 0; a2 < a2_space.size(); ++a2)
      left[static_cast<size_t>(a1) * a2_star.size() + a2] =
          alpha1[a1] * alpha2[a2] * w.eta_left.mass(f1(a1), f2(a2));
    left[static_cast<size_t>(a1) * a2_star.size() + a2_star.star_index()] =
        alpha1[a1] * w.eta_left.mass(f1(a1), b2_star.star_index());
  }

  std::vector<Rat> right(static_cast<size_t>(a1_star.size()) * a2_space.size(), Rat(0));
  for (int a2 = 0; a2 < a2_space.size(); ++a2) {
    for (int a1 = 0; a1 < a1_space.size(); ++a1)
      right[static_cast<size_t>(a1) * a2_space.size() + a2] =
          alpha1[a1] * alpha2[a2] * w.eta_right.mass(f1(a1), f2(a2));
    right[static_cast<size_t>(a1_star.star_index()) * a2_space.size() + a2] =
        alpha2[a2] * w.eta_right.mass(b1_star.star_index(), f2(a2));
  }

  return WitnessPair(JointSubDistribution(a1_space, a2_star, std::move(left)),
                     JointSubDistribution(a1_star, a2_space, std::move(right)));
}

}  // namespace

TransferResult mapping_transfer(TransferDirection dir, const TotalMap& f1, const TotalMap& f2,
                                const FiniteRelation& codomain_relation,
                                const LiftingJudgment& j, const WitnessPair& w,
                                const SubDistribution* preimage_mu1,
                                const SubDistribution* preimage_mu2) {
  const auto tag = j.kind.tag;
  if (tag != LiftingKindTag::star && tag != LiftingKindTag::fdiv_star)
    throw std::invalid_argument("mapping_transfer: expected a star or fdiv-star judgment");
  if (codomain_relation.left_space() != f1.to || codomain_relation.right_space() != f2.to)
    throw std::invalid_argument("mapping_transfer: relation spaces do not match the maps");

  if (dir == TransferDirection::forward) {
    if (!(j.relation == pullback(f1, f2, codomain_relation)))
      throw std::invalid_argument(
          "mapping_transfer: judgment relation is not the pullback of the target relation");
    require_valid_pair(j, w, "mapping_transfer");
    LiftingJudgment transferred(j.kind, pushforward(f1, j.mu1), pushforward(f2, j.mu2),
                                codomain_relation, j.params, j.fdiv_delta);
    if (tag == LiftingKindTag::fdiv_star)
      return {std::move(transferred), pushforward_witnesses(f1, f2, w)};
    SynthesisResult s = synthesize_star_lifting(transferred.mu1, transferred.mu2,
                                                codomain_relation, j.params.k, j.params.delta);
    auto* witnesses = std::get_if<WitnessPair>(&s);
    if (!witnesses) throw std::logic_error("mapping_transfer: forward synthesis failed");
    return {std::move(transferred), std::move(*witnesses)};
  }

  if (!(j.relation == codomain_relation))
    throw std::invalid_argument("mapping_transfer: judgment is not over the target relation");
  if (!preimage_mu1 || !preimage_mu2)
    throw std::invalid_argument("mapping_transfer: backward transfer needs the preimages");
  if (preimage_mu1->space() != f1.from || preimage_mu2->space() != f2.from)
    throw std::invalid_argument("mapping_transfer: preimages over mismatched spaces");
  if (!(pushforward(f1, *preimage_mu1) == j.mu1) || !(pushforward(f2, *preimage_mu2) == j.mu2))
    throw std::invalid_argument("mapping_transfer: preimages do not push forward to the judgment");
  require_valid_pair(j, w, "mapping_transfer");

  LiftingJudgment transferred(j.kind, *preimage_mu1, *preimage_mu2,
                              pullback(f1, f2, codomain_relation), j.params, j.fdiv_delta);
  if (tag == LiftingKindTag::fdiv_star) {
    const WitnessPair restricted = restrict_witness_support(j, w);
    return {std::move(transferred),
            pullback_witnesses(f1, f2, *preimage_mu1, *preimage_mu2, restricted)};
  }
  SynthesisResult s = synthesize_star_lifting(transferred.mu1, transferred.mu2,
                                              transferred.relation, j.params.k, j.params.delta);
  auto* witnesses = std::get_if<WitnessPair>(&s);
  if (!witnesses) throw std::logic_error("mapping_transfer: backward synthesis failed");
  return {std::move(transferred), std::move(*witnesses)};
}

ChainComposition compose_lifted_chain(const KernelChain& chain, int a0, int b0,
                                      const CompositionRule& rule, bool symmetric) {
  if (chain.steps.empty())
    throw std::invalid_argument("compose_lifted_chain: chain must have at least one step");
  if (rule.symmetric_only && !symmetric)
    throw std::invalid_argument("compose_lifted_chain: rule " + rule.name +
                                " requires symmetric witnesses");
  if (!chain.initial.contains(a0, b0))
    throw std::invalid_argument("compose_lifted_chain: start pair not in the initial relation");

  const LiftingKind kind = symmetric ? LiftingKind::sym_star() : LiftingKind::star();

  SampleSpace left = chain.initial.left_space();
  SampleSpace right = chain.initial.right_space();
  SubDistribution composed_left = SubDistribution::dirac(left, a0);
  SubDistribution composed_right = SubDistribution::dirac(right, b0);

  // State pair over the star-extended product, one per branch.
  SampleSpace ls = left.star_extended();
  SampleSpace rs = right.star_extended();
  std::vector<Rat> state_l(static_cast<size_t>(ls.size()) * rs.size(), Rat(0));
  std::vector<Rat> state_r = state_l;
  state_l[static_cast<size_t>(a0) * rs.size() + b0] = 1;
  state_r[static_cast<size_t>(a0) * rs.size() + b0] = 1;

  std::vector<PrivacyParams> per_step;
  const FiniteRelation* source = &chain.initial;
  for (const KernelLifting& step : chain.steps) {
    check_kernel_lifting(step, left, right, *source, kind, /*require_proper=*/true,
                         "compose_lifted_chain");

    const SampleSpace nls = step.to_left.star_extended();
    const SampleSpace nrs = step.to_right.star_extended();
    std::vector<Rat> next_l(static_cast<size_t>(nls.size()) * nrs.size(), Rat(0));
    std::vector<Rat> next_r = next_l;

    const auto star_cases = [&](std::vector<Rat>& next, int a, int b, const Rat& m) {
      if (ls.is_star(a) && rs.is_star(b)) {
        next[static_cast<size_t>(nls.star_index()) * nrs.size() + nrs.star_index()] += m;
      } else if (rs.is_star(b)) {
        const SubDistribution& g = step.left_kernel[a];
        for (int c = 0; c < step.to_left.size(); ++c)
          next[static_cast<size_t>(c) * nrs.size() + nrs.star_index()] += m * g.mass(c);
      } else {
        const SubDistribution& h = step.right_kernel[b];
        for (int c = 0; c < step.to_right.size(); ++c)
          next[static_cast<size_t>(nls.star_index()) * nrs.size() + c] += m * h.mass(c);
      }
    };

    for (int a = 0; a < ls.size(); ++a)
      for (int b = 0; b < rs.size(); ++b) {
        const size_t at = static_cast<size_t>(a) * rs.size() + b;
        const bool fringe = ls.is_star(a) || rs.is_star(b);
        if (const Rat& m = state_l[at]; m != 0) {
          if (fringe) {
            star_cases(next_l, a, b, m);
          } else if (source->contains(a, b)) {
            const JointSubDistribution wl = step.pair_witnesses.at({a, b}).extended_left();
            for (int c1 = 0; c1 < nls.size(); ++c1)
              for (int c2 = 0; c2 < nrs.size(); ++c2)
                next_l[static_cast<size_t>(c1) * nrs.size() + c2] += m * wl.mass(c1, c2);
          }
        }
        if (const Rat& m = state_r[at]; m != 0) {
          if (fringe) {
            star_cases(next_r, a, b, m);
          } else if (source->contains(a, b)) {
            const JointSubDistribution wr = step.pair_witnesses.at({a, b}).extended_right();
            for (int c1 = 0; c1 < nls.size(); ++c1)
              for (int c2 = 0; c2 < nrs.size(); ++c2)
                next_r[static_cast<size_t>(c1) * nrs.size() + c2] += m * wr.mass(c1, c2);
          }
        }
      }

    composed_left = bind(composed_left, step.to_left, [&](int a) { return step.left_kernel[a]; });
    composed_right =
        bind(composed_right, step.to_right, [&](int a) { return step.right_kernel[a]; });
    left = step.to_left;
    right = step.to_right;
    ls = nls;
    rs = nrs;
    state_l = std::move(next_l);
    state_r = std::move(next_r);
    per_step.push_back(step.params);
    source = &step.target_relation;
  }

  // The left branch never reaches the star row, nor the right branch the star
  // column; drop them structurally to recover the witness shapes.
  std::vector<Rat> xi_left(static_cast<size_t>(left.size()) * rs.size(), Rat(0));
  for (int a = 0; a < left.size(); ++a)
    for (int b = 0; b < rs.size(); ++b)
      xi_left[static_cast<size_t>(a) * rs.size() + b] =
          state_l[static_cast<size_t>(a) * rs.size() + b];
  for (int b = 0; b < rs.size(); ++b)
    if (state_l[static_cast<size_t>(ls.star_index()) * rs.size() + b] != 0)
      throw std::logic_error("compose_lifted_chain: left branch leaked mass to the star row");

  std::vector<Rat> xi_right(static_cast<size_t>(ls.size()) * right.size(), Rat(0));
  for (int a = 0; a < ls.size(); ++a)
    for (int b = 0; b < right.size(); ++b)
      xi_right[static_cast<size_t>(a) * right.size() + b] =
          state_r[static_cast<size_t>(a) * rs.size() + b];
  for (int a = 0; a < ls.size(); ++a)
    if (state_r[static_cast<size_t>(a) * rs.size() + rs.star_index()] != 0)
      throw std::logic_error("compose_lifted_chain: right branch leaked mass to the star column");

  LiftingJudgment judgment(kind, std::move(composed_left), std::move(composed_right), *source,
                           rule.apply(per_step));
  WitnessPair witnesses(JointSubDistribution(left, rs, std::move(xi_left)),
                        JointSubDistribution(ls, right, std::move(xi_right)));
  return {std::move(judgment), std::move(witnesses)};
}

}  // namespace starlift
