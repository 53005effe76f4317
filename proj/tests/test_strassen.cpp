#include <doctest.h>

#include "support/generators.hpp"

using namespace starlift;
using testing::Rng;

namespace {

void check_flow_legal(const FlowNetwork& net, const Flow& flow) {
  Rat finite_total = 0;
  for (const FlowEdge& e : net.edges)
    if (e.capacity) finite_total += *e.capacity;
  std::vector<Rat> net_out(net.node_count, Rat(0));
  for (size_t i = 0; i < net.edges.size(); ++i) {
    const Rat& f = flow.edge_flow[i];
    CHECK(f >= Rat(0));
    CHECK(f <= (net.edges[i].capacity ? *net.edges[i].capacity : finite_total + 1));
    net_out[net.edges[i].from] += f;
    net_out[net.edges[i].to] -= f;
  }
  for (int v = 0; v < net.node_count; ++v)
    if (v != net.source && v != net.sink) CHECK(net_out[v] == Rat(0));  // conservation
  CHECK(net_out[net.source] == flow.mass);
  CHECK(net_out[net.sink] == -flow.mass);
}

struct ShiftInstance {
  SampleSpace space = SampleSpace::integer_range(0, 1);
  SubDistribution mu{space, {Rat(2, 3), Rat(1, 3)}};
  FiniteRelation relation = FiniteRelation::from_pairs(space, space, {{"0", "1"}});
};

}  // namespace

TEST_CASE("max flow: bottleneck on a single path") {
  FlowNetwork net;
  net.node_count = 4;
  net.source = 0;
  net.sink = 3;
  net.edges = {{0, 1, Rat(1, 2)}, {1, 2, std::nullopt}, {2, 3, Rat(1, 3)}};
  Flow f = max_flow(net);
  CHECK(f.mass == Rat(1, 3));
  check_flow_legal(net, f);
}

TEST_CASE("max flow: two disjoint unit paths add up") {
  FlowNetwork net;
  net.node_count = 4;
  net.source = 0;
  net.sink = 3;
  net.edges = {{0, 1, Rat(1)}, {1, 3, Rat(1)}, {0, 2, Rat(1)}, {2, 3, Rat(1)}};
  Flow f = max_flow(net);
  CHECK(f.mass == Rat(2));
  check_flow_legal(net, f);
}

TEST_CASE("max flow equals the brute-force minimum cut on random bipartite networks") {
  Rng rng(51);
  for (int round = 0; round < 150; ++round) {
    const int na = rng.uniform(1, 6);
    const int nb = rng.uniform(1, 6);
    FlowNetwork net;
    net.node_count = na + nb + 2;
    net.source = 0;
    net.sink = net.node_count - 1;
    for (int a = 0; a < na; ++a)
      net.edges.push_back({0, 1 + a, Rat(rng.uniform(0, 16), 16)});
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b)
        if (rng.coin()) {
          // a mix of unbounded and finite middle edges
          if (rng.coin())
            net.edges.push_back({1 + a, 1 + na + b, std::nullopt});
          else
            net.edges.push_back({1 + a, 1 + na + b, Rat(rng.uniform(0, 8), 8)});
        }
    for (int b = 0; b < nb; ++b)
      net.edges.push_back({1 + na + b, net.sink, Rat(rng.uniform(0, 16), 16)});

    Flow f = max_flow(net);
    check_flow_legal(net, f);
    CHECK(f.mass == testing::bruteforce_min_cut(net));
  }
}

TEST_CASE("synthesis network construction for a single Dirac") {
  SampleSpace s({"a"});
  SubDistribution mu = SubDistribution::unit(s, "a");
  StrassenNetwork net = build_strassen_network(mu, mu, FiniteRelation::equality(s), Rat(1),
                                               Rat(0));
  CHECK(net.net.omega == Rat(1));
  CHECK(net.net.node_count == 6);  // source, a + star, a + star, sink
  Flow f = max_flow(net.net);
  CHECK(f.mass == Rat(1));
}

TEST_CASE("synthesis network construction for the shift instance") {
  ShiftInstance inst;
  StrassenNetwork s = build_strassen_network(inst.mu, inst.mu, inst.relation, Rat(2), Rat(1, 3));
  CHECK(s.net.omega == Rat(7, 6));
  CHECK(s.net.node_count == 8);  // source, 2+star left, 2+star right, sink

  // Source edges carry mu1/k, the left star edge omega - |mu1|/k.
  CHECK(*s.net.edges[0].capacity == Rat(1, 3));
  CHECK(*s.net.edges[1].capacity == Rat(1, 6));
  CHECK(*s.net.edges[2].capacity == Rat(2, 3));
  // Sink edges carry mu2, the right star edge delta/k.
  Rat star_sink_cap;
  for (const FlowEdge& e : s.net.edges)
    if (e.to == s.net.sink && e.from == s.right_node(2)) star_sink_cap = *e.capacity;
  CHECK(star_sink_cap == Rat(1, 6));

  // Unbounded edges exactly on the relation plus the star row and column.
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      const bool expect = a == 2 || b == 2 || (a == 0 && b == 1);
      CHECK((s.pair_edge(a, b) >= 0) == expect);
    }
}

TEST_CASE("degenerate construction: even the full space violates") {
  SampleSpace s({"x"});
  SubDistribution heavy = SubDistribution::unit(s, "x");
  SubDistribution light(s, {Rat(1, 4)});
  FiniteRelation eq = FiniteRelation::equality(s);
  CHECK_THROWS_AS(build_strassen_network(heavy, light, eq, Rat(2), Rat(1, 8)),
                  sato_full_space_violation);
  SynthesisResult r = synthesize_star_lifting(heavy, light, eq, Rat(2), Rat(1, 8));
  const auto* refuted = std::get_if<ViolatingSubset>(&r);
  REQUIRE(refuted != nullptr);
  CHECK(refuted->atoms == Event{0});
  CHECK(refuted->violation == Rat(1) - Rat(1, 2) - Rat(1, 8));
}

TEST_CASE("empty relation is liftable once delta covers the whole left mass") {
  SampleSpace s({"x", "y"});
  SubDistribution mu = SubDistribution::uniform(s);
  FiniteRelation empty(s, s);
  SynthesisResult r = synthesize_star_lifting(mu, mu, empty, Rat(1), Rat(1));
  REQUIRE(std::holds_alternative<WitnessPair>(r));
  LiftingJudgment j(LiftingKind::star(), mu, mu, empty, {Rat(1), Rat(1)});
  CHECK(validate_witnesses(j, std::get<WitnessPair>(r)).holds);
  CHECK(std::holds_alternative<ViolatingSubset>(
      synthesize_star_lifting(mu, mu, empty, Rat(1), Rat(1, 2) - Rat(1, 100))));
}

TEST_CASE("classical coupling: identical distributions over equality at (1, 0)") {
  SampleSpace s({"x", "y", "z"});
  SubDistribution mu(s, {Rat(1, 2), Rat(1, 3), Rat(1, 6)});
  SynthesisResult r = synthesize_star_lifting(mu, mu, FiniteRelation::equality(s), Rat(1), Rat(0));
  REQUIRE(std::holds_alternative<WitnessPair>(r));
  LiftingJudgment j(LiftingKind::star(), mu, mu, FiniteRelation::equality(s), {Rat(1), Rat(0)});
  CHECK(validate_witnesses(j, std::get<WitnessPair>(r)).holds);
}

TEST_CASE("shift instance: liftable at 1/3, refuted by {0,1} just below") {
  ShiftInstance inst;
  SynthesisResult good =
      synthesize_star_lifting(inst.mu, inst.mu, inst.relation, Rat(2), Rat(1, 3));
  REQUIRE(std::holds_alternative<WitnessPair>(good));

  SynthesisResult bad = synthesize_star_lifting(inst.mu, inst.mu, inst.relation, Rat(2),
                                                Rat(1, 3) - Rat(1, 100));
  const auto* refuted = std::get_if<ViolatingSubset>(&bad);
  REQUIRE(refuted != nullptr);
  CHECK(refuted->atoms == Event{0, 1});
  // mu[{0,1}] = 1 > 2 * mu[R({0,1})] + delta = 2/3 + 97/300
  CHECK(refuted->violation == Rat(1) - Rat(2, 3) - (Rat(1, 3) - Rat(1, 100)));
}

TEST_CASE("nested subset coupling instance from the corollary") {
  SampleSpace s = SampleSpace::integer_range(1, 4);
  SubDistribution mu = SubDistribution::uniform(s);
  FiniteRelation r = subset_equivalence(s, s, event_from_labels(s, {"1", "2"}),
                                        event_from_labels(s, {"1"}));
  SynthesisResult good = synthesize_star_lifting(mu, mu, r, Rat(2), Rat(0));
  REQUIRE(std::holds_alternative<WitnessPair>(good));
  LiftingJudgment j(LiftingKind::star(), mu, mu, r, {Rat(2), Rat(0)});
  CHECK(validate_witnesses(j, std::get<WitnessPair>(good)).holds);
  CHECK(!sato_holds_bruteforce(mu, mu, r, Rat(2), Rat(0)).has_value());
}

TEST_CASE("subset oracle worked examples") {
  SampleSpace s({"x", "y"});
  SubDistribution mu = SubDistribution::uniform(s);
  CHECK(!sato_holds_bruteforce(mu, mu, FiniteRelation::equality(s), Rat(1), Rat(0)).has_value());

  ShiftInstance inst;
  auto refuted = sato_holds_bruteforce(inst.mu, inst.mu, inst.relation, Rat(2),
                                       Rat(1, 3) - Rat(1, 100));
  REQUIRE(refuted.has_value());
  CHECK(refuted->atoms == Event{0, 1});  // lexicographically least maximizer

  SampleSpace yn({"y", "n"});
  SubDistribution p(yn, {Rat(3, 4), Rat(1, 4)});
  SubDistribution q(yn, {Rat(1, 4), Rat(3, 4)});
  CHECK(!sato_holds_bruteforce(p, q, FiniteRelation::equality(yn), Rat(3), Rat(0)).has_value());

  SampleSpace big = SampleSpace::integer_range(0, 24);
  SubDistribution u = SubDistribution::uniform(big);
  CHECK_THROWS_AS(
      sato_holds_bruteforce(u, u, FiniteRelation::equality(big), Rat(1), Rat(0)),
      oracle_cap_exceeded);
}

TEST_CASE("tightest delta worked examples") {
  SampleSpace coin({"H", "T"});
  SubDistribution mu1(coin, {Rat(3, 5), Rat(2, 5)});
  SubDistribution mu2(coin, {Rat(1, 2), Rat(1, 2)});
  CHECK(tightest_delta(mu1, mu1, FiniteRelation::equality(coin), Rat(1)) == Rat(0));
  CHECK(tightest_delta(mu1, mu2, FiniteRelation::equality(coin), Rat(1)) == Rat(1, 10));

  ShiftInstance inst;
  CHECK(tightest_delta(inst.mu, inst.mu, inst.relation, Rat(2)) == Rat(1, 3));
}

TEST_CASE("synthesis, the subset oracle, and tightest delta agree on random instances") {
  Rng rng(52);
  for (int round = 0; round < 300; ++round) {
    SampleSpace a = testing::random_space(rng, 1, 6, "a");
    SampleSpace b = testing::random_space(rng, 1, 6, "b");
    SubDistribution mu1 = testing::random_subdist(rng, a, 16, rng.coin());
    SubDistribution mu2 = testing::random_subdist(rng, b, 16, rng.coin());
    FiniteRelation relation = testing::random_relation(rng, a, b);
    const Rat k = rng.pick(testing::factor_choices());
    const Rat delta = rng.pick(testing::delta_choices());

    SynthesisResult s = synthesize_star_lifting(mu1, mu2, relation, k, delta);
    auto violated = sato_holds_bruteforce(mu1, mu2, relation, k, delta);
    CHECK(std::holds_alternative<WitnessPair>(s) == !violated.has_value());

    if (const auto* w = std::get_if<WitnessPair>(&s)) {
      LiftingJudgment j(LiftingKind::star(), mu1, mu2, relation, {k, delta});
      ValidationReport r = validate_witnesses(j, *w);
      CHECK(r.holds);
    } else {
      const auto& x = std::get<ViolatingSubset>(s);
      CHECK(mu1.event_prob(x.atoms) > k * mu2.event_prob(image(relation, x.atoms)) + delta);
      CHECK(x.violation ==
            mu1.event_prob(x.atoms) - k * mu2.event_prob(image(relation, x.atoms)) - delta);
    }

    const Rat tight = tightest_delta(mu1, mu2, relation, k);
    auto at_zero = sato_holds_bruteforce(mu1, mu2, relation, k, Rat(0));
    CHECK(tight == (at_zero ? at_zero->violation : Rat(0)));
    CHECK(!sato_holds_bruteforce(mu1, mu2, relation, k, tight).has_value());
    if (tight > 0)
      CHECK(sato_holds_bruteforce(mu1, mu2, relation, k, tight - Rat(1, 1000)).has_value());
  }
}

TEST_CASE("classical finite Strassen specialization at k = 1, delta = 0") {
  Rng rng(53);
  for (int round = 0; round < 100; ++round) {
    SampleSpace a = testing::random_space(rng, 1, 5, "a");
    SampleSpace b = testing::random_space(rng, 1, 5, "b");
    SubDistribution mu1 = testing::random_subdist(rng, a, 12, true);
    SubDistribution mu2 = testing::random_subdist(rng, b, 12, true);
    FiniteRelation relation = testing::random_relation(rng, a, b, 0.6);
    const bool liftable = std::holds_alternative<WitnessPair>(
        synthesize_star_lifting(mu1, mu2, relation, Rat(1), Rat(0)));
    bool condition = true;
    for (unsigned long mask = 0; mask < (1ul << a.size()) && condition; ++mask) {
      Event x;
      for (int i = 0; i < a.size(); ++i)
        if (mask & (1ul << i)) x.push_back(i);
      condition = mu1.event_prob(x) <= mu2.event_prob(image(relation, x));
    }
    CHECK(liftable == condition);
  }
}

TEST_CASE("null sub-distributions flow through the whole pipeline") {
  SampleSpace s({"x", "y"});
  SubDistribution null{s};
  SubDistribution proper = SubDistribution::uniform(s);
  FiniteRelation eq = FiniteRelation::equality(s);

  // null ~ null at (1, 0): the trivial lifting.
  SynthesisResult nn = synthesize_star_lifting(null, null, eq, Rat(1), Rat(0));
  REQUIRE(std::holds_alternative<WitnessPair>(nn));
  LiftingJudgment j0(LiftingKind::star(), null, null, eq, {Rat(1), Rat(0)});
  CHECK(validate_witnesses(j0, std::get<WitnessPair>(nn)).holds);

  // A null left distribution lifts against anything.
  SynthesisResult np = synthesize_star_lifting(null, proper, eq, Rat(1), Rat(0));
  REQUIRE(std::holds_alternative<WitnessPair>(np));

  // The reverse needs delta to cover the whole left mass.
  CHECK(std::holds_alternative<ViolatingSubset>(
      synthesize_star_lifting(proper, null, eq, Rat(3), Rat(1, 2))));
  SynthesisResult pn = synthesize_star_lifting(proper, null, eq, Rat(3), Rat(1));
  REQUIRE(std::holds_alternative<WitnessPair>(pn));
  CHECK(tightest_delta(proper, null, eq, Rat(3)) == Rat(1));

  // One-witness validation of the null joint: distance is the full left mass.
  LiftingJudgment one(LiftingKind::one(), proper, proper, eq, {Rat(1), Rat(1)});
  CHECK(validate_witnesses(one, JointSubDistribution(s, s)).holds);
  LiftingJudgment one_tight(LiftingKind::one(), proper, proper, eq, {Rat(1), Rat(1, 2)});
  ValidationReport r = validate_witnesses(one_tight, JointSubDistribution(s, s));
  CHECK(!r.holds);
  CHECK(r.failed == ValidationReport::Condition::distance);
}

TEST_CASE("tightest delta with equality equals the dp divergence") {
  Rng rng(54);
  for (int round = 0; round < 100; ++round) {
    SampleSpace s = testing::random_space(rng, 1, 6, "a");
    SubDistribution mu1 = testing::random_subdist(rng, s, 16, false);
    SubDistribution mu2 = testing::random_subdist(rng, s, 16, false);
    const Rat k = rng.pick(testing::factor_choices());
    CHECK(tightest_delta(mu1, mu2, FiniteRelation::equality(s), k) ==
          dp_divergence(k, mu1, mu2));
  }
}
