#include "starlift/strassen.hpp"

#include <algorithm>
#include <deque>

namespace starlift {

namespace {

struct Residual {
  // Two residual arcs per input edge: 2i forward, 2i+1 backward.
  std::vector<Rat> residual;
  std::vector<int> head;                  // arc id -> target node
  std::vector<std::vector<int>> adjacency;  // node -> arc ids, insertion order

  explicit Residual(const FlowNetwork& net) {
    Rat finite_total = 0;
    for (const FlowEdge& e : net.edges) {
      if (e.capacity) {
        if (*e.capacity < 0) throw std::invalid_argument("negative edge capacity");
        finite_total += *e.capacity;
      }
    }
    const Rat unbounded = finite_total + 1;
    residual.reserve(net.edges.size() * 2);
    head.reserve(net.edges.size() * 2);
    adjacency.assign(net.node_count, {});
    for (size_t i = 0; i < net.edges.size(); ++i) {
      const FlowEdge& e = net.edges[i];
      if (e.from < 0 || e.from >= net.node_count || e.to < 0 || e.to >= net.node_count)
        throw std::invalid_argument("edge endpoint out of range");
      residual.push_back(e.capacity ? *e.capacity : unbounded);
      head.push_back(e.to);
      adjacency[e.from].push_back(static_cast<int>(2 * i));
      residual.push_back(Rat(0));
      head.push_back(e.from);
      adjacency[e.to].push_back(static_cast<int>(2 * i + 1));
    }
  }
};

}  // namespace

Flow max_flow(const FlowNetwork& net) {
  if (net.source == net.sink) throw std::invalid_argument("source equals sink");
  Residual r(net);

  std::vector<int> parent_arc(net.node_count);
  while (true) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    parent_arc[net.source] = -2;
    std::deque<int> queue{net.source};
    while (!queue.empty() && parent_arc[net.sink] == -1) {
      int u = queue.front();
      queue.pop_front();
      for (int arc : r.adjacency[u]) {
        int v = r.head[arc];
        if (parent_arc[v] == -1 && r.residual[arc] > 0) {
          parent_arc[v] = arc;
          queue.push_back(v);
        }
      }
    }
    if (parent_arc[net.sink] == -1) break;

    Rat bottleneck;
    bool first = true;
    for (int v = net.sink; v != net.source;) {
      int arc = parent_arc[v];
      if (first || r.residual[arc] < bottleneck) bottleneck = r.residual[arc];
      first = false;
      v = r.head[arc ^ 1];
    }
    for (int v = net.sink; v != net.source;) {
      int arc = parent_arc[v];
      r.residual[arc] -= bottleneck;
      r.residual[arc ^ 1] += bottleneck;
      v = r.head[arc ^ 1];
    }
  }

  Flow f;
  f.edge_flow.resize(net.edges.size());
  for (size_t i = 0; i < net.edges.size(); ++i) f.edge_flow[i] = r.residual[2 * i + 1];
  for (size_t i = 0; i < net.edges.size(); ++i) {
    if (net.edges[i].from == net.source) f.mass += f.edge_flow[i];
    if (net.edges[i].to == net.source) f.mass -= f.edge_flow[i];
  }
  return f;
}

std::vector<bool> min_cut_source_side(const FlowNetwork& net, const Flow& flow) {
  // Rebuild residual capacities from the flow, then find everything that can
  // still reach the sink; the complement is the largest min-cut source side.
  Rat finite_total = 0;
  for (const FlowEdge& e : net.edges)
    if (e.capacity) finite_total += *e.capacity;
  const Rat unbounded = finite_total + 1;

  std::vector<std::vector<int>> reverse_adjacency(net.node_count);
  std::vector<Rat> residual(net.edges.size() * 2);
  std::vector<int> tail(net.edges.size() * 2);
  for (size_t i = 0; i < net.edges.size(); ++i) {
    const FlowEdge& e = net.edges[i];
    residual[2 * i] = (e.capacity ? *e.capacity : unbounded) - flow.edge_flow[i];
    residual[2 * i + 1] = flow.edge_flow[i];
    tail[2 * i] = e.from;
    tail[2 * i + 1] = e.to;
    reverse_adjacency[e.to].push_back(static_cast<int>(2 * i));
    reverse_adjacency[e.from].push_back(static_cast<int>(2 * i + 1));
  }

  std::vector<bool> reaches_sink(net.node_count, false);
  reaches_sink[net.sink] = true;
  std::deque<int> queue{net.sink};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int arc : reverse_adjacency[v]) {
      int u = tail[arc];
      if (!reaches_sink[u] && residual[arc] > 0) {
        reaches_sink[u] = true;
        queue.push_back(u);
      }
    }
  }

  std::vector<bool> source_side(net.node_count);
  for (int v = 0; v < net.node_count; ++v) source_side[v] = !reaches_sink[v];
  return source_side;
}

int StrassenNetwork::left_node(int a) const { return 1 + a; }
int StrassenNetwork::right_node(int b) const { return 1 + left.size() + 1 + b; }
int StrassenNetwork::pair_edge(int a, int b) const { return pair_edges.at(a).at(b); }

StrassenNetwork build_strassen_network(const SubDistribution& mu1, const SubDistribution& mu2,
                                       const FiniteRelation& relation, const Rat& k,
                                       const Rat& delta) {
  if (mu1.space() != relation.left_space() || mu2.space() != relation.right_space())
    throw std::invalid_argument("distributions do not match the relation spaces");
  if (mu1.space().has_star() || mu2.space().has_star())
    throw std::invalid_argument("spaces must not be star-extended");
  if (k < 1) throw std::invalid_argument("factor k must be at least 1");
  if (delta < 0) throw std::invalid_argument("delta must be non-negative");

  const Rat inv_k = Rat(1) / k;
  const Rat omega = mu2.total_mass() + inv_k * delta;
  const Rat star_source_cap = omega - inv_k * mu1.total_mass();
  if (star_source_cap < 0)
    throw sato_full_space_violation(
        "the full left space already violates the lifting condition");

  StrassenNetwork s;
  s.left = mu1.space();
  s.right = mu2.space();
  const int na = s.left.size();
  const int nb = s.right.size();

  FlowNetwork& net = s.net;
  net.node_count = na + nb + 4;
  net.source = 0;
  net.sink = net.node_count - 1;
  net.omega = omega;
  net.node_names.resize(net.node_count);
  net.node_names[net.source] = "source";
  net.node_names[net.sink] = "sink";
  for (int a = 0; a < na; ++a) net.node_names[s.left_node(a)] = s.left.label(a) + "^T";
  net.node_names[s.left_node(na)] = "@star^T";
  for (int b = 0; b < nb; ++b) net.node_names[s.right_node(b)] = s.right.label(b) + "^B";
  net.node_names[s.right_node(nb)] = "@star^B";

  for (int a = 0; a < na; ++a)
    net.edges.push_back({net.source, s.left_node(a), inv_k * mu1.mass(a)});
  net.edges.push_back({net.source, s.left_node(na), star_source_cap});

  s.pair_edges.assign(na + 1, std::vector<int>(nb + 1, -1));
  for (int a = 0; a <= na; ++a)
    for (int b = 0; b <= nb; ++b) {
      const bool related = a == na || b == nb || relation.contains(a, b);
      if (!related) continue;
      s.pair_edges[a][b] = static_cast<int>(net.edges.size());
      net.edges.push_back({s.left_node(a), s.right_node(b), std::nullopt});
    }

  for (int b = 0; b < nb; ++b) net.edges.push_back({s.right_node(b), net.sink, mu2.mass(b)});
  net.edges.push_back({s.right_node(nb), net.sink, inv_k * delta});
  return s;
}

SynthesisResult synthesize_star_lifting(const SubDistribution& mu1, const SubDistribution& mu2,
                                        const FiniteRelation& relation, const Rat& k,
                                        const Rat& delta) {
  const auto violation_for = [&](Event atoms) {
    Rat v = mu1.event_prob(atoms) - k * mu2.event_prob(image(relation, atoms)) - delta;
    return ViolatingSubset{std::move(atoms), std::move(v)};
  };

  if (mu1.total_mass() > k * mu2.total_mass() + delta) {
    Event all(mu1.space().size());
    for (int a = 0; a < mu1.space().size(); ++a) all[a] = a;
    return violation_for(std::move(all));
  }

  const StrassenNetwork s = build_strassen_network(mu1, mu2, relation, k, delta);
  const Flow flow = max_flow(s.net);

  if (flow.mass != s.net.omega) {
    const std::vector<bool> source_side = min_cut_source_side(s.net, flow);
    Event x;
    for (int a = 0; a < s.left.size(); ++a)
      if (source_side[s.left_node(a)]) x.push_back(a);
    return violation_for(std::move(x));
  }

  const SampleSpace a_space = mu1.space();
  const SampleSpace b_space = mu2.space();
  const SampleSpace a_star = a_space.star_extended();
  const SampleSpace b_star = b_space.star_extended();

  std::vector<Rat> left(static_cast<size_t>(a_space.size()) * b_star.size(), Rat(0));
  for (int a = 0; a < a_space.size(); ++a)
    for (int b = 0; b < b_star.size(); ++b)
      if (int e = s.pair_edge(a, b); e >= 0)
        left[static_cast<size_t>(a) * b_star.size() + b] = k * flow.edge_flow[e];

  std::vector<Rat> right(static_cast<size_t>(a_star.size()) * b_space.size(), Rat(0));
  for (int a = 0; a < a_star.size(); ++a)
    for (int b = 0; b < b_space.size(); ++b)
      if (int e = s.pair_edge(a, b); e >= 0)
        right[static_cast<size_t>(a) * b_space.size() + b] = flow.edge_flow[e];

  return WitnessPair(JointSubDistribution(a_space, b_star, std::move(left)),
                     JointSubDistribution(a_star, b_space, std::move(right)));
}

std::optional<ViolatingSubset> sato_holds_bruteforce(const SubDistribution& mu1,
                                                     const SubDistribution& mu2,
                                                     const FiniteRelation& relation, const Rat& k,
                                                     const Rat& delta, int support_cap) {
  if (mu1.space() != relation.left_space() || mu2.space() != relation.right_space())
    throw std::invalid_argument("distributions do not match the relation spaces");
  if (k < 1) throw std::invalid_argument("factor k must be at least 1");

  // Subsets outside supp(mu1) add nothing to mu1[X] and only grow R(X), so
  // quantifying over subsets of the support is complete.
  const Event supp = mu1.support();
  const int n = static_cast<int>(supp.size());
  if (n > support_cap) throw oracle_cap_exceeded("support larger than the oracle cap");

  std::optional<Event> best;
  Rat best_value = 0;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Event x;
    for (int i = 0; i < n; ++i)
      if (mask & (1ul << i)) x.push_back(supp[i]);
    const Rat value = mu1.event_prob(x) - k * mu2.event_prob(image(relation, x));
    if (!best || value > best_value ||
        (value == best_value &&
         std::lexicographical_compare(x.begin(), x.end(), best->begin(), best->end()))) {
      best = std::move(x);
      best_value = value;
    }
  }
  if (best_value <= delta) return std::nullopt;
  return ViolatingSubset{*best, best_value - delta};
}

Rat tightest_delta(const SubDistribution& mu1, const SubDistribution& mu2,
                   const FiniteRelation& relation, const Rat& k) {
  if (mu1.space() != relation.left_space() || mu2.space() != relation.right_space())
    throw std::invalid_argument("distributions do not match the relation spaces");
  if (k < 1) throw std::invalid_argument("factor k must be at least 1");

  const int na = mu1.space().size();
  const int nb = mu2.space().size();
  FlowNetwork net;
  net.node_count = na + nb + 2;
  net.source = 0;
  net.sink = net.node_count - 1;
  for (int a = 0; a < na; ++a) net.edges.push_back({net.source, 1 + a, mu1.mass(a)});
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      if (relation.contains(a, b)) net.edges.push_back({1 + a, 1 + na + b, std::nullopt});
  for (int b = 0; b < nb; ++b) net.edges.push_back({1 + na + b, net.sink, k * mu2.mass(b)});

  return mu1.total_mass() - max_flow(net).mass;
}

}  // namespace starlift
