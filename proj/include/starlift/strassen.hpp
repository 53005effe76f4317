#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "starlift/lifting.hpp"

namespace starlift {

// A finite capacitated directed graph. An absent capacity means the edge is
// unbounded; internally unbounded edges get capacity (sum of all finite
// capacities) + 1, which no flow can exceed, so minimum cuts are unaffected.
struct FlowEdge {
  int from = 0;
  int to = 0;
  std::optional<Rat> capacity;  // nullopt = unbounded
};

struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<FlowEdge> edges;
  std::vector<std::string> node_names;  // diagnostics only; may be empty
  Rat omega{0};                         // synthesis target, where applicable
};

// A feasible flow: capacity-respecting, antisymmetric, conserving at internal
// nodes. Stored per edge; mass is the net outflow of the source.
struct Flow {
  std::vector<Rat> edge_flow;
  Rat mass{0};
};

// Exact maximum flow via shortest augmenting paths, deterministic: BFS visits
// nodes in index order and adjacency lists keep edge insertion order.
Flow max_flow(const FlowNetwork& net);

// Source side of the inclusion-maximal minimum cut: the complement of the set
// of nodes that can still reach the sink in the residual graph.
std::vector<bool> min_cut_source_side(const FlowNetwork& net, const Flow& flow);

// Thrown when even X = A violates the universal lifting condition, i.e.
// |mu1| > k*|mu2| + delta, which would give the star source edge a negative
// capacity.
struct sato_full_space_violation : std::domain_error {
  using std::domain_error::domain_error;
};

struct oracle_cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The synthesis network: source feeds every left atom with k^-1*mu1(a) plus a
// star node with omega - k^-1*|mu1|; right atoms drain mu2(b) into the sink,
// the right star drains k^-1*delta; unbounded edges join a to b whenever aRb
// or either side is the star. omega = |mu2| + k^-1*delta.
struct StrassenNetwork {
  FlowNetwork net;
  SampleSpace left;   // A, base
  SampleSpace right;  // B, base

  int left_node(int a) const;        // a over A*
  int right_node(int b) const;       // b over B*
  int pair_edge(int a, int b) const;  // edge id of a->b, or -1 if absent
  int left_star_index() const { return left.size(); }
  int right_star_index() const { return right.size(); }

  std::vector<std::vector<int>> pair_edges;  // [a over A*][b over B*]
};

StrassenNetwork build_strassen_network(const SubDistribution& mu1, const SubDistribution& mu2,
                                       const FiniteRelation& relation, const Rat& k,
                                       const Rat& delta);

struct ViolatingSubset {
  Event atoms;    // subset X of the left space with mu1[X] > k*mu2[R(X)] + delta
  Rat violation;  // mu1[X] - k*mu2[R(X)] - delta, strictly positive
};

using SynthesisResult = std::variant<WitnessPair, ViolatingSubset>;

// Realizes the lifting as a maximum-flow problem: if the flow fills omega the
// witnesses are read off the saturating flow (eta_left = k * flow restricted
// to A x B*, eta_right = the flow restricted to A* x B); otherwise the
// returned subset is extracted from the minimum cut and refutes the lifting.
SynthesisResult synthesize_star_lifting(const SubDistribution& mu1, const SubDistribution& mu2,
                                        const FiniteRelation& relation, const Rat& k,
                                        const Rat& delta);

// Exhaustively checks mu1[X] <= k*mu2[R(X)] + delta over all subsets X of
// supp(mu1). Returns the maximizing violator, lexicographically least among
// ties, or nullopt when the condition holds everywhere.
std::optional<ViolatingSubset> sato_holds_bruteforce(const SubDistribution& mu1,
                                                     const SubDistribution& mu2,
                                                     const FiniteRelation& relation, const Rat& k,
                                                     const Rat& delta, int support_cap = 20);

// The least delta at which synthesis succeeds for the given factor:
// max over X of mu1[X] - k*mu2[R(X)], clamped at 0. Computed as |mu1| minus
// the maximum flow of the reduced (star-free) network.
Rat tightest_delta(const SubDistribution& mu1, const SubDistribution& mu2,
                   const FiniteRelation& relation, const Rat& k);

}  // namespace starlift
