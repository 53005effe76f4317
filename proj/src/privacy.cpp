#include "starlift/privacy.hpp"

#include <stdexcept>

namespace starlift {

Mechanism::Mechanism(SampleSpace inputs, SampleSpace outputs,
                     std::vector<SubDistribution> kernel_in, FiniteRelation adjacency_in)
    : input_space(std::move(inputs)),
      output_space(std::move(outputs)),
      kernel(std::move(kernel_in)),
      adjacency(std::move(adjacency_in)) {
  if (static_cast<int>(kernel.size()) != input_space.size())
    throw std::invalid_argument("mechanism kernel not total on its inputs");
  for (const SubDistribution& d : kernel)
    if (d.space() != output_space)
      throw std::invalid_argument("mechanism kernel over a mismatched output space");
  if (adjacency.left_space() != input_space || adjacency.right_space() != input_space)
    throw std::invalid_argument("adjacency relation must relate inputs to inputs");
}

FiniteRelation symmetric_closure(const FiniteRelation& r) {
  if (r.left_space() != r.right_space())
    throw std::invalid_argument("symmetric closure needs matching spaces");
  const int n = r.left_space().size();
  std::vector<bool> adj(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      adj[static_cast<size_t>(a) * n + b] = r.contains(a, b) || r.contains(b, a);
  return FiniteRelation(r.left_space(), r.right_space(), std::move(adj));
}

std::optional<DpViolation> check_dp(const Mechanism& m, const Rat& k, const Rat& delta) {
  for (const auto& [a, b] : m.adjacency.pairs()) {
    const Rat d = dp_divergence(k, m(a), m(b));
    if (d > delta)
      return DpViolation{a, b, dp_divergence_witness_event(k, m(a), m(b)), d - delta};
  }
  return std::nullopt;
}

LiftingDpResult dp_via_lifting(const Mechanism& m, const Rat& k, const Rat& delta) {
  const FiniteRelation equality = FiniteRelation::equality(m.output_space);
  LiftingDpResult result;
  for (const auto& [a, b] : m.adjacency.pairs()) {
    SynthesisResult s = synthesize_star_lifting(m(a), m(b), equality, k, delta);
    if (auto* refuted = std::get_if<ViolatingSubset>(&s)) {
      result.witnesses.clear();
      result.violation = DpViolation{a, b, refuted->atoms, refuted->violation};
      return result;
    }
    result.witnesses.emplace_back(a, b, std::move(std::get<WitnessPair>(s)));
  }
  return result;
}

Rat tightest_dp_delta(const Mechanism& m, const Rat& k) {
  if (k < 1) throw std::invalid_argument("factor k must be at least 1");
  Rat worst = 0;
  for (const auto& [a, b] : m.adjacency.pairs()) {
    Rat d = dp_divergence(k, m(a), m(b));
    if (d > worst) worst = d;
  }
  return worst;
}

Mechanism randomized_response(const Rat& p) {
  if (p <= 0 || p > Rat(1, 2))
    throw std::invalid_argument("randomized_response: p must lie in (0, 1/2]");
  SampleSpace bits = SampleSpace::integer_range(0, 1);
  std::vector<SubDistribution> kernel;
  kernel.push_back(SubDistribution(bits, {1 - p, p}));
  kernel.push_back(SubDistribution(bits, {p, 1 - p}));
  FiniteRelation adjacency =
      FiniteRelation::from_pairs(bits, bits, {{"0", "1"}, {"1", "0"}});
  return Mechanism(bits, bits, std::move(kernel), std::move(adjacency));
}

Mechanism truncated_geometric(const Rat& k_step, int n) {
  if (k_step <= 1) throw std::invalid_argument("truncated_geometric: k_step must exceed 1");
  if (n < 1) throw std::invalid_argument("truncated_geometric: need at least two atoms");
  SampleSpace values = SampleSpace::integer_range(0, n);
  const Rat r = Rat(1) / k_step;
  const Rat c = (k_step - 1) / (k_step + 1);  // mass at the true value
  std::vector<SubDistribution> kernel;
  for (int center = 0; center <= n; ++center) {
    std::vector<Rat> mass(n + 1, Rat(0));
    for (int j = 0; j <= n; ++j) {
      const unsigned dist = static_cast<unsigned>(j >= center ? j - center : center - j);
      mass[j] = c * pow_rational(r, dist);
      // Boundary atoms absorb the geometric tail beyond the domain.
      if (j == 0 || j == n) mass[j] /= (1 - r);
    }
    kernel.emplace_back(values, std::move(mass));
  }
  std::vector<std::pair<std::string, std::string>> adjacent;
  for (int v = 0; v < n; ++v) {
    adjacent.emplace_back(std::to_string(v), std::to_string(v + 1));
    adjacent.emplace_back(std::to_string(v + 1), std::to_string(v));
  }
  FiniteRelation adjacency = FiniteRelation::from_pairs(values, values, adjacent);
  return Mechanism(values, values, std::move(kernel), std::move(adjacency));
}

}  // namespace starlift
