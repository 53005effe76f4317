#include "starlift/relation.hpp"

#include <functional>
#include <stdexcept>

namespace starlift {

FiniteRelation::FiniteRelation(SampleSpace left, SampleSpace right)
    : left_(std::move(left)),
      right_(std::move(right)),
      adj_(static_cast<size_t>(left_.size()) * right_.size(), false) {}

FiniteRelation::FiniteRelation(SampleSpace left, SampleSpace right, std::vector<bool> adjacency)
    : left_(std::move(left)), right_(std::move(right)), adj_(std::move(adjacency)) {
  if (adj_.size() != static_cast<size_t>(left_.size()) * right_.size())
    throw std::invalid_argument("adjacency matrix does not match spaces");
}

FiniteRelation FiniteRelation::from_pairs(
    const SampleSpace& left, const SampleSpace& right,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<bool> adj(static_cast<size_t>(left.size()) * right.size(), false);
  for (const auto& [a, b] : pairs)
    adj[static_cast<size_t>(left.index_of(a)) * right.size() + right.index_of(b)] = true;
  return FiniteRelation(left, right, std::move(adj));
}

FiniteRelation FiniteRelation::equality(const SampleSpace& space) {
  std::vector<bool> adj(static_cast<size_t>(space.size()) * space.size(), false);
  for (int i = 0; i < space.size(); ++i)
    adj[static_cast<size_t>(i) * space.size() + i] = true;
  return FiniteRelation(space, space, std::move(adj));
}

FiniteRelation FiniteRelation::full(const SampleSpace& left, const SampleSpace& right) {
  std::vector<bool> adj(static_cast<size_t>(left.size()) * right.size(), true);
  return FiniteRelation(left, right, std::move(adj));
}

std::vector<std::pair<int, int>> FiniteRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < left_.size(); ++a)
    for (int b = 0; b < right_.size(); ++b)
      if (contains(a, b)) out.emplace_back(a, b);
  return out;
}

Event image(const FiniteRelation& r, const Event& x) {
  std::vector<bool> hit(r.right_space().size(), false);
  for (int a : x) {
    if (a < 0 || a >= r.left_space().size())
      throw std::invalid_argument("image: atom not in left space");
    for (int b = 0; b < r.right_space().size(); ++b)
      if (r.contains(a, b)) hit[b] = true;
  }
  Event out;
  for (int b = 0; b < r.right_space().size(); ++b)
    if (hit[b]) out.push_back(b);
  return out;
}

FiniteRelation compose(const FiniteRelation& s, const FiniteRelation& r) {
  if (r.right_space() != s.left_space())
    throw std::invalid_argument("compose: inner spaces do not match");
  std::vector<bool> adj(static_cast<size_t>(r.left_space().size()) * s.right_space().size(),
                        false);
  for (int a = 0; a < r.left_space().size(); ++a)
    for (int b = 0; b < r.right_space().size(); ++b) {
      if (!r.contains(a, b)) continue;
      for (int c = 0; c < s.right_space().size(); ++c)
        if (s.contains(b, c)) adj[static_cast<size_t>(a) * s.right_space().size() + c] = true;
    }
  return FiniteRelation(r.left_space(), s.right_space(), std::move(adj));
}

FiniteRelation inverse(const FiniteRelation& r) {
  std::vector<bool> adj(static_cast<size_t>(r.right_space().size()) * r.left_space().size(),
                        false);
  for (int a = 0; a < r.left_space().size(); ++a)
    for (int b = 0; b < r.right_space().size(); ++b)
      if (r.contains(a, b)) adj[static_cast<size_t>(b) * r.left_space().size() + a] = true;
  return FiniteRelation(r.right_space(), r.left_space(), std::move(adj));
}

FiniteRelation pullback(const TotalMap& f1, const TotalMap& f2, const FiniteRelation& r) {
  if (f1.to != r.left_space() || f2.to != r.right_space())
    throw std::invalid_argument("pullback: map codomains do not match the relation");
  std::vector<bool> adj(static_cast<size_t>(f1.from.size()) * f2.from.size(), false);
  for (int a1 = 0; a1 < f1.from.size(); ++a1)
    for (int a2 = 0; a2 < f2.from.size(); ++a2)
      if (r.contains(f1(a1), f2(a2)))
        adj[static_cast<size_t>(a1) * f2.from.size() + a2] = true;
  return FiniteRelation(f1.from, f2.from, std::move(adj));
}

namespace {

FiniteRelation build_pointwise(const FiniteRelation& r,
                               const std::function<bool(int, int, bool)>& keep) {
  std::vector<bool> adj(static_cast<size_t>(r.left_space().size()) * r.right_space().size());
  for (int a = 0; a < r.left_space().size(); ++a)
    for (int b = 0; b < r.right_space().size(); ++b)
      adj[static_cast<size_t>(a) * r.right_space().size() + b] = keep(a, b, r.contains(a, b));
  return FiniteRelation(r.left_space(), r.right_space(), std::move(adj));
}

}  // namespace

FiniteRelation implies_left(const Event& theta, const FiniteRelation& r) {
  return build_pointwise(
      r, [&](int a, int, bool in_r) { return !event_contains(theta, a) || in_r; });
}

FiniteRelation implies_right(const Event& theta, const FiniteRelation& r) {
  return build_pointwise(
      r, [&](int, int b, bool in_r) { return !event_contains(theta, b) || in_r; });
}

FiniteRelation conjoin_left(const Event& theta, const FiniteRelation& r) {
  return build_pointwise(
      r, [&](int a, int, bool in_r) { return event_contains(theta, a) && in_r; });
}

FiniteRelation conjoin_right(const Event& theta, const FiniteRelation& r) {
  return build_pointwise(
      r, [&](int, int b, bool in_r) { return event_contains(theta, b) && in_r; });
}

FiniteRelation subset_equivalence(const SampleSpace& left, const SampleSpace& right,
                                  const Event& p1, const Event& p2) {
  std::vector<bool> adj(static_cast<size_t>(left.size()) * right.size());
  for (int a = 0; a < left.size(); ++a)
    for (int b = 0; b < right.size(); ++b)
      adj[static_cast<size_t>(a) * right.size() + b] =
          event_contains(p1, a) == event_contains(p2, b);
  return FiniteRelation(left, right, std::move(adj));
}

}  // namespace starlift
