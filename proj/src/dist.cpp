#include "starlift/dist.hpp"

#include <stdexcept>

namespace starlift {

namespace {

void check_mass_bounds(const std::vector<Rat>& mass) {
  Rat total = 0;
  for (const Rat& m : mass) {
    if (m < 0 || m > 1) throw std::invalid_argument("mass outside [0,1]");
    total += m;
  }
  if (total > 1) throw std::invalid_argument("total mass exceeds 1");
}

}  // namespace

SubDistribution::SubDistribution(SampleSpace space)
    : space_(std::move(space)), mass_(space_.size(), Rat(0)) {}

SubDistribution::SubDistribution(SampleSpace space, std::vector<Rat> mass)
    : space_(std::move(space)), mass_(std::move(mass)) {
  if (static_cast<int>(mass_.size()) != space_.size())
    throw std::invalid_argument("mass vector does not match space");
  check_mass_bounds(mass_);
}

SubDistribution SubDistribution::unit(const SampleSpace& space, std::string_view atom) {
  return dirac(space, space.index_of(atom));
}

SubDistribution SubDistribution::dirac(const SampleSpace& space, int atom) {
  if (atom < 0 || atom >= space.size()) throw std::invalid_argument("atom not in space");
  std::vector<Rat> mass(space.size(), Rat(0));
  mass[atom] = 1;
  return SubDistribution(space, std::move(mass));
}

SubDistribution SubDistribution::from_map(const SampleSpace& space,
                                          const std::map<std::string, Rat>& mass) {
  std::vector<Rat> m(space.size(), Rat(0));
  for (const auto& [atom, value] : mass) m[space.index_of(atom)] = value;
  return SubDistribution(space, std::move(m));
}

SubDistribution SubDistribution::uniform(const SampleSpace& space) {
  if (space.size() == 0) throw std::invalid_argument("uniform over empty space");
  std::vector<Rat> m(space.size(), Rat(1, space.size()));
  return SubDistribution(space, std::move(m));
}

Rat SubDistribution::total_mass() const {
  Rat total = 0;
  for (const Rat& m : mass_) total += m;
  return total;
}

Event SubDistribution::support() const {
  Event s;
  for (int i = 0; i < static_cast<int>(mass_.size()); ++i)
    if (mass_[i] != 0) s.push_back(i);
  return s;
}

Rat SubDistribution::event_prob(const Event& e) const {
  Rat total = 0;
  for (int a : e) total += mass_.at(a);
  return total;
}

Rat event_prob(const SubDistribution& mu, const Event& e) { return mu.event_prob(e); }

JointSubDistribution::JointSubDistribution(SampleSpace left, SampleSpace right)
    : left_(std::move(left)),
      right_(std::move(right)),
      mass_(static_cast<size_t>(left_.size()) * right_.size(), Rat(0)) {}

JointSubDistribution::JointSubDistribution(SampleSpace left, SampleSpace right,
                                           std::vector<Rat> mass)
    : left_(std::move(left)), right_(std::move(right)), mass_(std::move(mass)) {
  if (mass_.size() != static_cast<size_t>(left_.size()) * right_.size())
    throw std::invalid_argument("mass matrix does not match spaces");
  check_mass_bounds(mass_);
}

JointSubDistribution JointSubDistribution::from_triples(
    const SampleSpace& left, const SampleSpace& right,
    const std::vector<std::tuple<std::string, std::string, Rat>>& mass) {
  std::vector<Rat> m(static_cast<size_t>(left.size()) * right.size(), Rat(0));
  for (const auto& [a, b, value] : mass)
    m[static_cast<size_t>(left.index_of(a)) * right.size() + right.index_of(b)] = value;
  return JointSubDistribution(left, right, std::move(m));
}

Rat JointSubDistribution::total_mass() const {
  Rat total = 0;
  for (const Rat& m : mass_) total += m;
  return total;
}

std::vector<std::pair<int, int>> JointSubDistribution::support() const {
  std::vector<std::pair<int, int>> s;
  for (int a = 0; a < left_.size(); ++a)
    for (int b = 0; b < right_.size(); ++b)
      if (mass(a, b) != 0) s.emplace_back(a, b);
  return s;
}

SubDistribution bind(const SubDistribution& mu, const SampleSpace& target,
                     const std::function<SubDistribution(int)>& kernel) {
  std::vector<Rat> out(target.size(), Rat(0));
  for (int a : mu.support()) {
    SubDistribution next = kernel(a);
    if (next.space() != target)
      throw std::invalid_argument("kernel returned a value over a mismatched space");
    for (int b = 0; b < target.size(); ++b) out[b] += mu.mass(a) * next.mass(b);
  }
  return SubDistribution(target, std::move(out));
}

SubDistribution pushforward(const TotalMap& f, const SubDistribution& mu) {
  if (mu.space() != f.from) throw std::invalid_argument("pushforward: space mismatch");
  std::vector<Rat> out(f.to.size(), Rat(0));
  for (int a = 0; a < f.from.size(); ++a) out[f(a)] += mu.mass(a);
  return SubDistribution(f.to, std::move(out));
}

SubDistribution marginal(Side side, const JointSubDistribution& mu) {
  const SampleSpace& space = side == Side::left ? mu.left_space() : mu.right_space();
  std::vector<Rat> out(space.size(), Rat(0));
  for (int a = 0; a < mu.left_space().size(); ++a)
    for (int b = 0; b < mu.right_space().size(); ++b)
      out[side == Side::left ? a : b] += mu.mass(a, b);
  return SubDistribution(space, std::move(out));
}

SubDistribution restrict_to(const SubDistribution& mu, const Event& s) {
  std::vector<Rat> out(mu.space().size(), Rat(0));
  for (int a : s) out.at(a) = mu.mass(a);
  return SubDistribution(mu.space(), std::move(out));
}

JointSubDistribution star_extend(const JointSubDistribution& mu) {
  const bool left_star = mu.left_space().has_star();
  const bool right_star = mu.right_space().has_star();
  if (left_star && right_star)
    throw std::invalid_argument("star_extend: both sides already extended");
  if (!left_star && !right_star)
    throw std::invalid_argument("star_extend: exactly one side must already be extended");
  SampleSpace left = left_star ? mu.left_space() : mu.left_space().star_extended();
  SampleSpace right = right_star ? mu.right_space() : mu.right_space().star_extended();
  std::vector<Rat> m(static_cast<size_t>(left.size()) * right.size(), Rat(0));
  for (int a = 0; a < mu.left_space().size(); ++a)
    for (int b = 0; b < mu.right_space().size(); ++b)
      m[static_cast<size_t>(a) * right.size() + b] = mu.mass(a, b);
  return JointSubDistribution(std::move(left), std::move(right), std::move(m));
}

JointSubDistribution product(const SubDistribution& mu1, const SubDistribution& mu2) {
  std::vector<Rat> m;
  m.reserve(static_cast<size_t>(mu1.space().size()) * mu2.space().size());
  for (int a = 0; a < mu1.space().size(); ++a)
    for (int b = 0; b < mu2.space().size(); ++b) m.push_back(mu1.mass(a) * mu2.mass(b));
  return JointSubDistribution(mu1.space(), mu2.space(), std::move(m));
}

JointSubDistribution transpose(const JointSubDistribution& mu) {
  std::vector<Rat> m(mu.masses().size());
  for (int a = 0; a < mu.left_space().size(); ++a)
    for (int b = 0; b < mu.right_space().size(); ++b)
      m[static_cast<size_t>(b) * mu.left_space().size() + a] = mu.mass(a, b);
  return JointSubDistribution(mu.right_space(), mu.left_space(), std::move(m));
}

}  // namespace starlift
