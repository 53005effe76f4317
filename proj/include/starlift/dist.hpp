#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "starlift/rational.hpp"
#include "starlift/space.hpp"

namespace starlift {

// A finite-support mass function with exact rational masses summing to at
// most 1. The null sub-distribution and zero-mass joints are legal values.
// All values here are immutable after construction and every operation is a
// pure function of its inputs.
class SubDistribution {
 public:
  explicit SubDistribution(SampleSpace space);  // the null sub-distribution
  SubDistribution(SampleSpace space, std::vector<Rat> mass);

  static SubDistribution unit(const SampleSpace& space, std::string_view atom);
  static SubDistribution dirac(const SampleSpace& space, int atom);
  static SubDistribution from_map(const SampleSpace& space,
                                  const std::map<std::string, Rat>& mass);
  static SubDistribution uniform(const SampleSpace& space);

  const SampleSpace& space() const { return space_; }
  const Rat& mass(int atom) const { return mass_.at(atom); }
  const Rat& mass(std::string_view atom) const { return mass_.at(space_.index_of(atom)); }
  const std::vector<Rat>& masses() const { return mass_; }

  Rat total_mass() const;
  bool is_proper() const { return total_mass() == 1; }
  Event support() const;

  Rat event_prob(const Event& e) const;

  friend bool operator==(const SubDistribution& a, const SubDistribution& b) {
    return a.space_ == b.space_ && a.mass_ == b.mass_;
  }

 private:
  SampleSpace space_;
  std::vector<Rat> mass_;
};

class JointSubDistribution {
 public:
  JointSubDistribution(SampleSpace left, SampleSpace right);  // zero mass
  JointSubDistribution(SampleSpace left, SampleSpace right, std::vector<Rat> mass);

  static JointSubDistribution from_triples(
      const SampleSpace& left, const SampleSpace& right,
      const std::vector<std::tuple<std::string, std::string, Rat>>& mass);

  const SampleSpace& left_space() const { return left_; }
  const SampleSpace& right_space() const { return right_; }
  const Rat& mass(int a, int b) const { return mass_.at(index(a, b)); }
  const std::vector<Rat>& masses() const { return mass_; }

  Rat total_mass() const;
  std::vector<std::pair<int, int>> support() const;

  friend bool operator==(const JointSubDistribution& x, const JointSubDistribution& y) {
    return x.left_ == y.left_ && x.right_ == y.right_ && x.mass_ == y.mass_;
  }

 private:
  size_t index(int a, int b) const { return static_cast<size_t>(a) * right_.size() + b; }
  SampleSpace left_, right_;
  std::vector<Rat> mass_;
};

enum class Side { left, right };

// Probability of an event: sum of masses over it.
Rat event_prob(const SubDistribution& mu, const Event& e);

// Monadic bind; the kernel is consulted on the support only and must return
// values over `target`.
SubDistribution bind(const SubDistribution& mu, const SampleSpace& target,
                     const std::function<SubDistribution(int)>& kernel);

// Deterministic pushforward along a total map; preserves total mass.
SubDistribution pushforward(const TotalMap& f, const SubDistribution& mu);

// Row or column sums of a joint.
SubDistribution marginal(Side side, const JointSubDistribution& mu);

// Mass kept on S, zeroed elsewhere.
SubDistribution restrict_to(const SubDistribution& mu, const Event& s);

// Pads the one non-extended side of a joint with a zero star row/column, so
// that both coordinates range over star-extended spaces.
JointSubDistribution star_extend(const JointSubDistribution& mu);

// Independent product.
JointSubDistribution product(const SubDistribution& mu1, const SubDistribution& mu2);

JointSubDistribution transpose(const JointSubDistribution& mu);

}  // namespace starlift
