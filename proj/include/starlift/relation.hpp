#pragma once

#include <string>
#include <vector>

#include "starlift/space.hpp"

namespace starlift {

// A finite binary relation, stored extensionally as a dense boolean matrix so
// that exhaustive algorithms (subset checks, flow construction) can enumerate
// pairs deterministically.
class FiniteRelation {
 public:
  FiniteRelation() : FiniteRelation(SampleSpace{}, SampleSpace{}) {}
  FiniteRelation(SampleSpace left, SampleSpace right);  // empty relation
  FiniteRelation(SampleSpace left, SampleSpace right, std::vector<bool> adjacency);

  static FiniteRelation from_pairs(const SampleSpace& left, const SampleSpace& right,
                                   const std::vector<std::pair<std::string, std::string>>& pairs);
  static FiniteRelation equality(const SampleSpace& space);
  static FiniteRelation full(const SampleSpace& left, const SampleSpace& right);

  const SampleSpace& left_space() const { return left_; }
  const SampleSpace& right_space() const { return right_; }
  bool contains(int a, int b) const { return adj_.at(index(a, b)); }

  std::vector<std::pair<int, int>> pairs() const;

  friend bool operator==(const FiniteRelation& r, const FiniteRelation& s) {
    return r.left_ == s.left_ && r.right_ == s.right_ && r.adj_ == s.adj_;
  }

 private:
  size_t index(int a, int b) const { return static_cast<size_t>(a) * right_.size() + b; }
  SampleSpace left_, right_;
  std::vector<bool> adj_;
};

// { b | exists a in X with (a,b) in R }.
Event image(const FiniteRelation& r, const Event& x);

// Pairs (a,c) with a R b and b S c for some b. Requires r.right == s.left.
FiniteRelation compose(const FiniteRelation& s, const FiniteRelation& r);

FiniteRelation inverse(const FiniteRelation& r);

// { (a1,a2) | (f1(a1), f2(a2)) in R }.
FiniteRelation pullback(const TotalMap& f1, const TotalMap& f2, const FiniteRelation& r);

// Conditional and conjoined relations used by up-to-bad reasoning:
// implies_left(theta, R)  = { (a,b) | a in theta  implies (a,b) in R },
// conjoin_left(theta, R)  = { (a,b) in R | a in theta }; mirrored on the right.
FiniteRelation implies_left(const Event& theta, const FiniteRelation& r);
FiniteRelation implies_right(const Event& theta, const FiniteRelation& r);
FiniteRelation conjoin_left(const Event& theta, const FiniteRelation& r);
FiniteRelation conjoin_right(const Event& theta, const FiniteRelation& r);

// { (a1,a2) | a1 in p1  iff  a2 in p2 } — the subset-coupling relation.
FiniteRelation subset_equivalence(const SampleSpace& left, const SampleSpace& right,
                                  const Event& p1, const Event& p2);

}  // namespace starlift
