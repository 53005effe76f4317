#pragma once

#include <functional>
#include <span>
#include <string>

#include "starlift/dist.hpp"
#include "starlift/rational.hpp"

namespace starlift {

// The pair (k, delta) of an approximate lifting or privacy claim, with the
// multiplicative factor k = e^eps kept exact. eps is recovered as ln k for
// reporting only.
struct PrivacyParams {
  Rat k{1};
  Rat delta{0};
};

double epsilon_of(const Rat& k);

// e^eps rounded up to 12 significant digits. Rounding up is the sound
// direction: every downstream "<= k * ..." check only gets weaker.
Rat factor_from_epsilon(double eps);

// DP divergence at factor k: sup over events E of mu1[E] - k*mu2[E], computed
// exactly as the sum of the pointwise positive parts. The supremum is attained
// at the event { a | mu1(a) > k*mu2(a) }.
Rat dp_divergence(const Rat& k, const SubDistribution& mu1, const SubDistribution& mu2);
Rat dp_divergence(const Rat& k, const JointSubDistribution& mu1,
                  const JointSubDistribution& mu2);
Rat dp_divergence_masses(const Rat& k, std::span<const Rat> x, std::span<const Rat> y);

// The maximizing event of the divergence above.
Event dp_divergence_witness_event(const Rat& k, const SubDistribution& mu1,
                                  const SubDistribution& mu2);

// A convex function f >= 0 with f(1) = 0, together with its boundary data:
// f(0) and the limit L_f of t*f(1/t) as t -> 0+ (possibly infinite).
struct FDivergence {
  enum class Kind { statistical_distance, kullback_leibler, hellinger, custom };

  Kind kind = Kind::custom;
  std::function<double(double)> f;  // evaluated at t > 0
  double f_at_zero = 0.0;
  double l_limit = 0.0;

  static FDivergence statistical_distance();
  static FDivergence kullback_leibler();
  static FDivergence hellinger();
  // Checks f(1) ~= 0 and spot-checks midpoint convexity on a fixed grid over
  // (0, 8]; a lint, not a proof.
  static FDivergence custom(std::function<double(double)> f, double f_at_zero, double l_limit);

  std::string name() const;
};

// Sum over atoms of mu2(a) * f(mu1(a)/mu2(a)), with the boundary conventions
// 0*f(0/0) = 0 and 0*f(x/0) = x*L_f. May return +infinity.
double f_divergence(const FDivergence& f, const SubDistribution& mu1,
                    const SubDistribution& mu2);
double f_divergence(const FDivergence& f, const JointSubDistribution& mu1,
                    const JointSubDistribution& mu2);
double f_divergence_masses(const FDivergence& f, std::span<const Rat> x, std::span<const Rat> y);

// The DP divergence recomputed through the f-divergence form with
// f(t) = max(t - k, 0), f(0) = 0, L_f = 1, kept in exact rationals. Equals
// dp_divergence on every input; serves as an independent cross-check.
Rat dp_as_f_divergence(const Rat& k, const SubDistribution& mu1, const SubDistribution& mu2);

}  // namespace starlift
