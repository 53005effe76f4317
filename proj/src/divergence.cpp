#include "starlift/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_factor(const Rat& k) {
  if (k < 1) throw std::invalid_argument("factor k must be at least 1");
}

}  // namespace

double epsilon_of(const Rat& k) {
  check_factor(k);
  return std::log(to_double(k));
}

Rat factor_from_epsilon(double eps) {
  if (eps < 0) throw std::invalid_argument("epsilon must be non-negative");
  if (eps == 0) return Rat(1);
  return rational_upper_bound(std::exp(eps), 12);
}

Rat dp_divergence_masses(const Rat& k, std::span<const Rat> x, std::span<const Rat> y) {
  check_factor(k);
  if (x.size() != y.size()) throw std::invalid_argument("dp_divergence: space mismatch");
  Rat total = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    Rat d = x[i] - k * y[i];
    if (d > 0) total += d;
  }
  return total;
}

Rat dp_divergence(const Rat& k, const SubDistribution& mu1, const SubDistribution& mu2) {
  if (mu1.space() != mu2.space()) throw std::invalid_argument("dp_divergence: space mismatch");
  return dp_divergence_masses(k, mu1.masses(), mu2.masses());
}

Rat dp_divergence(const Rat& k, const JointSubDistribution& mu1,
                  const JointSubDistribution& mu2) {
  if (mu1.left_space() != mu2.left_space() || mu1.right_space() != mu2.right_space())
    throw std::invalid_argument("dp_divergence: space mismatch");
  return dp_divergence_masses(k, mu1.masses(), mu2.masses());
}

Event dp_divergence_witness_event(const Rat& k, const SubDistribution& mu1,
                                  const SubDistribution& mu2) {
  if (mu1.space() != mu2.space()) throw std::invalid_argument("dp_divergence: space mismatch");
  check_factor(k);
  Event e;
  for (int a = 0; a < mu1.space().size(); ++a)
    if (mu1.mass(a) > k * mu2.mass(a)) e.push_back(a);
  return e;
}

FDivergence FDivergence::statistical_distance() {
  FDivergence d;
  d.kind = Kind::statistical_distance;
  d.f = [](double t) { return 0.5 * std::abs(t - 1.0); };
  d.f_at_zero = 0.5;
  d.l_limit = 0.5;
  return d;
}

FDivergence FDivergence::kullback_leibler() {
  FDivergence d;
  d.kind = Kind::kullback_leibler;
  // The -t + 1 term extends the classical form to sub-distributions.
  d.f = [](double t) { return t * std::log(t) - t + 1.0; };
  d.f_at_zero = 1.0;
  d.l_limit = kInf;
  return d;
}

FDivergence FDivergence::hellinger() {
  FDivergence d;
  d.kind = Kind::hellinger;
  d.f = [](double t) {
    double s = std::sqrt(t) - 1.0;
    return 0.5 * s * s;
  };
  d.f_at_zero = 0.5;
  d.l_limit = 0.5;
  return d;
}

FDivergence FDivergence::custom(std::function<double(double)> f, double f_at_zero,
                                double l_limit) {
  constexpr double tol = 1e-9;
  if (std::abs(f(1.0)) > tol)
    throw std::invalid_argument("f-divergence generator must vanish at 1");
  // Midpoint convexity and non-negativity sampled on a 64-point grid.
  double prev = f_at_zero;
  for (int i = 1; i <= 64; ++i) {
    double t = 8.0 * i / 64.0;
    double ft = f(t);
    if (ft < -tol) throw std::invalid_argument("f-divergence generator must be non-negative");
    double mid = f((t + (t - 8.0 / 64.0)) / 2.0);
    if (mid > (ft + prev) / 2.0 + tol)
      throw std::invalid_argument("f-divergence generator fails midpoint convexity");
    prev = ft;
  }
  FDivergence d;
  d.kind = Kind::custom;
  d.f = std::move(f);
  d.f_at_zero = f_at_zero;
  d.l_limit = l_limit;
  return d;
}

std::string FDivergence::name() const {
  switch (kind) {
    case Kind::statistical_distance:
      return "sd";
    case Kind::kullback_leibler:
      return "kl";
    case Kind::hellinger:
      return "hellinger";
    case Kind::custom:
      return "custom";
  }
  return "custom";
}

double f_divergence_masses(const FDivergence& f, std::span<const Rat> x, std::span<const Rat> y) {
  if (x.size() != y.size()) throw std::invalid_argument("f_divergence: space mismatch");
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0) {
      if (x[i] == 0) continue;           // 0 * f(0/0) = 0
      if (f.l_limit == kInf) return kInf;  // x * L_f with L_f infinite
      total += to_double(x[i]) * f.l_limit;
    } else if (x[i] == 0) {
      total += to_double(y[i]) * f.f_at_zero;
    } else {
      double ratio = to_double(Rat(x[i] / y[i]));
      total += to_double(y[i]) * f.f(ratio);
    }
  }
  return total;
}

double f_divergence(const FDivergence& f, const SubDistribution& mu1,
                    const SubDistribution& mu2) {
  if (mu1.space() != mu2.space()) throw std::invalid_argument("f_divergence: space mismatch");
  return f_divergence_masses(f, mu1.masses(), mu2.masses());
}

double f_divergence(const FDivergence& f, const JointSubDistribution& mu1,
                    const JointSubDistribution& mu2) {
  if (mu1.left_space() != mu2.left_space() || mu1.right_space() != mu2.right_space())
    throw std::invalid_argument("f_divergence: space mismatch");
  return f_divergence_masses(f, mu1.masses(), mu2.masses());
}

Rat dp_as_f_divergence(const Rat& k, const SubDistribution& mu1, const SubDistribution& mu2) {
  if (mu1.space() != mu2.space())
    throw std::invalid_argument("dp_as_f_divergence: space mismatch");
  check_factor(k);
  Rat total = 0;
  for (int a = 0; a < mu1.space().size(); ++a) {
    const Rat& x = mu1.mass(a);
    const Rat& y = mu2.mass(a);
    if (y == 0) {
      total += x;  // x * L_f with L_f = 1
    } else {
      Rat t = x / y - k;
      if (t > 0) total += y * t;
    }
  }
  return total;
}

}  // namespace starlift
