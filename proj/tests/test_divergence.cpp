#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"

using namespace starlift;
using testing::Rng;

TEST_CASE("dp divergence worked examples") {
  SampleSpace coin({"H", "T"});
  SubDistribution mu1(coin, {Rat(3, 5), Rat(2, 5)});
  SubDistribution mu2(coin, {Rat(1, 2), Rat(1, 2)});
  CHECK(dp_divergence(Rat(1), mu1, mu1) == Rat(0));
  CHECK(dp_divergence(Rat(7, 2), mu1, mu1) == Rat(0));
  CHECK(dp_divergence(Rat(1), mu1, mu2) == Rat(1, 10));
  CHECK(dp_divergence_witness_event(Rat(1), mu1, mu2) == event_from_labels(coin, {"H"}));

  SampleSpace yn({"y", "n"});
  SubDistribution p(yn, {Rat(3, 4), Rat(1, 4)});
  SubDistribution q(yn, {Rat(1, 4), Rat(3, 4)});
  CHECK(dp_divergence(Rat(3), p, q) == Rat(0));

  CHECK_THROWS_AS(dp_divergence(Rat(1, 2), mu1, mu2), std::invalid_argument);
  CHECK_THROWS_AS(dp_divergence(Rat(1), mu1, p), std::invalid_argument);
}

TEST_CASE("dp divergence equals the exhaustive event supremum") {
  Rng rng(31);
  for (int round = 0; round < 200; ++round) {
    SampleSpace s = testing::random_space(rng, 1, 6, "a");
    SubDistribution mu1 = testing::random_subdist(rng, s, 16, false);
    SubDistribution mu2 = testing::random_subdist(rng, s, 16, false);
    const Rat k = rng.pick(testing::factor_choices());
    CHECK(dp_divergence(k, mu1, mu2) == testing::bruteforce_dp_divergence(k, mu1, mu2));
  }
  // A few larger spaces, up to 2^12 events each.
  for (int round = 0; round < 10; ++round) {
    SampleSpace s = testing::random_space(rng, 10, 12, "a");
    SubDistribution mu1 = testing::random_subdist(rng, s, 16, false);
    SubDistribution mu2 = testing::random_subdist(rng, s, 16, false);
    const Rat k = rng.pick(testing::factor_choices());
    CHECK(dp_divergence(k, mu1, mu2) == testing::bruteforce_dp_divergence(k, mu1, mu2));
  }
}

TEST_CASE("dp divergence is antitone in k and bounded by the left mass") {
  Rng rng(32);
  for (int round = 0; round < 100; ++round) {
    SampleSpace s = testing::random_space(rng, 1, 6, "a");
    SubDistribution mu1 = testing::random_subdist(rng, s, 16, false);
    SubDistribution mu2 = testing::random_subdist(rng, s, 16, false);
    Rat previous = dp_divergence(Rat(1), mu1, mu2);
    CHECK(previous <= mu1.total_mass());
    for (const Rat& k : {Rat(3, 2), Rat(2), Rat(3)}) {
      Rat current = dp_divergence(k, mu1, mu2);
      CHECK(current <= previous);
      previous = current;
    }
  }
}

TEST_CASE("zero divergence both ways at k = 1 characterizes equality") {
  Rng rng(33);
  for (int round = 0; round < 100; ++round) {
    SampleSpace s = testing::random_space(rng, 1, 5, "a");
    SubDistribution mu1 = testing::random_subdist(rng, s, 12, false);
    SubDistribution mu2 = testing::random_subdist(rng, s, 12, false);
    const bool zero_both = dp_divergence(Rat(1), mu1, mu2) == Rat(0) &&
                           dp_divergence(Rat(1), mu2, mu1) == Rat(0);
    CHECK(zero_both == (mu1 == mu2));
  }
}

TEST_CASE("f-divergence worked examples") {
  const FDivergence sd = FDivergence::statistical_distance();
  const FDivergence kl = FDivergence::kullback_leibler();
  const FDivergence hel = FDivergence::hellinger();

  SampleSpace ab({"a", "b"});
  SubDistribution mu = SubDistribution::from_map(ab, {{"a", Rat(2, 3)}, {"b", Rat(1, 3)}});
  CHECK(f_divergence(sd, mu, mu) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f_divergence(kl, mu, mu) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f_divergence(hel, mu, mu) == doctest::Approx(0.0).epsilon(1e-12));

  // Disjoint point masses: one term through L_f, one through f(0).
  SubDistribution da = SubDistribution::unit(ab, "a");
  SubDistribution db = SubDistribution::unit(ab, "b");
  CHECK(f_divergence(sd, da, db) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::isinf(f_divergence(kl, da, db)));

  SubDistribution uniform = SubDistribution::uniform(ab);
  CHECK(f_divergence(kl, da, uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("dp divergence recomputed as an f-divergence agrees exactly") {
  SampleSpace coin({"H", "T"});
  SubDistribution mu1(coin, {Rat(3, 5), Rat(2, 5)});
  SubDistribution mu2(coin, {Rat(1, 2), Rat(1, 2)});
  CHECK(dp_as_f_divergence(Rat(1), mu1, mu2) == dp_divergence(Rat(1), mu1, mu2));
  CHECK(dp_as_f_divergence(Rat(1), mu1, mu1) == Rat(0));

  SampleSpace yn({"y", "n"});
  SubDistribution p(yn, {Rat(3, 4), Rat(1, 4)});
  SubDistribution q(yn, {Rat(1, 4), Rat(3, 4)});
  CHECK(dp_as_f_divergence(Rat(3), p, q) == dp_divergence(Rat(3), p, q));

  Rng rng(34);
  for (int round = 0; round < 200; ++round) {
    SampleSpace s = testing::random_space(rng, 1, 4, "a");
    SubDistribution a = testing::random_subdist(rng, s, 16, false);
    SubDistribution b = testing::random_subdist(rng, s, 16, false);
    const Rat k = rng.pick(testing::factor_choices());
    CHECK(dp_as_f_divergence(k, a, b) == dp_divergence(k, a, b));
  }
}

TEST_CASE("f-divergences shrink under pushforward") {
  Rng rng(35);
  const FDivergence kinds[] = {FDivergence::statistical_distance(),
                               FDivergence::kullback_leibler(), FDivergence::hellinger()};
  for (int round = 0; round < 60; ++round) {
    SampleSpace from = testing::random_space(rng, 1, 6, "a");
    SampleSpace to = testing::random_space(rng, 1, 6, "b");
    SubDistribution mu1 = testing::random_subdist(rng, from, 16, true);
    SubDistribution mu2 = testing::random_subdist(rng, from, 16, true);
    TotalMap f = testing::random_map(rng, from, to);
    for (const FDivergence& d : kinds) {
      const double before = f_divergence(d, mu1, mu2);
      const double after = f_divergence(d, pushforward(f, mu1), pushforward(f, mu2));
      if (std::isinf(before)) continue;
      CHECK(after <= before + 1e-9);
    }
  }
}

TEST_CASE("epsilon/factor conversions round the factor up") {
  CHECK(factor_from_epsilon(0.0) == Rat(1));
  const Rat k = factor_from_epsilon(std::log(3.0));
  CHECK(to_double(k) >= 3.0);
  CHECK(to_double(k) <= 3.0 + 1e-9);
  CHECK(epsilon_of(k) == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK_THROWS_AS(factor_from_epsilon(-0.1), std::invalid_argument);
}

TEST_CASE("custom f-divergences are linted") {
  CHECK_THROWS_AS(FDivergence::custom([](double t) { return t; }, 0.0, 1.0),
                  std::invalid_argument);  // f(1) != 0
  CHECK_THROWS_AS(FDivergence::custom([](double t) { return -(t - 1.0) * (t - 1.0); }, -1.0, 0.0),
                  std::invalid_argument);  // negative
  FDivergence quad = FDivergence::custom([](double t) { return (t - 1.0) * (t - 1.0); }, 1.0, 0.0);
  SampleSpace ab({"a", "b"});
  CHECK(f_divergence(quad, SubDistribution::uniform(ab), SubDistribution::uniform(ab)) ==
        doctest::Approx(0.0));
}
