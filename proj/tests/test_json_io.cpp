#include <doctest.h>

#include "starlift/json_io.hpp"
#include "support/generators.hpp"

using namespace starlift;
using testing::Rng;

namespace {

Json roundtrip(const Json& file) {
  return canonical_problem_json(problem_file_from_json(file));
}

}  // namespace

TEST_CASE("rationals serialize canonically") {
  CHECK(rational_to_json(Rat(2, 6)) == Json("1/3"));
  CHECK(rational_from_json(Json("4/8")) == Rat(1, 2));
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_json(Json("x")), std::invalid_argument);
}

TEST_CASE("spaces carry the star atom last") {
  SampleSpace s({"a", "b"});
  CHECK(space_to_json(s) == Json::array({"a", "b"}));
  CHECK(space_to_json(s.star_extended()) == Json::array({"a", "b", "@star"}));
  CHECK(space_from_json(Json::array({"a", "b", "@star"})) == s.star_extended());
  CHECK_THROWS_AS(space_from_json(Json::array({"a", "@star", "b"})), std::invalid_argument);
  CHECK_THROWS_AS(space_from_json(Json::array({"@star", "@star"})), std::invalid_argument);
  CHECK_THROWS_AS(space_from_json(Json::array()), std::invalid_argument);
}

TEST_CASE("distributions omit zero masses and parse back exactly") {
  SampleSpace s({"a", "b", "c"});
  SubDistribution mu = SubDistribution::from_map(s, {{"a", Rat(1, 2)}, {"c", Rat(1, 4)}});
  Json j = dist_to_json(mu);
  CHECK(!j.at("mass").contains("b"));
  CHECK(dist_from_json(j) == mu);
  CHECK_THROWS_AS(dist_from_json(Json{{"space", Json::array({"a"})}, {"mass", Json{{"z", "1/2"}}}}),
                  std::invalid_argument);
}

TEST_CASE("witness pairs round trip through triples") {
  Rng rng(91);
  for (int round = 0; round < 30; ++round) {
    testing::StarInstance inst = testing::random_valid_star_instance(rng, 4, 12);
    Json j = witness_pair_to_json(inst.witnesses);
    WitnessPair back = witness_pair_from_json(inst.judgment.mu1.space(),
                                              inst.judgment.mu2.space(), j);
    CHECK(back.eta_left == inst.witnesses.eta_left);
    CHECK(back.eta_right == inst.witnesses.eta_right);
  }
}

TEST_CASE("builtin mechanisms expand to the explicit canonical form") {
  Mechanism m = mechanism_from_json(Json{{"builtin", "randomized-response"}, {"p", "1/4"}});
  CHECK(m(0).mass("0") == Rat(3, 4));
  Json canonical = mechanism_to_json(m);
  Mechanism back = mechanism_from_json(canonical);
  CHECK(mechanism_to_json(back) == canonical);

  Mechanism g = mechanism_from_json(
      Json{{"builtin", "truncated-geometric"}, {"k_step", "2/1"}, {"n", 4}});
  CHECK(g.input_space.size() == 5);
  CHECK_THROWS_AS(mechanism_from_json(Json{{"builtin", "nope"}}), std::invalid_argument);
}

TEST_CASE("problem files reject unknown versions and kinds") {
  CHECK_THROWS_AS(problem_file_from_json(Json{{"version", "2"},
                                              {"problem", "synthesize"},
                                              {"payload", Json::object()}}),
                  std::invalid_argument);
  ProblemFile f = problem_file_from_json(
      Json{{"version", "1"}, {"problem", "mystery"}, {"payload", Json::object()}});
  CHECK_THROWS_AS(canonical_problem_json(f), std::invalid_argument);
}

TEST_CASE("canonical serialization is a fixed point, byte for byte") {
  Rng rng(92);

  SUBCASE("synthesize and tightest-delta") {
    for (int round = 0; round < 20; ++round) {
      testing::StarInstance inst = testing::random_valid_star_instance(rng, 4, 12);
      SynthesizeProblem p{inst.judgment.mu1, inst.judgment.mu2, inst.judgment.relation,
                          inst.judgment.params.k, inst.judgment.params.delta};
      for (bool with_delta : {true, false}) {
        Json file{{"version", "1"},
                  {"problem", with_delta ? "synthesize" : "tightest-delta"},
                  {"payload", synthesize_to_json(p, with_delta)}};
        Json canonical = roundtrip(file);
        CHECK(canonical.dump(2) == file.dump(2));
        CHECK(roundtrip(canonical).dump(2) == canonical.dump(2));
      }
    }
  }

  SUBCASE("lifting-check with pair and single witnesses") {
    testing::StarInstance inst = testing::random_valid_star_instance(rng, 4, 12);
    LiftingCheckProblem pair{inst.judgment, inst.witnesses, std::nullopt};
    Json file{{"version", "1"}, {"problem", "lifting-check"},
              {"payload", lifting_check_to_json(pair)}};
    CHECK(roundtrip(file).dump(2) == file.dump(2));

    testing::SymOneInstance one = testing::random_valid_sym_one_instance(rng, 4, 12);
    LiftingCheckProblem single{one.judgment, std::nullopt, one.witness};
    Json file2{{"version", "1"}, {"problem", "lifting-check"},
               {"payload", lifting_check_to_json(single)}};
    CHECK(roundtrip(file2).dump(2) == file2.dump(2));
  }

  SUBCASE("divergence, dp-check, compose, subset-coupling") {
    SampleSpace coin({"H", "T"});
    DivergenceProblem div{"dp", SubDistribution(coin, {Rat(3, 5), Rat(2, 5)}),
                          SubDistribution::uniform(coin), Rat(1)};
    Json dfile{{"version", "1"}, {"problem", "divergence"},
               {"payload", divergence_to_json(div)}};
    CHECK(roundtrip(dfile).dump(2) == dfile.dump(2));

    DpCheckProblem dp{randomized_response(Rat(1, 4)), Rat(3), Rat(0), "lifting"};
    Json pfile{{"version", "1"}, {"problem", "dp-check"}, {"payload", dp_check_to_json(dp)}};
    CHECK(roundtrip(pfile).dump(2) == pfile.dump(2));

    ComposeProblem comp{"advanced", {{Rat(2), Rat(1, 8)}, {Rat(2), Rat(1, 8)}}, Rat(1, 100)};
    Json cfile{{"version", "1"}, {"problem", "compose"}, {"payload", compose_to_json(comp)}};
    CHECK(roundtrip(cfile).dump(2) == cfile.dump(2));

    SampleSpace s = SampleSpace::integer_range(1, 4);
    SubsetCouplingProblem sub{SubDistribution::uniform(s),
                              SubDistribution::uniform(s),
                              event_from_labels(s, {"1", "2"}),
                              event_from_labels(s, {"1"}),
                              Rat(2),
                              Rat(0)};
    Json sfile{{"version", "1"}, {"problem", "subset-coupling"},
               {"payload", subset_coupling_to_json(sub)}};
    CHECK(roundtrip(sfile).dump(2) == sfile.dump(2));
  }
}
