// Command-line front end: reads a JSON problem description, runs the
// requested engine, and emits a JSON report with a machine-readable verdict
// and certificate. Exit codes: 0 = the property holds, 1 = it fails (the
// report carries a counterexample), 2 = input or usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "starlift/json_io.hpp"

namespace {

using starlift::Json;
using starlift::Rat;

struct Options {
  std::string input = "-";
  bool oracle = true;
  long seed = 0;  // reserved for randomized generators
  double tolerance = 1e-9;
  std::string via;
  std::string kind;
  std::string rule;
  std::string omega;
};

Json read_input(const std::string& path) {
  if (path == "-") return Json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return Json::parse(in);
}

Json params_json(const starlift::PrivacyParams& p) {
  return Json{{"delta", starlift::rational_to_json(p.delta)},
              {"epsilon", starlift::epsilon_of(p.k)},
              {"k", starlift::rational_to_json(p.k)}};
}

Json float_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

Json report_envelope(const std::string& problem) {
  return Json{{"problem", problem}, {"version", "1"}};
}

struct OracleDisagreement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int run_check(const starlift::ProblemFile& file, const Options& opt) {
  auto p = starlift::parse_lifting_check(file.payload);
  starlift::ValidationReport r =
      p.single ? validate_witnesses(p.judgment, *p.single, opt.tolerance)
               : validate_witnesses(p.judgment, *p.pair, opt.tolerance);

  Json report = report_envelope(file.problem);
  report["kind"] = p.judgment.kind.name();
  if (p.judgment.kind.tag == starlift::LiftingKindTag::fdiv_star)
    report["parameters"] = Json{{"fdiv", p.judgment.kind.divergence->name()},
                                {"fdiv_delta", p.judgment.fdiv_delta}};
  else
    report["parameters"] = params_json(p.judgment.params);
  report["verdict"] = r.holds ? "holds" : "fails";

  Json detail{{"failed_condition", starlift::ValidationReport::condition_name(r.failed)}};
  if (r.distance) detail["distance"] = starlift::rational_to_json(*r.distance);
  if (r.slack) detail["slack"] = starlift::rational_to_json(*r.slack);
  if (r.distance_f) detail["distance"] = float_or_inf(*r.distance_f);
  if (r.slack_f) detail["slack"] = float_or_inf(*r.slack_f);
  if (!r.atoms.empty() || !r.pairs.empty()) {
    Json cex = Json::object();
    if (!r.atoms.empty()) cex["atoms"] = r.atoms;
    if (!r.pairs.empty()) {
      Json pairs = Json::array();
      for (const auto& [a, b] : r.pairs) pairs.push_back(Json::array({a, b}));
      cex["pairs"] = pairs;
    }
    detail["counterexample"] = cex;
  }
  report["report"] = detail;

  // With witnesses in hand, validity implies the witness-free condition for
  // the asymmetric exact kinds; cross-check it when requested.
  const auto tag = p.judgment.kind.tag;
  const bool oracle_applies =
      r.holds && (tag == starlift::LiftingKindTag::star || tag == starlift::LiftingKindTag::two ||
                  tag == starlift::LiftingKindTag::one);
  if (opt.oracle && oracle_applies) {
    auto violated =
        starlift::sato_holds_bruteforce(p.judgment.mu1, p.judgment.mu2, p.judgment.relation,
                                        p.judgment.params.k, p.judgment.params.delta);
    report["oracle"] = Json{{"agrees", !violated.has_value()}, {"ran", true}};
    if (violated) throw OracleDisagreement("valid witnesses but the subset oracle refutes");
  } else {
    report["oracle"] = Json{{"ran", false}};
  }

  std::cout << report.dump(2) << "\n";
  return r.holds ? 0 : 1;
}

int run_synthesize(const starlift::ProblemFile& file, const Options& opt) {
  auto p = starlift::parse_synthesize(file.payload, true);
  starlift::SynthesisResult s =
      starlift::synthesize_star_lifting(p.mu1, p.mu2, p.relation, p.k, p.delta);

  Json report = report_envelope(file.problem);
  report["parameters"] = params_json({p.k, p.delta});
  const auto* witnesses = std::get_if<starlift::WitnessPair>(&s);
  if (witnesses) {
    report["verdict"] = "liftable";
    report["certificate"] = Json{{"witnesses", starlift::witness_pair_to_json(*witnesses)}};
  } else {
    const auto& refuted = std::get<starlift::ViolatingSubset>(s);
    report["verdict"] = "not-liftable";
    report["certificate"] =
        Json{{"violating_subset", starlift::event_to_json(p.mu1.space(), refuted.atoms)},
             {"violation", starlift::rational_to_json(refuted.violation)}};
  }

  if (opt.oracle) {
    auto violated = starlift::sato_holds_bruteforce(p.mu1, p.mu2, p.relation, p.k, p.delta);
    const bool agrees = violated.has_value() != (witnesses != nullptr);
    report["oracle"] = Json{{"agrees", agrees}, {"ran", true}};
    if (!agrees) throw OracleDisagreement("synthesis and the subset oracle disagree");
  } else {
    report["oracle"] = Json{{"ran", false}};
  }

  std::cout << report.dump(2) << "\n";
  return witnesses ? 0 : 1;
}

int run_tightest_delta(const starlift::ProblemFile& file, const Options& opt) {
  auto p = starlift::parse_synthesize(file.payload, false);
  const Rat value = starlift::tightest_delta(p.mu1, p.mu2, p.relation, p.k);

  Json report = report_envelope(file.problem);
  report["parameters"] =
      Json{{"epsilon", starlift::epsilon_of(p.k)}, {"k", starlift::rational_to_json(p.k)}};
  report["tightest_delta"] = starlift::rational_to_json(value);

  if (opt.oracle) {
    auto violated = starlift::sato_holds_bruteforce(p.mu1, p.mu2, p.relation, p.k, Rat(0));
    const Rat oracle_value = violated ? violated->violation : Rat(0);
    report["oracle"] = Json{{"agrees", oracle_value == value}, {"ran", true}};
    if (oracle_value != value)
      throw OracleDisagreement("flow-based tightest delta disagrees with the subset oracle");
  } else {
    report["oracle"] = Json{{"ran", false}};
  }

  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_divergence(const starlift::ProblemFile& file, const Options& opt) {
  Json payload = file.payload;
  if (!opt.kind.empty()) payload["kind"] = opt.kind;
  auto p = starlift::parse_divergence(payload);

  Json report = report_envelope(file.problem);
  report["kind"] = p.kind;
  if (p.kind == "dp") {
    const Rat value = starlift::dp_divergence(p.k, p.mu1, p.mu2);
    if (value != starlift::dp_as_f_divergence(p.k, p.mu1, p.mu2))
      throw OracleDisagreement("dp divergence and its f-divergence form disagree");
    report["parameters"] =
        Json{{"epsilon", starlift::epsilon_of(p.k)}, {"k", starlift::rational_to_json(p.k)}};
    report["value"] = starlift::rational_to_json(value);
    Json event = Json::array();
    for (int a : starlift::dp_divergence_witness_event(p.k, p.mu1, p.mu2))
      event.push_back(p.mu1.space().label(a));
    report["maximizing_event"] = event;
  } else {
    report["value"] =
        float_or_inf(starlift::f_divergence(starlift::fdivergence_from_name(p.kind), p.mu1, p.mu2));
  }

  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_dp_check(const starlift::ProblemFile& file, const Options& opt) {
  Json payload = file.payload;
  if (!opt.via.empty()) payload["via"] = opt.via;
  auto p = starlift::parse_dp_check(payload);

  Json report = report_envelope(file.problem);
  report["parameters"] = params_json({p.k, p.delta});
  report["via"] = p.via;

  std::optional<starlift::DpViolation> violation;
  if (p.via == "lifting") {
    starlift::LiftingDpResult r = starlift::dp_via_lifting(p.mechanism, p.k, p.delta);
    violation = r.violation;
    if (!violation) {
      Json per_pair = Json::array();
      for (const auto& [a, b, w] : r.witnesses)
        per_pair.push_back(Json{{"inputs", Json::array({p.mechanism.input_space.label(a),
                                                        p.mechanism.input_space.label(b)})},
                                {"witnesses", starlift::witness_pair_to_json(w)}});
      report["certificate"] = Json{{"liftings", per_pair}};
    }
  } else {
    violation = starlift::check_dp(p.mechanism, p.k, p.delta);
  }

  if (violation) {
    report["verdict"] = "violated";
    report["certificate"] =
        Json{{"event", starlift::event_to_json(p.mechanism.output_space, violation->event)},
             {"excess", starlift::rational_to_json(violation->excess)},
             {"inputs", Json::array({p.mechanism.input_space.label(violation->input_a),
                                     p.mechanism.input_space.label(violation->input_b)})}};
  } else {
    report["verdict"] = "private";
  }

  if (opt.oracle) {
    std::optional<starlift::DpViolation> other =
        p.via == "lifting" ? starlift::check_dp(p.mechanism, p.k, p.delta)
                           : starlift::dp_via_lifting(p.mechanism, p.k, p.delta).violation;
    const bool agrees = other.has_value() == violation.has_value();
    report["oracle"] = Json{{"agrees", agrees}, {"ran", true}};
    if (!agrees) throw OracleDisagreement("divergence and lifting checkers disagree");
  } else {
    report["oracle"] = Json{{"ran", false}};
  }

  std::cout << report.dump(2) << "\n";
  return violation ? 1 : 0;
}

int run_compose(const starlift::ProblemFile& file, const Options& opt) {
  Json payload = file.payload;
  if (!opt.rule.empty()) payload["rule"] = opt.rule;
  if (!opt.omega.empty()) payload["omega"] = opt.omega;
  auto p = starlift::parse_compose(payload);

  starlift::CompositionRule rule =
      p.rule == "advanced" ? starlift::advanced_rule(*p.omega) : starlift::basic_rule();
  const starlift::PrivacyParams out = rule.apply(p.steps);

  Json report = report_envelope(file.problem);
  report["rule"] = p.rule;
  if (p.omega) report["omega"] = starlift::rational_to_json(*p.omega);
  report["steps"] = static_cast<int>(p.steps.size());
  report["result"] = Json{{"delta", starlift::rational_to_json(out.delta)},
                          {"delta_float", starlift::to_double(out.delta)},
                          {"epsilon", starlift::epsilon_of(out.k)},
                          {"k", starlift::rational_to_json(out.k)}};
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_subset_coupling(const starlift::ProblemFile& file, const Options& opt) {
  auto p = starlift::parse_subset_coupling(file.payload);
  starlift::SubsetCouplingResult r =
      starlift::subset_coupling(p.mu1, p.mu2, p.p1, p.p2, p.k, p.delta);

  Json report = report_envelope(file.problem);
  report["parameters"] = params_json({p.k, p.delta});
  report["relation"] = Json{{"pairs", starlift::relation_pairs_to_json(r.relation)}};

  using Status = starlift::SubsetCouplingResult::Status;
  if (r.status == Status::holds) {
    report["verdict"] = "holds";
    report["certificate"] = Json{{"witnesses", starlift::witness_pair_to_json(*r.witnesses)}};
  } else {
    report["verdict"] = "fails";
    const char* which = r.status == Status::fails_first    ? "first"
                        : r.status == Status::fails_second ? "second"
                                                           : "total-mass";
    report["certificate"] = Json{{"failed_inequality", which}};
  }

  if (opt.oracle) {
    auto violated = starlift::sato_holds_bruteforce(p.mu1, p.mu2, r.relation, p.k, p.delta);
    const bool agrees = violated.has_value() == (r.status != Status::holds);
    report["oracle"] = Json{{"agrees", agrees}, {"ran", true}};
    if (!agrees) throw OracleDisagreement("subset coupling and the subset oracle disagree");
  } else {
    report["oracle"] = Json{{"ran", false}};
  }

  std::cout << report.dump(2) << "\n";
  return r.status == Status::holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate lifting toolkit"};
  app.require_subcommand(1);

  Options opt;
  std::string oracle_mode = "on";
  const auto add_common = [&](CLI::App* cmd, bool with_oracle) {
    cmd->add_option("input", opt.input, "problem file (JSON), or - for stdin");
    if (with_oracle)
      cmd->add_option("--oracle", oracle_mode, "cross-run the brute-force subset oracle")
          ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--seed", opt.seed, "seed for randomized generators");
    cmd->add_option("--tolerance", opt.tolerance, "absolute tolerance for float comparisons");
    return cmd;
  };

  auto* check = add_common(app.add_subcommand("check", "validate given witnesses"), true);
  auto* synthesize =
      add_common(app.add_subcommand("synthesize", "synthesize star-lifting witnesses"), true);
  auto* tightest =
      add_common(app.add_subcommand("tightest-delta", "least delta admitting a lifting"), true);
  auto* divergence = add_common(app.add_subcommand("divergence", "divergence between two "
                                                                 "distributions"),
                                false);
  divergence->add_option("--kind", opt.kind, "dp|sd|kl|hellinger (overrides the file)")
      ->check(CLI::IsMember({"dp", "sd", "kl", "hellinger"}));
  auto* dp_check = add_common(app.add_subcommand("dp-check", "differential-privacy check"), true);
  dp_check->add_option("--via", opt.via, "divergence|lifting (overrides the file)")
      ->check(CLI::IsMember({"divergence", "lifting"}));
  auto* compose = add_common(app.add_subcommand("compose", "combine composition parameters"),
                             false);
  compose->add_option("--rule", opt.rule, "basic|advanced (overrides the file)")
      ->check(CLI::IsMember({"basic", "advanced"}));
  compose->add_option("--omega", opt.omega, "advanced-composition omega (overrides the file)");
  auto* subset =
      add_common(app.add_subcommand("subset-coupling", "optimal subset coupling check"), true);

  CLI11_PARSE(app, argc, argv);
  opt.oracle = oracle_mode == "on";

  try {
    const Json input = read_input(opt.input);
    const starlift::ProblemFile file = starlift::problem_file_from_json(input);
    const auto expect = [&](const char* kind) {
      if (file.problem != kind)
        throw std::invalid_argument("problem kind '" + file.problem +
                                    "' does not match the command");
    };
    if (check->parsed()) {
      expect("lifting-check");
      return run_check(file, opt);
    }
    if (synthesize->parsed()) {
      expect("synthesize");
      return run_synthesize(file, opt);
    }
    if (tightest->parsed()) {
      expect("tightest-delta");
      return run_tightest_delta(file, opt);
    }
    if (divergence->parsed()) {
      expect("divergence");
      return run_divergence(file, opt);
    }
    if (dp_check->parsed()) {
      expect("dp-check");
      return run_dp_check(file, opt);
    }
    if (compose->parsed()) {
      expect("compose");
      return run_compose(file, opt);
    }
    if (subset->parsed()) {
      expect("subset-coupling");
      return run_subset_coupling(file, opt);
    }
    throw std::invalid_argument("no command given");
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const starlift::oracle_cap_exceeded& e) {
    std::cerr << "oracle error: " << e.what() << "; rerun with --oracle off\n";
    return 2;
  } catch (const OracleDisagreement& e) {
    std::cerr << "internal disagreement: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
