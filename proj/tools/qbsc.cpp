// Command-line front end. Every run resolves to one RunConfig, emits one
// report (JSON or CSV) and exits 0 on success, 1 on validation errors, 2 when
// the trade-off audit flags a violation of the no-go bound.

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "qbsc/cli.hpp"

using namespace qbsc;

int main(int argc, char** argv) {
  CLI::App app{"qbsc: a laboratory for quantum bit string commitment"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string optimizer_json;
  std::string measures = "xi,chi,iacc";
  std::optional<int> restarts_flag, iters_flag;
  std::optional<double> tol_flag;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "master seed (default 0)");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_protocol = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--protocol", cfg.protocol, "lockcom | trivial");
    if (required) opt->required();
    sub->add_option("--bases", cfg.bases, "two | haar (lockcom only)");
    sub->add_option("--n", cfg.n, "string length");
    sub->add_option("--beta", cfg.beta, "revealed bits (trivial only)");
    sub->add_option("--k", cfg.k, "haar set size");
  };
  auto add_ensemble_input = [&](CLI::App* sub) {
    sub->add_option("--ensemble", cfg.ensemble_file,
                    "ensemble JSON file (alternative to --protocol)");
  };
  auto add_optimizer = [&](CLI::App* sub) {
    sub->add_option("--optimizer", optimizer_json,
                    "optimizer settings as JSON "
                    "{\"restarts\",\"max_iters\",\"tol\",\"seed\"}");
    sub->add_option("--restarts", restarts_flag, "see-saw restarts");
    sub->add_option("--max-iters", iters_flag, "see-saw iteration cap");
    sub->add_option("--tol", tol_flag, "see-saw convergence tolerance");
  };

  CLI::App* constants = app.add_subcommand(
      "constants", "trade-off constants c and gamma* of the no-go bound");
  add_common(constants);

  CLI::App* audit = app.add_subcommand(
      "audit", "security report: (n, a, b) under xi, chi and the I_acc bracket");
  add_protocol(audit, true);
  add_optimizer(audit);
  audit->add_option("--measures", measures,
                    "comma list drawn from xi,chi,iacc (xi always on)");
  add_common(audit);

  CLI::App* attack = app.add_subcommand("attack", "constructive attacks");
  attack->require_subcommand(1);
  CLI::App* alice = attack->add_subcommand(
      "alice", "hash-superposition attack with Uhlmann steering");
  add_protocol(alice, true);
  alice->add_option("--m", cfg.m, "hash shortening (s = n - m)")->required();
  alice->add_option("--hash-samples", cfg.hash_samples,
                    "two-universal hashes to sample");
  add_common(alice);
  CLI::App* bob = attack->add_subcommand(
      "bob", "square-root measurement guessing attack");
  add_protocol(bob, false);
  add_ensemble_input(bob);
  add_common(bob);

  CLI::App* pa = app.add_subcommand(
      "pa-audit", "Monte-Carlo audit of the privacy-amplification bound");
  add_protocol(pa, false);
  add_ensemble_input(pa);
  pa->add_option("--s", cfg.s, "hash output bits")->required();
  pa->add_option("--samples", cfg.samples, "hashes to sample");
  add_common(pa);

  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "check a + b + c >= n; exits 2 on violation");
  add_protocol(tradeoff, false);
  tradeoff->add_flag("--with-attack", cfg.with_attack,
                     "also check the attack's implied a");
  tradeoff->add_option("--m", cfg.m, "attack hash shortening");
  tradeoff->add_option("--hash-samples", cfg.hash_samples);
  double hyp_a = 0.0, hyp_b = 0.0;
  auto* ha = tradeoff->add_option("--hypothetical-a", hyp_a,
                                  "audit a hypothetical (n,a,b) instead");
  auto* hb = tradeoff->add_option("--hypothetical-b", hyp_b);
  add_common(tradeoff);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run one audit or attack per point along one axis");
  add_protocol(sweep, true);
  add_optimizer(sweep);
  sweep->add_option("--axis", cfg.axis, "n | k | m | beta")->required();
  sweep->add_option("--values", cfg.values, "comma-separated points")
      ->required()
      ->delimiter(',');
  sweep->add_option("--measures", measures);
  sweep->add_option("--hash-samples", cfg.hash_samples);
  add_common(sweep);

  CLI::App* parallel = app.add_subcommand(
      "parallel-audit", "additivity of chi / xi over tensor powers");
  add_protocol(parallel, false);
  add_ensemble_input(parallel);
  parallel->add_option("--copies", cfg.copies, "parallel executions");
  parallel->add_option("--measure", cfg.measure, "chi | xi");
  add_common(parallel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help stays 0, any parse failure is 1
  }

  try {
    if (constants->parsed()) cfg.command = "constants";
    if (audit->parsed()) cfg.command = "audit";
    if (attack->parsed())
      cfg.command = alice->parsed() ? "attack-alice" : "attack-bob";
    if (pa->parsed()) cfg.command = "pa-audit";
    if (tradeoff->parsed()) {
      cfg.command = "tradeoff";
      if (ha->count()) cfg.hypothetical_a = hyp_a;
      if (hb->count()) cfg.hypothetical_b = hyp_b;
    }
    if (sweep->parsed()) cfg.command = "sweep";
    if (parallel->parsed()) cfg.command = "parallel-audit";

    if (!optimizer_json.empty())
      cfg.optimizer = optimizer_from_json(json::parse(optimizer_json));
    if (restarts_flag) cfg.optimizer.restarts = *restarts_flag;
    if (iters_flag) cfg.optimizer.max_iters = *iters_flag;
    if (tol_flag) cfg.optimizer.tol = *tol_flag;

    cfg.measure_chi = measures.find("chi") != std::string::npos;
    cfg.measure_iacc = measures.find("iacc") != std::string::npos;

    const RunResult res = dispatch(cfg);
    write_report(cfg, res.report, std::cout);
    return res.exit_code;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
