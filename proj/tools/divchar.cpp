// divchar: character sums along elliptic divisibility sequences.
//
// Exit status: 0 on success, 1 on usage or input errors, 2 when a
// verification check fails.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "divchar/error.hpp"
#include "divchar/harness.hpp"

namespace {

void add_common_options(CLI::App& sub, divchar::ExperimentConfig& cfg) {
  sub.add_option("--p", cfg.p, "prime modulus");
  sub.add_option("--a", cfg.a, "curve coefficient A");
  sub.add_option("--b", cfg.b, "curve coefficient B");
  sub.add_option("--px", cfg.px, "point x-coordinate");
  sub.add_option("--py", cfg.py, "point y-coordinate");
  sub.add_option("--n", cfg.n, "single sequence index");
  sub.add_option("--cap-n", cfg.cap_n, "sequence length / sum length N");
  sub.add_option("--twist-a", cfg.twist_a, "twist a, or half-open range lo:hi (default 0:R)");
  sub.add_option("--ell", cfg.ells, "division polynomial indices of f")->delimiter(',');
  sub.add_option("--char-order", cfg.char_order, "order d of a multiplicative character, d | p - 1");
  sub.add_option("--p-min", cfg.p_min, "smallest prime of a range")->capture_default_str();
  sub.add_option("--p-max", cfg.p_max, "largest prime of a range")->capture_default_str();
  sub.add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  sub.add_option("--out", cfg.out, "output file (JSON Lines); stdout if absent");
  sub.add_option("--threads", cfg.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic and order-d character sums along elliptic divisibility sequences"};
  app.set_version_flag("--version", divchar::library_version());
  app.require_subcommand(1);
  divchar::ExperimentConfig cfg;

  auto* eval = app.add_subcommand("eval", "Psi_n(P), a run of the sequence, and its period data");
  auto* sums = app.add_subcommand("sums", "S_P(N), T_P(a), bound ratios and identity checks");
  auto* verify = app.add_subcommand("verify", "batch verification of the sequence and character-sum identities");
  auto* scan = app.add_subcommand("scan", "bias and bound-ratio records over a prime range");
  auto* bench = app.add_subcommand("bench", "timings on a 62-bit prime");
  for (auto* sub : {eval, sums, verify, scan, bench}) add_common_options(*sub, cfg);

  verify->add_option("--lemma", cfg.lemma, "recurrence | parper | nm | per-chi | weil | all")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "random trials for recurrence and nm")->capture_default_str();
  scan->add_option("--points", cfg.points, "max-order | all | given")->capture_default_str();
  scan->add_option("--curves", cfg.curves, "all | random")->capture_default_str();
  scan->add_option("--curves-per-prime", cfg.curves_per_prime, "random curves per prime")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      std::cerr << "divchar: cannot open " << cfg.out << " for writing\n";
      return 1;
    }
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto records = divchar::run_command(command, cfg);
    divchar::write_jsonl(os, records);
    os.flush();
    return divchar::exit_status(records);
  } catch (const divchar::Error& e) {
    divchar::write_jsonl(os, {divchar::error_record(e.code(), e.what())});
    std::cerr << "divchar: " << e.code() << ": " << e.what() << '\n';
    return 1;
  }
}
