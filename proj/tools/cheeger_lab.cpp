#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_kernel_source(CLI::App* cmd, cheeger::cli::RunConfig& c) {
  cmd->add_option("--input", c.input, "kernel JSON file");
  cmd->add_option("--chain", c.chain,
                  "two_point|cycle|lazy_cycle|complete|hypercube|rotation|random_reversible|random_general");
  cmd->add_option("--n", c.n, "number of states");
  cmd->add_option("--d", c.d, "hypercube dimension");
  cmd->add_option("--laziness", c.laziness, "holding probability in [0,1)");
}

}  // namespace

int main(int argc, char** argv) {
  cheeger::cli::RunConfig c;
  CLI::App app{"Exact spectral, expansion and evolving-set bounds for small Markov chains"};
  app.require_subcommand(1);
  app.add_option("--workers", c.workers, "threads for subset sweeps and sampling")
      ->check(CLI::Range(1, 256));

  auto* analyze = app.add_subcommand("analyze", "exact spectrum and every lower bound");
  add_kernel_source(analyze, c);

  auto* verify = app.add_subcommand("verify", "run the invariant suites over seeded fixtures");
  verify->add_option("--suite", c.suite, "all|martingale|flow|psi|lemma41|appendix|soundness");
  verify->add_option("--count", c.count, "random kernels or fixtures per suite");
  verify->add_option("--n-max", c.n_max, "largest random kernel size");

  auto* mix = app.add_subcommand("mix", "exact TV vs evolving-set and eigenvalue bounds");
  add_kernel_source(mix, c);
  mix->add_option("--samples", c.samples, "Monte-Carlo samples per start state");
  mix->add_option("--steps", c.steps, "largest step count");

  auto* gen = app.add_subcommand("generate", "write a built-in chain as kernel JSON");
  add_kernel_source(gen, c);

  for (auto* cmd : {analyze, verify, mix, gen}) {
    cmd->add_option("--seed", c.seed, "seed for random chains and sampling");
    cmd->add_option("--format", c.format, "table|csv|json");
    cmd->add_option("--out", c.out, "write output here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cheeger::cli::kInputError;
  }
  c.command = app.get_subcommands().front()->get_name();
  return cheeger::cli::run(c, std::cout, std::cerr);
}
