#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using speclift::cli::Options;
  CLI::App app{"speclift: spectral Nevanlinna-Pick lifting checker and constructor"};
  app.set_version_flag("--version", speclift::cli::kVersion);
  app.require_subcommand(1);

  Options opt;
  double rank_tol = 0.0, cluster_tol = 0.0;
  std::string reading;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", opt.input, "instance file (JSON, schema 1)")->required();
    sub->add_option("--output,-o", opt.output, "report file (default: standard output)");
    sub->add_option("--seed", opt.seed, "seed for randomized steps")->capture_default_str();
    sub->add_option("--rank-tol", rank_tol, "relative rank tolerance");
    sub->add_option("--cluster-tol", cluster_tol, "eigenvalue clustering tolerance");
    sub->add_option("--reading", reading, "block reading: grouped or per-block");
    sub->add_option("--samples", opt.samples, "disc samples for lifting verification")->capture_default_str();
  };

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"project", "eigenvalue projection of every matrix"},
      {"membership", "spectral ball and symmetrized polydisc membership"},
      {"jordan", "numerical Jordan structure of one matrix"},
      {"dseq", "generator counts d_l of one matrix"},
      {"check-local", "local lifting criterion at one node"},
      {"check-global", "solvability verdict over all nodes"},
      {"lift", "construct and verify a lifting (all targets cyclic)"},
      {"connect", "shear path between two similar matrices"},
      {"verify", "verify a lifting against the instance"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    const std::string name = c.name;
    if (name == "jordan" || name == "dseq") sub->add_option("--index", opt.index, "matrix index")->capture_default_str();
    if (name == "check-local") sub->add_option("--node", opt.node, "node index")->capture_default_str();
    if (name == "connect") {
      sub->add_option("--from", opt.from, "source matrix index")->capture_default_str();
      sub->add_option("--to", opt.to, "target matrix index")->capture_default_str();
    }
    if (name == "verify") sub->add_option("--lifting", opt.lifting, "lift report or lifting JSON")->required();
    sub->callback([&opt, sub]() { opt.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : speclift::cli::kValidation;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--rank-tol") > 0) opt.rank_tol = rank_tol;
    if (sub->count("--cluster-tol") > 0) opt.cluster_tol = cluster_tol;
    if (sub->count("--reading") > 0) opt.reading = reading;
  }
  return speclift::cli::run(opt);
}
