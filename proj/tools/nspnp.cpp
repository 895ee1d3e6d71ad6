// Command-line driver: run, convergence, selfcheck.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nspnp/commands.hpp"

namespace {

nspnp::RunConfig resolve(const std::string& config_path, const std::string& case_name) {
  if (!config_path.empty()) return nspnp::load_config(config_path);
  if (!case_name.empty()) return nspnp::default_config(nspnp::parse_case_tag(case_name));
  throw nspnp::ConfigError(0, "either --config or --case is required");
}

void report_files(const nspnp::CommandOutput& out) {
  for (const auto& f : out.files) std::cerr << "wrote " << f << '\n';
  if (!out.warnings.empty()) {
    std::cerr << out.warnings.size() << " warning(s); first: " << out.warnings.front() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupled SAV pressure-correction solver for the NS-PNP system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string case_name;
  std::string out_dir;
  std::uint64_t seed = 20240917;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--case", case_name, "example1 | example2 | example3 with default settings")
        ->excludes(sub->get_option("--config"));
    sub->add_option("--out", out_dir, "output directory (default: config 'out' or .)");
    sub->add_flag("--quiet,-q", quiet, "no progress output");
  };

  CLI::App* run = app.add_subcommand("run", "one run at the configured tau");
  add_common(run);
  CLI::App* conv = app.add_subcommand("convergence", "error/rate table over the configured taus");
  add_common(conv);
  CLI::App* self = app.add_subcommand("selfcheck", "property checks on small problems");
  self->add_option("--out", out_dir, "also write selfcheck.csv here");
  self->add_option("--seed", seed, "RNG seed");
  self->add_option("--config", config_path, "take the seed from this configuration")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostream* log = quiet ? nullptr : &std::cerr;
    if (self->parsed()) {
      if (!config_path.empty() && self->count("--seed") == 0) {
        seed = nspnp::load_config(config_path).seed;
      }
      const auto rep = nspnp::cmd_selfcheck(seed, out_dir, &std::cout);
      return rep.failed() == 0 ? 0 : 1;
    }
    nspnp::RunConfig cfg = resolve(config_path, case_name);
    const std::string dir = !out_dir.empty() ? out_dir : (!cfg.out_dir.empty() ? cfg.out_dir : ".");
    const auto out = run->parsed() ? nspnp::cmd_run(cfg, dir, log) : nspnp::cmd_convergence(cfg, dir, log);
    report_files(out);
    if (out.errors) std::cout << nspnp::format_error_table(*out.errors);
    return 0;
  } catch (const nspnp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const nspnp::StepError& e) {
    std::cerr << "step failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
