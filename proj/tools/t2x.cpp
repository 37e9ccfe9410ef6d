// t2x: time-to-space correlation maps from type-I PDC.
//
//   t2x <phimap|correlate|gauss|compare|image|sweep> --config run.cfg --out dir
//       [--grid-scale s] [--path fast|oracle] [--threads n]
//       [--object gate.csv] [--key pump.tau_p_fs --values 100,200,400]

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "t2x/app.hpp"
#include "t2x/config.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Time-to-space correlation maps of type-I PDC biphotons", "t2x"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::string path = "fast";
  std::string object;
  std::string sweep_key;
  std::vector<double> sweep_values;
  double grid_scale = 1.0;
  int threads = 0;

  cli.add_option("subcommand", subcommand, "phimap | correlate | gauss | compare | image | sweep")
      ->required()
      ->check(CLI::IsMember(t2x::subcommands()));
  cli.add_option("--config", config_path, "run configuration (defaults when omitted)");
  cli.add_option("--out", out_dir, "output directory")->required();
  cli.add_option("--grid-scale", grid_scale, "multiply spectral sample counts");
  cli.add_option("--path", path, "correlation path")->check(CLI::IsMember({"fast", "oracle"}));
  cli.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  cli.add_option("--object", object, "temporal object, CSV t_fs,T (image)");
  cli.add_option("--key", sweep_key, "config key to sweep (sweep)");
  cli.add_option("--values", sweep_values, "values for --key (sweep)")->delimiter(',');

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json j{{"error", "usage"}, {"message", e.what()}, {"exit_code", t2x::exit_config}};
    std::cerr << j.dump() << "\n";
    return t2x::exit_config;
  }

  t2x::RunConfig cfg;
  t2x::RunOptions opt;
  try {
    if (!config_path.empty()) {
      cfg = t2x::load_config(config_path);
      opt.config_dir = std::filesystem::path(config_path).parent_path();
    }
    opt.grid_scale = grid_scale;
    opt.path = t2x::parse_path(path);
    opt.threads = threads;
    opt.object = object;
    opt.sweep_key = sweep_key;
    opt.sweep_values = sweep_values;
  } catch (...) {
    const auto r = t2x::error_result(std::current_exception());
    std::cerr << r.error << "\n";
    return r.exit_code;
  }

  const auto result = t2x::run(subcommand, cfg, out_dir, opt);
  if (result.exit_code != t2x::exit_ok) {
    std::cerr << result.error << "\n";
    return result.exit_code;
  }
  for (const auto& f : result.files)
    std::cout << f.string() << "\n";
  return 0;
}
