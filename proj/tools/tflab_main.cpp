#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tflab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tflab: spectra and deviation bounds of time-frequency "
               "concentration operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int jobs = 1;

  std::string selected;
  for (const std::string name :
       {"spectrum", "geometry", "verify", "sharpness", "fit"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker pool size");
    sub->callback([&selected, name] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    tflab::cli::run_config_file(config_path, out_dir, jobs, selected);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tflab::cli::exit_code_for(e);
  }
  return 0;
}
