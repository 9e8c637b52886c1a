#include "irisac/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using irisac::SpecError;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) { return irisac::parse_json_text(read_file(path), path); }

int run_sweep_command(const std::string& spec_path, const std::string& out_path, const std::string& json_path,
                      int workers, const std::string& preset, bool summary) {
  irisac::SweepSpec base;
  if (!preset.empty()) base = irisac::sweep_preset(preset);
  irisac::SweepSpec spec = base;
  if (!spec_path.empty()) {
    const nlohmann::json j = load_json(spec_path);  // syntax errors already carry the path
    try {
      spec = irisac::sweep_spec_from_json(j, base);
    } catch (const SpecError& e) {
      throw SpecError(spec_path + ": " + e.what());
    }
  }
  spec.validate();

  const auto rows = irisac::run_sweep(spec, workers);

  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) throw SpecError("cannot write " + out_path);
  irisac::write_csv(csv, rows);

  if (!json_path.empty()) {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw SpecError("cannot write " + json_path);
    js << nlohmann::json{{"spec", irisac::sweep_spec_to_json(spec)}, {"runs", irisac::rows_to_json(rows)}}.dump(1)
       << '\n';
  }

  std::size_t failures = 0;
  for (const auto& r : rows) failures += r.ok() ? 0 : 1;
  std::cerr << rows.size() << " runs, " << failures << " failed\n";
  if (summary) {
    std::vector<std::string> warnings;
    const auto agg = irisac::summarize(rows, irisac::Statistic::median, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "scheme,param,value,n,failures,median_crb,median_min_sinr_db\n";
    for (const auto& a : agg) {
      std::cout << a.scheme << ',' << a.param << ',' << irisac::format_double(a.value) << ',' << a.n << ','
                << a.failures << ',' << irisac::format_double(a.crb) << ',' << irisac::format_double(a.min_sinr_db)
                << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active-IRS ISAC beamforming experiments"};
  app.require_subcommand(1);

  std::string spec_path, out_path, json_path, preset;
  int workers = 1;
  bool summary = false;
  auto* sweep = app.add_subcommand("sweep", "Run a seeded Monte-Carlo sweep and write CSV rows");
  sweep->add_option("spec", spec_path, "Sweep spec (JSON); optional when --preset is given");
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--json", json_path, "Optional JSON sidecar with AO traces");
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--preset", preset, "Base preset the spec file overrides")
      ->check(CLI::IsMember(irisac::sweep_preset_names()));
  sweep->add_flag("--summary", summary, "Print per-group medians to stdout");

  std::string scenario_path;
  bool as_json = false;
  auto* eval = app.add_subcommand("eval", "Optimize one scenario and print its metrics as JSON");
  eval->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();

  auto* scaling = app.add_subcommand("scaling", "Scaling-law analysis of a scenario");
  scaling->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  scaling->add_flag("--json", as_json, "Print the full report as JSON instead of CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      if (spec_path.empty() && preset.empty()) throw SpecError("sweep needs a spec file or --preset");
      return run_sweep_command(spec_path, out_path, json_path, workers, preset, summary);
    }
    if (*eval) {
      std::cout << irisac::eval_scenario(load_json(scenario_path)).dump(2) << '\n';
      return 0;
    }
    if (*scaling) {
      const auto report = irisac::scaling_report(load_json(scenario_path));
      if (as_json) {
        std::cout << report.dump(2) << '\n';
      } else {
        irisac::write_scaling_csv(std::cout, report);
      }
      return 0;
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
