#pragma once

#include "irisac/schemes.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irisac {

// Malformed sweep or scenario file. The message carries the line/column or
// the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepParam { P_t, P_s, a_max, Gamma, fixed_a };

// Tokens: P_t | P_s | a_max | Gamma | fixed-a. Gamma values are in dB.
std::string to_string(SweepParam p);
SweepParam sweep_param_from_string(const std::string& s);

// Applies one parameter value to a configuration (fixed-a leaves it unchanged).
void apply_param(SystemConfig& config, SweepParam p, double value);

struct SeriesSpec {
  SweepParam param = SweepParam::a_max;
  std::vector<double> values;
};

struct SweepSpec {
  Mode mode = Mode::sensing;
  SweepParam param = SweepParam::P_t;
  std::vector<double> values;
  std::vector<SchemeId> schemes;
  int n_seeds = 1;
  std::uint64_t first_seed = 1;
  Scenario scenario;
  // Optional second parameter; each series value is swept separately and
  // shows up in the param column as "<param>|<series>=<value>".
  std::optional<SeriesSpec> series;
  AoOptions options;
  bool timing = false;  // wall_ms stays 0 unless set, keeping output deterministic

  void validate() const;
};

// Fields: mode, param, values, schemes, n_seeds, first_seed, scenario,
// series {param, values}, max_outer, n_randomizations. Missing fields keep
// the values of `base`.
SweepSpec sweep_spec_from_json(const nlohmann::json& j, const SweepSpec& base = {});
nlohmann::json sweep_spec_to_json(const SweepSpec& s);
// Parses text, reporting syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

// fig2 .. fig7 at the full geometry (M = N = 8, T = 100), ci at desk scale.
SweepSpec sweep_preset(const std::string& name);
std::vector<std::string> sweep_preset_names();

struct ResultRow {
  std::string scheme;
  std::string param;
  double value = 0.0;
  std::uint64_t seed = 0;
  double crb = 0.0;          // NaN on failure
  double min_sinr_db = 0.0;  // NaN in sensing mode or on failure
  double irs_power_w = 0.0;
  int iters = 0;
  std::string status;  // ok | violated | infeasible | numerical | error
  double wall_ms = 0.0;
  AoReport report;

  bool ok() const { return status == "ok"; }
};

// Rows come out in (series, value, seed, scheme) order whatever the worker count.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers = 1);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);

enum class Statistic { median, mean };

struct Aggregate {
  std::string scheme;
  std::string param;
  double value = 0.0;
  int n = 0;
  int failures = 0;
  double crb = 0.0;
  double min_sinr_db = 0.0;
};

// Groups by (scheme, param, value); failed rows count toward failures only.
// Groups without a successful row are dropped with a note in `warnings`.
std::vector<Aggregate> summarize(const std::vector<ResultRow>& rows, Statistic stat = Statistic::median,
                                 std::vector<std::string>* warnings = nullptr);
double median(std::vector<double> v);

// One-shot evaluation of a scenario file: fields of a scenario plus optional
// "scheme" (default ao) and "seed" (default 1).
nlohmann::json eval_scenario(const nlohmann::json& j);
// Scaling analysis of the design produced by "scheme" (default tx-only).
nlohmann::json scaling_report(const nlohmann::json& j);
// delta_r,delta_p,binding,objective
void write_scaling_csv(std::ostream& os, const nlohmann::json& report);

std::string format_double(double v);

}  // namespace irisac
