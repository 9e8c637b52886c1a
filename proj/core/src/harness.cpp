#include "irisac/harness.hpp"

#include "irisac/scaling_law.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace irisac {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T, class F>
T field(const json& j, const char* name, F&& read) {
  try {
    return read(j.at(name));
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("field '") + name + "': " + e.what());
  }
}

std::vector<double> read_values(const json& v) {
  if (!v.is_array() || v.empty()) throw SpecError("expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw SpecError("expected a number, got " + x.dump());
    out.push_back(x.get<double>());
  }
  return out;
}

std::string param_label(const SweepSpec& spec, std::optional<double> series_value) {
  std::string s = to_string(spec.param);
  if (spec.series && series_value) s += "|" + to_string(spec.series->param) + "=" + format_double(*series_value);
  return s;
}

struct Cell {
  std::optional<double> series_value;
  double value = 0.0;
  std::uint64_t seed = 0;
  SchemeId scheme = SchemeId::ao;
};

ResultRow run_cell(const SweepSpec& spec, const Cell& cell) {
  ResultRow row;
  row.scheme = to_string(cell.scheme);
  row.param = param_label(spec, cell.series_value);
  row.value = cell.value;
  row.seed = cell.seed;
  row.crb = kNaN;
  row.min_sinr_db = kNaN;
  row.irs_power_w = kNaN;

  SystemConfig config = spec.scenario.config;
  if (cell.series_value) apply_param(config, spec.series->param, *cell.series_value);
  apply_param(config, spec.param, cell.value);

  const auto start = std::chrono::steady_clock::now();
  try {
    const ChannelSet ch = generate_channels(config, spec.scenario.geometry, spec.scenario.model, cell.seed);
    AoReport rep = spec.param == SweepParam::fixed_a
                       ? run_fixed_amplitude(ch, config, spec.mode, cell.value, cell.seed, spec.options)
                       : run_scheme(cell.scheme, ch, config, spec.mode, cell.seed, spec.options);
    SystemConfig eval = scheme_config(cell.scheme, config);
    if (spec.param == SweepParam::fixed_a) eval.a_max = std::max(eval.a_max, cell.value);
    const MetricsReport m = check_feasibility(ch, rep.tx, rep.rf, eval, scheme_constraints(cell.scheme, spec.mode));
    row.crb = m.crb.value_or(kNaN);
    if (spec.mode == Mode::isac) row.min_sinr_db = m.min_sinr_db;
    row.irs_power_w = m.irs_power;
    row.iters = rep.iterations;
    row.status = m.feasible() && m.crb ? "ok" : "violated";
    row.report = std::move(rep);
  } catch (const InfeasibleError&) {
    row.status = "infeasible";
  } catch (const NumericalError&) {
    row.status = "numerical";
  } catch (const std::exception&) {
    row.status = "error";
  }
  if (spec.timing) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

json trace_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

SchemeId scheme_or_default(const json& j, SchemeId fallback) {
  return j.contains("scheme") ? field<SchemeId>(j, "scheme", [](const json& v) {
    return scheme_from_string(v.get<std::string>());
  })
                              : fallback;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::P_t: return "P_t";
    case SweepParam::P_s: return "P_s";
    case SweepParam::a_max: return "a_max";
    case SweepParam::Gamma: return "Gamma";
    case SweepParam::fixed_a: return "fixed-a";
  }
  return "unknown";
}

SweepParam sweep_param_from_string(const std::string& s) {
  for (SweepParam p : {SweepParam::P_t, SweepParam::P_s, SweepParam::a_max, SweepParam::Gamma, SweepParam::fixed_a}) {
    if (to_string(p) == s) return p;
  }
  throw SpecError("unknown parameter '" + s + "' (expected P_t, P_s, a_max, Gamma or fixed-a)");
}

void apply_param(SystemConfig& config, SweepParam p, double value) {
  switch (p) {
    case SweepParam::P_t: config.P_t = value; break;
    case SweepParam::P_s: config.P_s = value; break;
    case SweepParam::a_max: config.a_max = value; break;
    case SweepParam::Gamma: config.gamma.assign(static_cast<std::size_t>(config.K), db_to_linear(value)); break;
    case SweepParam::fixed_a: break;
  }
}

void SweepSpec::validate() const {
  if (values.empty()) throw SpecError("values: empty sweep");
  if (schemes.empty()) throw SpecError("schemes: no scheme selected");
  if (n_seeds < 1) throw SpecError("n_seeds: must be at least 1");
  if (scenario.mode != mode) throw SpecError("scenario mode differs from sweep mode");
  for (SchemeId id : schemes) {
    if (!scheme_supports(id, mode)) throw SpecError("schemes: " + to_string(id) + " does not support " + to_string(mode));
    if (param == SweepParam::fixed_a && id != SchemeId::transmit_bf_only) {
      throw SpecError("schemes: a fixed-a sweep only runs tx-only");
    }
  }
  if (param == SweepParam::Gamma && mode != Mode::isac) throw SpecError("param: Gamma needs isac mode");
  if (series) {
    if (series->values.empty()) throw SpecError("series.values: empty");
    if (series->param == param) throw SpecError("series.param: equals the swept parameter");
    if (series->param == SweepParam::fixed_a) throw SpecError("series.param: fixed-a cannot be a series");
  }
  for (double v : values) {
    SystemConfig c = scenario.config;
    if (param == SweepParam::fixed_a && !(v > 0.0)) throw SpecError("values: amplitudes must be positive");
    apply_param(c, param, v);
    try {
      c.validate(mode);
    } catch (const std::invalid_argument& e) {
      throw SpecError("values: " + format_double(v) + " gives an invalid system: " + e.what());
    }
  }
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    const auto nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = nl == std::string::npos ? byte + 1 : byte - nl;
    throw SpecError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

SweepSpec sweep_spec_from_json(const json& j, const SweepSpec& base) {
  if (!j.is_object()) throw SpecError("sweep spec must be a JSON object");
  static const char* const known[] = {"mode",     "param",     "values",    "schemes",          "n_seeds",
                                      "first_seed", "scenario", "series",  "max_outer", "n_randomizations",
                                      "timing"};
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; })) {
      throw SpecError("unknown field '" + key + "'");
    }
  }
  SweepSpec s = base;
  if (j.contains("mode")) {
    s.mode = field<Mode>(j, "mode", [](const json& v) { return mode_from_string(v.get<std::string>()); });
    if (!j.contains("scenario") && s.scenario.mode != s.mode) {
      const bool desk = s.scenario.config.M == desk_scenario(s.scenario.mode).config.M;
      s.scenario = desk ? desk_scenario(s.mode) : default_scenario(s.mode);
    }
  }
  if (j.contains("param")) {
    s.param = field<SweepParam>(j, "param", [](const json& v) { return sweep_param_from_string(v.get<std::string>()); });
  }
  if (j.contains("values")) s.values = field<std::vector<double>>(j, "values", read_values);
  if (j.contains("schemes")) {
    s.schemes = field<std::vector<SchemeId>>(j, "schemes", [](const json& v) {
      std::vector<SchemeId> out;
      for (const auto& x : v) out.push_back(scheme_from_string(x.get<std::string>()));
      return out;
    });
  }
  if (j.contains("n_seeds")) s.n_seeds = field<int>(j, "n_seeds", [](const json& v) { return v.get<int>(); });
  if (j.contains("first_seed")) {
    s.first_seed = field<std::uint64_t>(j, "first_seed", [](const json& v) { return v.get<std::uint64_t>(); });
  }
  if (j.contains("scenario")) {
    s.scenario = field<Scenario>(j, "scenario", [&](const json& v) {
      json sc = v;
      if (!sc.contains("mode")) sc["mode"] = to_string(s.mode);
      return scenario_from_json(sc);
    });
  }
  if (j.contains("series")) {
    s.series = field<SeriesSpec>(j, "series", [](const json& v) {
      SeriesSpec ser;
      ser.param = sweep_param_from_string(v.at("param").get<std::string>());
      ser.values = read_values(v.at("values"));
      return ser;
    });
  }
  if (j.contains("max_outer")) s.options.max_outer = field<int>(j, "max_outer", [](const json& v) { return v.get<int>(); });
  if (j.contains("n_randomizations")) {
    s.options.n_randomizations = field<int>(j, "n_randomizations", [](const json& v) { return v.get<int>(); });
  }
  if (j.contains("timing")) s.timing = field<bool>(j, "timing", [](const json& v) { return v.get<bool>(); });
  s.validate();
  return s;
}

json sweep_spec_to_json(const SweepSpec& s) {
  json schemes = json::array();
  for (SchemeId id : s.schemes) schemes.push_back(to_string(id));
  json j{{"mode", to_string(s.mode)},
         {"param", to_string(s.param)},
         {"values", s.values},
         {"schemes", schemes},
         {"n_seeds", s.n_seeds},
         {"first_seed", s.first_seed},
         {"scenario", scenario_to_json(s.scenario)},
         {"max_outer", s.options.max_outer},
         {"n_randomizations", s.options.n_randomizations},
         {"timing", s.timing}};
  if (s.series) j["series"] = {{"param", to_string(s.series->param)}, {"values", s.series->values}};
  return j;
}

std::vector<std::string> sweep_preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "ci"}; }

SweepSpec sweep_preset(const std::string& name) {
  const std::vector<SchemeId> sensing_schemes{SchemeId::ao, SchemeId::transmit_bf_only, SchemeId::reflective_bf_only,
                                              SchemeId::passive_irs};
  const std::vector<SchemeId> isac_schemes{SchemeId::ao, SchemeId::transmit_bf_only, SchemeId::passive_irs,
                                           SchemeId::zf_bf};
  const std::vector<double> ps_sweep{1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  SweepSpec s;
  s.n_seeds = 50;
  if (name == "fig2") {
    s.mode = Mode::sensing;
    s.scenario = default_scenario(s.mode);
    s.scenario.config.P_t = 50.0;
    s.param = SweepParam::fixed_a;
    for (int a = 2; a <= 15; ++a) s.values.push_back(a);
    s.schemes = {SchemeId::transmit_bf_only};
    s.series = SeriesSpec{SweepParam::P_s, {1e-5, 1e-4, 1e-3}};
  } else if (name == "fig3" || name == "fig5") {
    s.mode = name == "fig3" ? Mode::sensing : Mode::isac;
    s.scenario = default_scenario(s.mode);
    s.param = SweepParam::P_t;
    s.values = {20.0, 30.0, 40.0, 50.0};
    s.schemes = s.mode == Mode::sensing ? sensing_schemes : isac_schemes;
    s.series = SeriesSpec{SweepParam::a_max, {10.0, 15.0}};
  } else if (name == "fig4" || name == "fig6") {
    s.mode = name == "fig4" ? Mode::sensing : Mode::isac;
    s.scenario = default_scenario(s.mode);
    s.scenario.config.P_t = 40.0;
    s.param = SweepParam::P_s;
    s.values = ps_sweep;
    s.schemes = s.mode == Mode::sensing ? sensing_schemes : isac_schemes;
  } else if (name == "fig7") {
    s.mode = Mode::isac;
    s.scenario = default_scenario(s.mode);
    s.scenario.config.P_t = 20.0;
    s.scenario.config.a_max = 15.0;
    s.param = SweepParam::Gamma;
    s.values = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
    s.schemes = isac_schemes;
  } else if (name == "ci") {
    s.mode = Mode::sensing;
    s.scenario = desk_scenario(s.mode);
    s.param = SweepParam::P_t;
    s.values = {20.0, 50.0};
    s.schemes = sensing_schemes;
    s.n_seeds = 3;
  } else {
    throw SpecError("unknown preset '" + name + "'");
  }
  s.validate();
  return s;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  std::vector<Cell> cells;
  std::vector<std::optional<double>> series_values{std::nullopt};
  if (spec.series) series_values.assign(spec.series->values.begin(), spec.series->values.end());
  for (const auto& sv : series_values) {
    for (double v : spec.values) {
      for (int i = 0; i < spec.n_seeds; ++i) {
        for (SchemeId id : spec.schemes) {
          cells.push_back({sv, v, spec.first_seed + static_cast<std::uint64_t>(i), id});
        }
      }
    }
  }
  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = run_cell(spec, cells[i]);
  };
  const int n = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

const char* const kCsvHeader = "scheme,param,value,seed,crb,min_sinr_db,irs_power_w,iters,status,wall_ms";

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.param << ',' << format_double(r.value) << ',' << r.seed << ',' << format_double(r.crb)
       << ',' << format_double(r.min_sinr_db) << ',' << format_double(r.irs_power_w) << ',' << r.iters << ','
       << r.status << ',' << format_double(r.wall_ms) << '\n';
  }
}

json rows_to_json(const std::vector<ResultRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"scheme", r.scheme},
                   {"param", r.param},
                   {"value", r.value},
                   {"seed", r.seed},
                   {"status", r.status},
                   {"crb", number_or_null(r.crb)},
                   {"reason", r.report.reason},
                   {"iterations", r.iters},
                   {"crb_trace", trace_json(r.report.crb_trace)},
                   {"min_sinr_db_trace", trace_json(r.report.min_sinr_db_trace)},
                   {"irs_power_trace", trace_json(r.report.irs_power_trace)}});
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<Aggregate> summarize(const std::vector<ResultRow>& rows, Statistic stat,
                                 std::vector<std::string>* warnings) {
  struct Acc {
    std::vector<double> crb, sinr;
    int failures = 0;
  };
  std::vector<std::tuple<std::string, std::string, double>> order;
  std::map<std::tuple<std::string, std::string, double>, Acc> groups;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.scheme, r.param, r.value);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    if (!r.ok()) {
      ++it->second.failures;
      continue;
    }
    it->second.crb.push_back(r.crb);
    if (std::isfinite(r.min_sinr_db)) it->second.sinr.push_back(r.min_sinr_db);
  }
  auto reduce = [stat](const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    if (stat == Statistic::median) return median(v);
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  std::vector<Aggregate> out;
  for (const auto& key : order) {
    const Acc& a = groups.at(key);
    if (a.crb.empty()) {
      if (warnings) {
        warnings->push_back("no successful run for " + std::get<0>(key) + " at " + std::get<1>(key) + " = " +
                            format_double(std::get<2>(key)));
      }
      continue;
    }
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), static_cast<int>(a.crb.size()), a.failures,
                   reduce(a.crb), reduce(a.sinr)});
  }
  return out;
}

json eval_scenario(const json& j) {
  const Scenario sc = field<Scenario>(json{{"s", j}}, "s", [](const json& v) {
    json copy = v;
    copy.erase("scheme");
    copy.erase("seed");
    return scenario_from_json(copy);
  });
  const SchemeId id = scheme_or_default(j, SchemeId::ao);
  const auto seed = j.value("seed", std::uint64_t{1});
  const ChannelSet ch = generate_channels(sc.config, sc.geometry, sc.model, seed);
  const AoReport rep = run_scheme(id, ch, sc.config, sc.mode, seed);
  const MetricsReport m = check_feasibility(ch, rep.tx, rep.rf, scheme_config(id, sc.config),
                                            scheme_constraints(id, sc.mode));
  json out = report_to_json(m);
  out["scheme"] = to_string(id);
  out["seed"] = seed;
  out["feasible"] = m.feasible();
  out["reason"] = rep.reason;
  out["iterations"] = rep.iterations;
  out["crb_trace"] = trace_json(rep.crb_trace);
  std::vector<double> p(rep.rf.p.data(), rep.rf.p.data() + rep.rf.p.size());
  out["amplitudes"] = p;
  return out;
}

json scaling_report(const json& j) {
  const Scenario sc = field<Scenario>(json{{"s", j}}, "s", [](const json& v) {
    json copy = v;
    copy.erase("scheme");
    copy.erase("seed");
    return scenario_from_json(copy);
  });
  const SchemeId id = scheme_or_default(j, SchemeId::transmit_bf_only);
  const auto seed = j.value("seed", std::uint64_t{1});
  const ChannelSet ch = generate_channels(sc.config, sc.geometry, sc.model, seed);
  const AoReport rep = run_scheme(id, ch, sc.config, sc.mode, seed);
  const ScalingBetas b = compute_betas(ch, rep.tx, rep.rf, sc.config, sc.mode);
  const ScalingResult r = sc.mode == Mode::sensing ? scaling_sensing(b, sc.config, ScalingGiven::joint())
                                                   : scaling_isac(b, sc.config, ScalingGiven::joint());
  const ScalingResult g = grid_oracle(b, sc.config, sc.mode, 1e-3 * std::min(b.b5, b.b6));
  return {{"scheme", to_string(id)},
          {"seed", seed},
          {"betas", {{"b1", b.b1}, {"b2", b.b2}, {"b3", b.b3}, {"b4", b.b4}, {"b5", b.b5}, {"b6", b.b6},
                     {"b7", b.b7}, {"b8", b.b8}}},
          {"delta_r", r.delta_r},
          {"delta_p", r.delta_p},
          {"feasible", r.feasible},
          {"binding", r.binding},
          {"objective", r.objective()},
          {"approx_delta_r", r.approx_delta_r},
          {"approx_delta_p", r.approx_delta_p},
          {"grid", {{"delta_r", g.delta_r}, {"delta_p", g.delta_p}, {"objective", g.objective()}}}};
}

void write_scaling_csv(std::ostream& os, const json& report) {
  std::string binding;
  for (const auto& b : report.at("binding")) binding += (binding.empty() ? "" : ";") + b.get<std::string>();
  os << "delta_r,delta_p,binding,objective\n"
     << format_double(report.at("delta_r").get<double>()) << ',' << format_double(report.at("delta_p").get<double>())
     << ',' << binding << ',' << format_double(report.at("objective").get<double>()) << '\n';
}

}  // namespace irisac
