#include "irisac/scenario.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irisac {

std::string to_string(Mode m) { return m == Mode::sensing ? "sensing" : "isac"; }

Mode mode_from_string(const std::string& s) {
  if (s == "sensing") return Mode::sensing;
  if (s == "isac") return Mode::isac;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

void SystemConfig::validate(Mode mode) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
  if (M < 1 || N < 1) fail("M and N must be positive");
  if (M < N) fail("M must be at least N");
  if (T < 1) fail("T must be positive");
  if (K < 0) fail("K must be nonnegative");
  if (mode == Mode::isac && K < 1) fail("ISAC mode needs at least one user");
  if (!(P_t > 0.0) || !(P_s > 0.0)) fail("power budgets must be positive");
  if (!(a_max > 0.0)) fail("a_max must be positive");
  if (!(sigma_r2 >= 0.0) || !(sigma_b2 > 0.0) || !(sigma_u2 >= 0.0)) fail("invalid noise variance");
  if (static_cast<int>(gamma.size()) != K) fail("gamma must have K entries");
  for (double g : gamma) {
    if (!(g > 0.0)) fail("SINR targets must be positive");
  }
}

double distance(const Point2& a, const Point2& b) { return std::hypot(b.x - a.x, b.y - a.y); }

double broadside_sine(const Point2& from, const Point2& to) {
  const double d = distance(from, to);
  if (!(d > 0.0)) throw std::invalid_argument("broadside_sine: coincident points");
  return (to.x - from.x) / d;
}

ComplexVector steering_vector_from_sine(int n, double sine) {
  ComplexVector b(n);
  for (int i = 0; i < n; ++i) b(i) = std::polar(1.0, M_PI * i * sine);
  return b;
}

ComplexVector steering_vector(int n, double theta_rad) { return steering_vector_from_sine(n, std::sin(theta_rad)); }

double pathloss(double d, double ref_db, double alpha) {
  if (!(d > 0.0)) throw std::invalid_argument("pathloss: distance must be positive");
  return std::pow(10.0, (ref_db - 10.0 * alpha * std::log10(d)) / 10.0);
}

ComplexMatrix rician_channel(const ComplexMatrix& los, double pl, double k_linear, Rng& rng) {
  const ComplexMatrix nlos = complex_gaussian_matrix(los.rows(), los.cols(), rng);
  if (std::isinf(k_linear)) return std::sqrt(pl) * los;
  return std::sqrt(pl) * (std::sqrt(k_linear / (1.0 + k_linear)) * los + std::sqrt(1.0 / (1.0 + k_linear)) * nlos);
}

ComplexMatrix generate_target_response(int n, const std::vector<Scatterer>& scatterers) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  for (const auto& s : scatterers) {
    const ComplexVector b = steering_vector(n, s.angle_rad);
    e += s.gain * b * b.transpose();
  }
  return e;
}

std::vector<Scatterer> default_scatterers(const Geometry& geometry, const ChannelModel& model, Rng& rng) {
  const double theta = std::asin(broadside_sine(geometry.irs, geometry.target));
  const double rt = pathloss(distance(geometry.irs, geometry.target), model.pathloss_ref_db, model.alpha_irs_target);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::vector<Scatterer> out;
  for (double off : model.scatter_offsets_deg) {
    const double ph = phase(rng);
    out.push_back({theta + off * M_PI / 180.0, std::polar(rt, ph)});
  }
  return out;
}

ChannelSet generate_channels(const SystemConfig& config, const Geometry& geometry, const ChannelModel& model,
                             std::uint64_t seed) {
  if (static_cast<int>(geometry.users.size()) < config.K) {
    throw std::invalid_argument("generate_channels: geometry has fewer users than K");
  }
  Rng rng(seed);
  const double k_lin = model.los_only ? std::numeric_limits<double>::infinity() : db_to_linear(model.rician_k_db);

  const ComplexVector a_irs = steering_vector_from_sine(config.N, broadside_sine(geometry.irs, geometry.bs));
  const ComplexVector a_bs = steering_vector_from_sine(config.M, broadside_sine(geometry.bs, geometry.irs));
  const double pl_g = pathloss(distance(geometry.bs, geometry.irs), model.pathloss_ref_db, model.alpha_bs_irs);

  ChannelSet ch;
  bool full_rank = false;
  for (int attempt = 0; attempt < 10 && !full_rank; ++attempt) {
    ch.G = rician_channel(a_irs * a_bs.adjoint(), pl_g, k_lin, rng);
    Eigen::JacobiSVD<ComplexMatrix> svd(ch.G);
    const auto& sv = svd.singularValues();
    full_rank = sv(sv.size() - 1) > 1e-10 * sv(0);
  }
  if (!full_rank) throw NumericalError("generate_channels: G is rank deficient after 10 draws");

  ch.h.clear();
  for (int k = 0; k < config.K; ++k) {
    const Point2& u = geometry.users[static_cast<std::size_t>(k)];
    const ComplexVector los = steering_vector_from_sine(config.N, broadside_sine(geometry.irs, u));
    const double pl = pathloss(distance(geometry.irs, u), model.pathloss_ref_db, model.alpha_irs_user);
    ch.h.push_back(rician_channel(los, pl, k_lin, rng).col(0));
  }
  ch.E = generate_target_response(config.N, default_scatterers(geometry, model, rng));
  return ch;
}

Scenario default_scenario(Mode mode) {
  Scenario s;
  s.mode = mode;
  if (mode == Mode::sensing) {
    s.config.K = 0;
    s.config.gamma.clear();
  }
  return s;
}

Scenario desk_scenario(Mode mode) {
  Scenario s = default_scenario(mode);
  s.config.M = 4;
  s.config.N = 4;
  s.config.T = 16;
  return s;
}

namespace {

double read_power(const nlohmann::json& j, const std::string& key, double fallback) {
  if (j.contains(key + "_w")) return j.at(key + "_w").get<double>();
  if (j.contains(key + "_dbm")) return dbm_to_watts(j.at(key + "_dbm").get<double>());
  return fallback;
}

Point2 read_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json write_point(const Point2& p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j, const SystemConfig& base) {
  SystemConfig c = base;
  c.M = j.value("M", c.M);
  c.N = j.value("N", c.N);
  c.T = j.value("T", c.T);
  const int old_k = c.K;
  c.K = j.value("K", c.K);
  c.P_t = read_power(j, "P_t", c.P_t);
  c.P_s = read_power(j, "P_s", c.P_s);
  c.a_max = j.value("a_max", c.a_max);
  c.sigma_r2 = read_power(j, "sigma_r2", c.sigma_r2);
  c.sigma_b2 = read_power(j, "sigma_b2", c.sigma_b2);
  c.sigma_u2 = read_power(j, "sigma_u2", c.sigma_u2);
  if (j.contains("noise_dbm")) {
    c.sigma_r2 = c.sigma_b2 = c.sigma_u2 = dbm_to_watts(j.at("noise_dbm").get<double>());
  }
  if (j.contains("gamma_db")) {
    const auto& g = j.at("gamma_db");
    c.gamma.clear();
    if (g.is_array()) {
      for (const auto& v : g) c.gamma.push_back(db_to_linear(v.get<double>()));
    } else {
      c.gamma.assign(static_cast<std::size_t>(c.K), db_to_linear(g.get<double>()));
    }
  } else if (c.K != old_k) {
    const double g = c.gamma.empty() ? 10.0 : c.gamma.front();
    c.gamma.assign(static_cast<std::size_t>(c.K), g);
  }
  return c;
}

nlohmann::json config_to_json(const SystemConfig& c) {
  nlohmann::json g = nlohmann::json::array();
  for (double v : c.gamma) g.push_back(linear_to_db(v));
  return {{"M", c.M},           {"N", c.N},
          {"K", c.K},           {"T", c.T},
          {"P_t_w", c.P_t},     {"P_s_w", c.P_s},
          {"a_max", c.a_max},   {"sigma_r2_w", c.sigma_r2},
          {"sigma_b2_w", c.sigma_b2}, {"sigma_u2_w", c.sigma_u2},
          {"gamma_db", g}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  const Mode mode = mode_from_string(j.value("mode", std::string("sensing")));
  Scenario s = default_scenario(mode);
  if (j.contains("preset")) {
    const std::string p = j.at("preset").get<std::string>();
    if (p == "desk") {
      s = desk_scenario(mode);
    } else if (p != "default") {
      throw std::invalid_argument("unknown scenario preset '" + p + "'");
    }
  }
  if (j.contains("system")) s.config = config_from_json(j.at("system"), s.config);
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    if (g.contains("bs")) s.geometry.bs = read_point(g.at("bs"));
    if (g.contains("irs")) s.geometry.irs = read_point(g.at("irs"));
    if (g.contains("target")) s.geometry.target = read_point(g.at("target"));
    if (g.contains("users")) {
      s.geometry.users.clear();
      for (const auto& u : g.at("users")) s.geometry.users.push_back(read_point(u));
    }
  }
  if (j.contains("channel")) {
    const auto& m = j.at("channel");
    s.model.pathloss_ref_db = m.value("pathloss_ref_db", s.model.pathloss_ref_db);
    s.model.alpha_bs_irs = m.value("alpha_bs_irs", s.model.alpha_bs_irs);
    s.model.alpha_irs_user = m.value("alpha_irs_user", s.model.alpha_irs_user);
    s.model.alpha_irs_target = m.value("alpha_irs_target", s.model.alpha_irs_target);
    s.model.rician_k_db = m.value("rician_k_db", s.model.rician_k_db);
    s.model.los_only = m.value("los_only", s.model.los_only);
    if (m.contains("scatter_offsets_deg")) {
      s.model.scatter_offsets_deg = m.at("scatter_offsets_deg").get<std::vector<double>>();
    }
  }
  s.config.validate(s.mode);
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : s.geometry.users) users.push_back(write_point(u));
  return {{"mode", to_string(s.mode)},
          {"system", config_to_json(s.config)},
          {"geometry",
           {{"bs", write_point(s.geometry.bs)},
            {"irs", write_point(s.geometry.irs)},
            {"target", write_point(s.geometry.target)},
            {"users", users}}},
          {"channel",
           {{"pathloss_ref_db", s.model.pathloss_ref_db},
            {"alpha_bs_irs", s.model.alpha_bs_irs},
            {"alpha_irs_user", s.model.alpha_irs_user},
            {"alpha_irs_target", s.model.alpha_irs_target},
            {"rician_k_db", s.model.rician_k_db},
            {"los_only", s.model.los_only},
            {"scatter_offsets_deg", s.model.scatter_offsets_deg}}}};
}

}  // namespace irisac
