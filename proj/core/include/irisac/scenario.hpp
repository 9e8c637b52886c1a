#pragma once

#include "irisac/numerics.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace irisac {

enum class Mode { sensing, isac };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Powers and noise variances in watts; SINR targets linear.
struct SystemConfig {
  int M = 8;
  int N = 8;
  int K = 2;
  int T = 100;
  double P_t = 20.0;
  double P_s = 0.01;
  double a_max = 10.0;
  double sigma_r2 = 1e-14;
  double sigma_b2 = 1e-14;
  double sigma_u2 = 1e-14;
  std::vector<double> gamma{10.0, 10.0};

  // Throws std::invalid_argument on violation. ISAC needs K >= 1.
  void validate(Mode mode) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);
// Sine of the angle between the array broadside (y axis) and the ray a -> b.
double broadside_sine(const Point2& from, const Point2& to);

struct Geometry {
  Point2 bs{0.0, 0.0};
  Point2 irs{0.0, 25.0};
  std::vector<Point2> users{{-20.0, 10.0}, {20.0, 10.0}};
  Point2 target{-15.0, 10.0};
};

struct ChannelModel {
  double pathloss_ref_db = -30.0;
  double alpha_bs_irs = 2.2;
  double alpha_irs_user = 2.8;
  double alpha_irs_target = 2.2;
  double rician_k_db = 5.0;
  bool los_only = false;  // infinite K-factor
  std::vector<double> scatter_offsets_deg{-10.0, 0.0, 10.0};
};

struct Scatterer {
  double angle_rad = 0.0;
  cplx gain{1.0, 0.0};
};

struct ChannelSet {
  ComplexMatrix G;                 // N x M, BS -> IRS
  std::vector<ComplexVector> h;    // K vectors of length N, IRS -> user (received as h^H)
  ComplexMatrix E;                 // N x N, IRS -> target -> IRS
};

struct Scenario {
  SystemConfig config;
  Geometry geometry;
  ChannelModel model;
  Mode mode = Mode::sensing;
};

// b(theta)_i = exp(j pi i sin(theta)), i = 0..n-1
ComplexVector steering_vector(int n, double theta_rad);
ComplexVector steering_vector_from_sine(int n, double sine);

// 10^((ref_db - 10 alpha log10 d) / 10)
double pathloss(double d, double ref_db, double alpha);

// sqrt(pl) * (sqrt(k/(1+k)) los + sqrt(1/(1+k)) CN(0, I)); k = +inf drops the random part.
ComplexMatrix rician_channel(const ComplexMatrix& los, double pl, double k_linear, Rng& rng);

ComplexMatrix generate_target_response(int n, const std::vector<Scatterer>& scatterers);

std::vector<Scatterer> default_scatterers(const Geometry& geometry, const ChannelModel& model, Rng& rng);

// Deterministic in (config, geometry, model, seed). Retries rank-deficient
// draws of G up to 10 times before throwing NumericalError.
ChannelSet generate_channels(const SystemConfig& config, const Geometry& geometry, const ChannelModel& model,
                             std::uint64_t seed);

// Paper-scale defaults and the small desk preset used for CI.
Scenario default_scenario(Mode mode);
Scenario desk_scenario(Mode mode);

SystemConfig config_from_json(const nlohmann::json& j, const SystemConfig& base = {});
nlohmann::json config_to_json(const SystemConfig& c);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace irisac
