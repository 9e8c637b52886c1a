// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails. Optional arguments select criteria by number.

#include "irisac/harness.hpp"
#include "irisac/power_model.hpp"
#include "irisac/scaling_law.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

namespace irisac {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates failures with the first few messages.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) msgs_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << " [" << checks_ - failures_ << "/" << checks_ << " checks]";
    if (failures_) os << " first failures: " << msgs_.str();
    return {failures_ == 0, os.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::ostringstream msgs_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double transmit_objective(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& p) {
  const ComplexMatrix c = ch.G * rx * ch.G.adjoint();
  return (c.inverse() * p.cwiseAbs2().cwiseInverse().cast<cplx>().asDiagonal()).trace().real();
}

ReflectDesign random_reflect(int n, double a, Rng& rng) {
  ReflectDesign rf = ReflectDesign::uniform(n, a, unit_phases(complex_gaussian_vector(n, rng)));
  std::uniform_real_distribution<double> u(0.3, 1.0);
  for (int i = 0; i < n; ++i) rf.p(i) = a * u(rng);
  return rf;
}

Outcome crb_identity() {
  Checker c;
  double worst = 0.0;
  int count = 0;
  for (int m : {2, 3, 4}) {
    for (int t : {4, 8}) {
      const int reps = (m == 4 && t == 8) ? 5 : 3;
      for (int r = 0; r < reps; ++r, ++count) {
        Scenario s = testing::desk(Mode::sensing, m, m);
        s.config.T = t;
        const auto seed = static_cast<std::uint64_t>(1000 + 100 * m + 10 * t + r);
        const ChannelSet ch = testing::channels(s, seed);
        Rng rng(seed);
        const ReflectDesign rf = random_reflect(m, s.config.a_max, rng);
        const ComplexMatrix rx = testing::random_pd(m, rng) * s.config.P_t;
        const double oracle = testing::trace_of_inverse(testing::fim_oracle(ch, dft_waveform(rx, t), rf, s.config));
        const auto cf = crb_closed_form(ch, rx, rf, s.config);
        const double d = cf ? testing::rel_diff(*cf, oracle) : 1.0;
        worst = std::max(worst, d);
        c.expect(d <= 1e-8, "M=" + std::to_string(m) + " T=" + std::to_string(t) + " rel " + fmt(d));
      }
    }
  }
  return c.outcome(std::to_string(count) + " instances, max rel diff " + fmt(worst));
}

Outcome water_filling() {
  Checker c;
  double worst_obj = 0.0, worst_level = 0.0, worst_sum = 0.0;
  int found = 0;
  int skipped = 0;
  for (std::uint64_t seed = 1; found < 20 && seed <= 200; ++seed) {
    const Scenario s = testing::desk(Mode::sensing);
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng(seed);
    const ReflectDesign rf = random_reflect(4, s.config.a_max, rng);
    if (!check_lemma1(ch, rf, s.config).holds()) {
      ++skipped;
      continue;
    }
    ++found;
    const ComplexMatrix cf = solve_p3_closed_form(ch, rf, s.config);
    const ComplexMatrix num = solve_p3_numeric(ch, rf, s.config);
    const double d = testing::rel_diff(transmit_objective(ch, cf, rf.p), transmit_objective(ch, num, rf.p));
    worst_obj = std::max(worst_obj, d);
    c.expect(d <= 1e-5, "seed " + std::to_string(seed) + " objective rel " + fmt(d));
    Eigen::JacobiSVD<ComplexMatrix> svd(rf.P() * ch.G, Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double level = s.config.P_t / sv.cwiseInverse().sum();
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      const ComplexVector v = svd.matrixV().col(i);
      const double r = (v.adjoint() * cf * v)(0, 0).real();
      sum += r;
      worst_level = std::max(worst_level, std::abs(sv(i) * r - level) / level);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - s.config.P_t) / s.config.P_t);
  }
  c.expect(found == 20, "only " + std::to_string(found) + " instances satisfy the lemma");
  c.expect(worst_level <= 1e-10, "sigma_i r_i spread " + fmt(worst_level));
  c.expect(worst_sum <= 1e-10, "sum r_i error " + fmt(worst_sum));
  return c.outcome(std::to_string(found) + " instances (" + std::to_string(skipped) + " draws skipped), objective " +
                   fmt(worst_obj) + ", level " + fmt(worst_level) + ", sum " + fmt(worst_sum));
}

Outcome ao_monotonicity() {
  Checker c;
  int sensing_runs = 0, isac_runs = 0, isac_infeasible = 0;
  double worst_rise = 0.0, worst_violation = 0.0;
  int moved = 0;
  std::size_t iterates = 0;
  auto check_trace = [&](const std::vector<double>& tr, const std::string& tag) {
    iterates += tr.size();
    moved += tr.size() > 1 && tr.back() < tr.front() * (1.0 - 1e-6) ? 1 : 0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double rise = (tr[i] - tr[i - 1]) / tr[i - 1];
      worst_rise = std::max(worst_rise, rise);
      c.expect(rise <= 1e-9, tag + " rise " + fmt(rise));
    }
  };
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Scenario s = testing::desk(Mode::sensing);
    s.config.P_s = 1e-4;
    const ChannelSet ch = testing::channels(s, seed);
    check_trace(ao_sensing(ch, s.config, seed).crb_trace, "sensing seed " + std::to_string(seed));
    ++sensing_runs;
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Scenario s = testing::desk(Mode::isac);
    s.config.P_s = 1e-4;
    const ChannelSet ch = testing::channels(s, seed);
    const std::string tag = "isac seed " + std::to_string(seed);
    try {
      const IsacAoReport rep = ao_isac(ch, s.config, seed);
      ++isac_runs;
      check_trace(rep.crb_trace, tag);
      for (std::size_t i = 0; i < rep.crb_trace.size(); ++i) {
        const double sinr_gap = 1.0 - db_to_linear(rep.min_sinr_db_trace[i]) / s.config.gamma[0];
        const double power_gap = rep.irs_power_trace[i] / s.config.P_s - 1.0;
        worst_violation = std::max({worst_violation, sinr_gap, power_gap});
        c.expect(sinr_gap <= 1e-6 && power_gap <= 1e-6, tag + " iterate " + std::to_string(i) + " infeasible");
      }
      const MetricsReport m = check_feasibility(ch, rep.tx, rep.rf, s.config);
      c.expect(m.feasible(), tag + " final design infeasible");
    } catch (const InfeasibleError&) {
      ++isac_infeasible;
    }
  }
  c.expect(isac_runs > 0, "no feasible ISAC instance");
  return c.outcome(std::to_string(sensing_runs) + " sensing + " + std::to_string(isac_runs) + " ISAC traces (" +
                   std::to_string(isac_infeasible) + " ISAC instances infeasible), " + std::to_string(iterates) +
                   " iterates, " + std::to_string(moved) + " traces improved, worst rise " + fmt(worst_rise) +
                   ", worst violation " + fmt(worst_violation));
}

Outcome sdr_reduction() {
  Checker c;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = testing::desk(Mode::sensing);
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng(seed);
    const ReflectDesign rf = random_reflect(4, s.config.a_max, rng);
    const ComplexMatrix rx = solve_p3_closed_form(ch, rf, s.config);
    const ComplexMatrix pm = rf.P();
    const ComplexMatrix b = pm * ch.E.adjoint() * pm * pm * ch.E * pm;
    const ComplexMatrix cm = ch.G * rx * ch.G.adjoint();
    const double lifted = solve_phase_sdr_lifted(b, cm).value;
    const ComplexMatrix mred = phase_power_matrix(ch, rx, rf.p);
    const double md = (mred - kron_trace_reduce(b, cm)).norm() / mred.norm();
    c.expect(md <= 1e-12, "seed " + std::to_string(seed) + " reduced matrix mismatch " + fmt(md));
    const double reduced = solve_phase_sdr(mred).value;
    const double d = testing::rel_diff(lifted, reduced);
    worst = std::max(worst, d);
    c.expect(d <= 1e-6, "seed " + std::to_string(seed) + " rel " + fmt(d));
  }
  return c.outcome("10 instances at N=4, max rel diff " + fmt(worst));
}

Outcome gradient_checks() {
  Checker c;
  double w1 = 0.0, w2 = 0.0, wd2 = 0.0, wd3 = 0.0;
  auto rel = [](const RealVector& a, const RealVector& b) { return (a - b).norm() / a.norm(); };
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = testing::desk(Mode::sensing);
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng(seed);
    const ReflectDesign rf = random_reflect(4, s.config.a_max, rng);
    const ComplexMatrix rx = testing::random_pd(4, rng) * s.config.P_t;
    const RealVector q = rf.p.cwiseAbs2();
    const auto f = crb_factors(ch, rx, rf.p, s.config);
    auto j = [&](const RealVector& x) { return testing::frozen_crb_product(f->t1, f->t2, x); };
    const double e1 = rel(crb_product_gradient(f->t1, f->t2, q), testing::fd_gradient(j, q));
    w1 = std::max(w1, e1);
    c.expect(e1 <= 1e-5, "d1 seed " + std::to_string(seed) + " " + fmt(e1));

    const IrsPowerModel pm(ch, rx, rf.phi, s.config.sigma_r2);
    auto echo = [&](const RealVector& x) { return irs_power_terms(ch, rx, {x.cwiseSqrt(), rf.phi}, 0.0).echo; };
    auto quad = [&](const RealVector& x) { return irs_power_terms(ch, rx, {x.cwiseSqrt(), rf.phi}, 1.0).echo_noise; };
    const double e2 = rel(pm.d2(q), testing::fd_gradient(echo, q));
    const double e3 = rel(pm.d3(q), testing::fd_gradient(quad, q));
    wd2 = std::max(wd2, e2);
    wd3 = std::max(wd3, e3);
    c.expect(e2 <= 1e-5, "D2 seed " + std::to_string(seed) + " " + fmt(e2));
    c.expect(e3 <= 1e-5, "D3 seed " + std::to_string(seed) + " " + fmt(e3));
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = testing::desk(Mode::isac);
    s.config.P_s = 1e-4;
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng(seed);
    const ReflectDesign rf = initial_reflect(ch, s.config, rng);
    try {
      const TransmitDesign tx = solve_p5(ch, rf, s.config);
      // Lifted variable: the objective depends on P_bar through its diagonal q.
      RealVector q = rf.p.cwiseAbs2();
      std::uniform_real_distribution<double> u(0.3, 1.0);
      for (Eigen::Index i = 0; i < q.size(); ++i) q(i) *= u(rng);
      const auto f = crb_factors(ch, tx.Rx(), rf.p, s.config);
      auto j = [&](const RealVector& x) { return testing::frozen_crb_product(f->t1, f->t2, x); };
      const double e = rel(crb_product_gradient(f->t1, f->t2, q), testing::fd_gradient(j, q));
      w2 = std::max(w2, e);
      c.expect(e <= 1e-5, "d2 seed " + std::to_string(seed) + " " + fmt(e));
    } catch (const InfeasibleError&) {
      c.expect(false, "d2 seed " + std::to_string(seed) + " has no feasible transmit design");
    }
  }
  return c.outcome("max rel error d1 " + fmt(w1) + ", d2 " + fmt(w2) + ", D2 " + fmt(wd2) + ", D3 " + fmt(wd3));
}

Outcome scaling_laws() {
  Checker c;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  double worst_ratio = 0.0;
  int isac_feasible = 0;
  for (int mode = 0; mode < 2; ++mode) {
    for (int i = 0; i < 50; ++i) {
      ScalingBetas b;
      b.b1 = 0.3 * u(rng);
      b.b2 = 0.3 * u(rng);
      b.b3 = u(rng);
      b.b4 = 0.5 * u(rng);
      b.b5 = u(rng);
      b.b6 = u(rng);
      SystemConfig cfg;
      cfg.P_s = 0.2 + u(rng);
      cfg.sigma_u2 = 0.05;
      const bool isac = mode == 1;
      if (isac) {
        for (int k = 0; k < 2; ++k) {
          b.b7.push_back(-u(rng));
          b.b8.push_back(0.2 * u(rng));
        }
      }
      const double res = 1e-3 * std::min(b.b5, b.b6);
      const double bound = 3.0 * res * (b.b5 * b.b6 + b.b5 * b.b6 * b.b6);
      const ScalingResult r = isac ? scaling_isac(b, cfg, ScalingGiven::joint())
                                   : scaling_sensing(b, cfg, ScalingGiven::joint());
      const ScalingResult g = grid_oracle(b, cfg, isac ? Mode::isac : Mode::sensing, res);
      const std::string tag = std::string(isac ? "isac" : "sensing") + " set " + std::to_string(i);
      if (isac && !g.feasible) {
        c.expect(!r.feasible, tag + " closed form feasible where the grid is empty");
        continue;
      }
      isac_feasible += isac ? 1 : 0;
      const double diff = std::abs(r.objective() - g.objective());
      worst_ratio = std::max(worst_ratio, diff / bound);
      c.expect(r.feasible && diff <= bound, tag + " diff " + fmt(diff) + " > " + fmt(bound));
      c.expect(scaled_irs_power(b, r.delta_r, r.delta_p) <= cfg.P_s * (1.0 + 1e-8), tag + " power violated");
    }
  }
  // Physical betas with small IRS noise: maximum amplification.
  int at_cap = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Scenario s = testing::desk(Mode::sensing);
    s.config.sigma_r2 = 1e-14;
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng2(seed);
    const ReflectDesign rf = ReflectDesign::uniform(4, 1.0, unit_phases(complex_gaussian_vector(4, rng2)));
    const TransmitDesign tx = TransmitDesign::sensing_only(solve_p3_closed_form(ch, rf, s.config));
    const ScalingBetas b = compute_betas(ch, tx, rf, s.config, Mode::sensing);
    const ScalingResult r = scaling_sensing(b, s.config, ScalingGiven::joint());
    const bool ok = std::abs(r.delta_p - b.b6) <= 1e-9 * b.b6;
    at_cap += ok ? 1 : 0;
    c.expect(ok, "seed " + std::to_string(seed) + " delta_p " + fmt(r.delta_p) + " < b6 " + fmt(b.b6));
  }
  return c.outcome("100 synthetic sets (" + std::to_string(isac_feasible) + " feasible ISAC), worst diff/bound " +
                   fmt(worst_ratio) + "; delta_p = b6 on " + std::to_string(at_cap) + "/50 channel draws");
}

// Median CRB per (scheme, param label, value).
using Medians = std::map<std::tuple<std::string, std::string, double>, double>;

using FailureCounts = std::map<std::string, int>;

void count_failures(const std::vector<ResultRow>& rows, const std::string& fig, FailureCounts* failures) {
  for (const auto& r : rows) {
    if (!r.ok()) ++(*failures)[fig + " " + r.scheme + " " + r.status];
  }
}

Medians medians_of(const std::vector<ResultRow>& rows, const std::string& fig, FailureCounts* failures) {
  count_failures(rows, fig, failures);
  Medians m;
  for (const auto& a : summarize(rows)) m[{a.scheme, a.param, a.value}] = a.crb;
  return m;
}

double lookup(const Medians& m, const std::string& scheme, const std::string& param, double v) {
  const auto it = m.find({scheme, param, v});
  return it == m.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

SweepSpec desk_preset(const std::string& name) {
  SweepSpec s = sweep_preset(name);
  const SystemConfig full = s.scenario.config;
  s.scenario = desk_scenario(s.mode);
  s.scenario.config.P_t = full.P_t;
  s.scenario.config.P_s = full.P_s;
  s.scenario.config.a_max = full.a_max;
  s.n_seeds = 50;
  return s;
}

// Medians of SDP-derived CRBs are compared at the accuracy the solver certifies.
constexpr double kMedianTol = 1e-7;

Outcome figure_trends() {
  Checker c;
  std::ostringstream info;
  FailureCounts failures;

  {  // Fig. 2
    const SweepSpec s = desk_preset("fig2");
    const auto rows = run_sweep(s);
    std::map<std::pair<std::string, std::uint64_t>, double> last;
    int per_seed_violations = 0;
    for (const auto& r : rows) {
      const auto key = std::make_pair(r.param, r.seed);
      if (!r.ok()) continue;
      if (auto it = last.find(key); it != last.end() && !(r.crb < it->second)) ++per_seed_violations;
      last[key] = r.crb;
    }
    c.expect(per_seed_violations == 0, "fig2: " + std::to_string(per_seed_violations) + " non-decreasing steps in a");
    const Medians m = medians_of(rows, "fig2", &failures);
    bool strict_somewhere = false;
    for (double a : s.values) {
      double prev = std::numeric_limits<double>::infinity();
      for (double ps : s.series->values) {
        const double v = lookup(m, "tx-only", "fixed-a|P_s=" + format_double(ps), a);
        c.expect(v <= prev * (1.0 + kMedianTol), "fig2: median rises with P_s at a=" + fmt(a));
        strict_somewhere = strict_somewhere || v < prev * (1.0 - 1e-6);
        prev = v;
      }
    }
    c.expect(strict_somewhere, "fig2: median CRB flat in P_s");
    info << "fig2 ok-rows " << rows.size() << "; ";
  }

  auto dominance = [&](const std::string& name, const std::vector<std::string>& worse) {
    const SweepSpec s = desk_preset(name);
    const auto rows = run_sweep(s);
    const Medians m = medians_of(rows, name, &failures);
    double worst_gap = 0.0;
    for (double amax : s.series->values) {
      const std::string label = "P_t|a_max=" + format_double(amax);
      for (double pt : s.values) {
        const double ao = lookup(m, "ao", label, pt);
        const double tx = lookup(m, "tx-only", label, pt);
        for (const auto& w : worse) {
          c.expect(ao < lookup(m, w, label, pt), name + ": ao not below " + w + " at P_t=" + fmt(pt));
        }
        c.expect(ao <= tx * (1.0 + kMedianTol) && tx <= 1.05 * ao, name + ": tx-only/ao = " + fmt(tx / ao) + " at P_t=" + fmt(pt));
        worst_gap = std::max(worst_gap, tx / ao - 1.0);
      }
    }
    for (double pt : s.values) {
      const double lo = lookup(m, "ao", "P_t|a_max=" + format_double(s.series->values.front()), pt);
      const double hi = lookup(m, "ao", "P_t|a_max=" + format_double(s.series->values.back()), pt);
      c.expect(hi < lo, name + ": larger a_max not better at P_t=" + fmt(pt));
    }
    info << name << " max tx-only gap " << fmt(worst_gap) << "; ";
  };
  dominance("fig3", {"passive", "rf-only"});
  dominance("fig5", {"passive"});

  auto saturation = [&](const std::string& name) {
    const SweepSpec s = desk_preset(name);
    const auto rows = run_sweep(s);
    const Medians m = medians_of(rows, name, &failures);
    double worst_top = 0.0;
    for (SchemeId id : s.schemes) {
      const std::string sc = to_string(id);
      double prev = std::numeric_limits<double>::infinity();
      for (double ps : s.values) {
        const double v = lookup(m, sc, "P_s", ps);
        c.expect(v <= prev * (1.0 + kMedianTol), name + ": " + sc + " median rises at P_s=" + fmt(ps));
        prev = v;
      }
      const double top = s.values.back();
      const double v_top = lookup(m, sc, "P_s", top), v_dec = lookup(m, sc, "P_s", top / 10.0);
      const double change = std::abs(v_dec - v_top) / v_dec;
      worst_top = std::max(worst_top, change);
      c.expect(change < 0.05, name + ": " + sc + " changes " + fmt(change) + " over the top decade");
    }
    info << name << " top-decade change " << fmt(worst_top) << "; ";
  };
  saturation("fig4");
  saturation("fig6");

  {  // Fig. 7
    const SweepSpec s = desk_preset("fig7");
    const auto rows = run_sweep(s);
    const Medians m = medians_of(rows, "fig7", &failures);
    const double zf = lookup(m, "zf", "Gamma", 10.0);
    for (const char* other : {"ao", "tx-only"}) {
      c.expect(zf >= lookup(m, other, "Gamma", 10.0), std::string("fig7: zf better than ") + other);
    }
    for (double g : {0.0, 25.0}) {
      const double ao = lookup(m, "ao", "Gamma", g), tx = lookup(m, "tx-only", "Gamma", g);
      c.expect(std::abs(tx - ao) / ao < 0.05, "fig7: ao/tx-only gap " + fmt(std::abs(tx - ao) / ao) + " at " + fmt(g) + " dB");
    }
    info << "fig7 zf/ao at 10 dB " << fmt(zf / lookup(m, "ao", "Gamma", 10.0)) << ", passive/zf "
         << fmt(lookup(m, "passive", "Gamma", 10.0) / zf) << "; ";
  }
  int total = 0;
  std::ostringstream by_kind;
  for (const auto& [kind, n] : failures) {
    by_kind << (total ? ", " : " (") << kind << " " << n;
    total += n;
  }
  info << total << " failed runs" << (total ? by_kind.str() + ")" : "");
  return c.outcome(info.str());
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace irisac

int main(int argc, char** argv) {
  using namespace irisac;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "CRB identity", 5.0, crb_identity},
      {2, "water-filling optimality", 30.0, water_filling},
      {3, "AO monotonicity", 600.0, ao_monotonicity},
      {4, "SDR reduction", 120.0, sdr_reduction},
      {5, "gradient checks", 60.0, gradient_checks},
      {6, "scaling laws", 120.0, scaling_laws},
      {7, "figure trends", 3600.0, figure_trends},
  };

  bool all = true;
  conic::SolveRecorder recorder;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("CRITERION %d %s: %s (%.1f s, budget %.0f s%s) %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.budget_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }

  if (selected.empty() || selected.count(8)) {
    int optimal = 0, bad_gap = 0, bad_eig = 0, other = 0;
    double worst_gap = 0.0, worst_eig = 0.0;
    std::map<std::string, int> other_kinds;
    for (const auto& r : recorder.records()) {
      if (r.status != conic::SolveStatus::optimal) {
        ++other;
        ++other_kinds[conic::to_string(r.status) + (r.near_optimal ? " near-optimal" : "")];
        continue;
      }
      ++optimal;
      const double gap = std::abs(r.primal_objective - r.dual_objective) / (1.0 + std::abs(r.primal_objective));
      worst_gap = std::max(worst_gap, gap);
      worst_eig = std::min({worst_eig, r.min_eigenvalue_s, r.min_eigenvalue_z});
      bad_gap += gap > 1e-7 ? 1 : 0;
      bad_eig += std::min(r.min_eigenvalue_s, r.min_eigenvalue_z) < -1e-8 ? 1 : 0;
    }
    const bool pass = optimal > 0 && bad_gap == 0 && bad_eig == 0;
    all = all && pass;
    std::string kinds;
    for (const auto& [kind, n] : other_kinds) kinds += (kinds.empty() ? ": " : ", ") + kind + " " + std::to_string(n);
    std::printf("CRITERION 8 solver health: %s %d optimal solves (%d with other status%s), worst relative gap %.3g, "
                "min block eigenvalue %.3g, %d gap and %d eigenvalue violations\n",
                pass ? "PASS" : "FAIL", optimal, other, kinds.c_str(), worst_gap, worst_eig, bad_gap, bad_eig);
  }
  std::printf("ACCEPTANCE: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
