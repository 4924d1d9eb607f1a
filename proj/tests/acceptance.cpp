// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gates for the workbench. Each criterion prints one pass/fail
// line; the exit code is the number of failed criteria.
//
//  1  parameter-count identity at the reference size and on a random grid
//  2  gradient suite against central finite differences
//  3  analytic channel oracle (static multipath sum, Doppler closed form)
//  4  AR / SH closed-form oracles on a rotating single-path channel
//  5  structural identities (shift equivariance, adjuster identity, loss
//     scale invariance)
//  6  desk-scale NMSE ordering: adjusted predictor vs baselines
//  7  preprocessor / adjuster ablation ordering
//  8  monotonic degradation in speed and horizon
//  9  beam-quality ordering incl. the direct beam predictor
// 10  unit-root suite: canonical series, Monte Carlo p-map validation,
//     speed ordering of stationarity p-values
// 11  byte-identical reruns of generate / train / evaluate via the CLI

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "chanforecast/analysis.hpp"
#include "chanforecast/experiment.hpp"
#include "chanforecast/training.hpp"
#include "support/oracles.hpp"

using namespace chanforecast;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
  std::printf("criterion %2d [%s] %s  (%s)\n", id, pass ? "PASS" : "FAIL",
              label.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

double max_rel_err(const RVec& a, const RVec& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    // the floor keeps central-difference roundoff on near-zero entries
    // (noise ~ 1e-10 absolute) from dominating the ratio
    const double denom = std::max({std::abs(a(i)), std::abs(b(i)), 1e-5});
    worst = std::max(worst, std::abs(a(i) - b(i)) / denom);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// 1: parameter-count identity
// ---------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;

  pred::LpcnetConfig ref;  // K=15, N_z=256, N_w=N_s=64
  pred::NnPredictor model(pred::ModelKind::LPCNET, 32, ref);
  const std::size_t counted = model.params().total_count();
  const std::size_t formula = pred::param_count_closed_form(32, 256, 14, 64, 64);
  if (counted != 363777u || formula != 363777u) pass = false;

  Rng rng(91);
  for (int i = 0; i < 20 && pass; ++i) {
    pred::LpcnetConfig cfg;
    cfg.k = 2 + static_cast<int>(rng.below(30));
    cfg.n_z = 1 + static_cast<int>(rng.below(300));
    cfg.n_w = 1 + static_cast<int>(rng.below(128));
    cfg.n_s = 1 + static_cast<int>(rng.below(128));
    const int n_b = 1 + static_cast<int>(rng.below(64));
    pred::NnPredictor m(pred::ModelKind::LPCNET, n_b, cfg);
    if (m.params().total_count() !=
        pred::param_count_closed_form(n_b, cfg.n_z, cfg.k - 1, cfg.n_w, cfg.n_s))
      pass = false;
  }

  const double dt = seconds_since(t0);
  if (dt >= 1.0) pass = false;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "363777 == %zu == %zu, 20-point grid, %.3f s",
                counted, formula, dt);
  report(1, pass, "parameter-count identity", buf);
}

// ---------------------------------------------------------------------------
// 2: gradient suite
// ---------------------------------------------------------------------------

chan::Dataset tiny_dataset(std::uint64_t seed) {
  chan::ScenarioConfig cfg;
  cfg.name = "custom";
  cfg.n_paths = 3;
  cfg.n_col = 1;
  cfg.n_row = 1;
  cfg.snapshots = 12;
  return chan::build_dataset(cfg, 2, 5, {1}, 0.5, Rng(seed));
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    // standalone LSTM cell: loss |z_S|^2
    {
      nn::ParamStore store;
      nn::add_lstm_params(store, "lstm", 3, 5);
      Rng rng(seed);
      nn::init_params(store, rng);
      std::vector<RMat> xs;
      for (int t = 0; t < 4; ++t) {
        RMat x(3, 2);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 2; ++j) x(i, j) = rng.normal();
        xs.push_back(x);
      }
      store.zero_grads();
      nn::LstmCache cache;
      const RMat z = nn::lstm_forward(std::span<const RMat>(xs.data(), xs.size()),
                                      store, "lstm", &cache);
      nn::lstm_backward(cache, 2.0 * z, store, "lstm");
      const RVec analytic = store.grads_to_flat();
      const RVec p0 = store.to_flat();
      auto f = [&](const RVec& p) {
        nn::ParamStore tmp;
        nn::add_lstm_params(tmp, "lstm", 3, 5);
        tmp.from_flat(p);
        return nn::lstm_forward(std::span<const RMat>(xs.data(), xs.size()), tmp,
                                "lstm", nullptr)
            .squaredNorm();
      };
      worst = std::max(worst, max_rel_err(analytic, finite_diff_grad_scaled(f, p0)));
    }

    // full models: normalized-error loss and negative-cosine loss drive the
    // encoder, both adjuster MLPs and the dynamic readout
    for (pred::ModelKind kind : {pred::ModelKind::LPCNET, pred::ModelKind::JLPCNET}) {
      const chan::Dataset ds = tiny_dataset(seed);
      pred::LpcnetConfig cfg;
      cfg.k = 5;
      cfg.n_z = 6;
      cfg.n_w = 4;
      cfg.n_s = 3;
      pred::NnPredictor model(kind, 2, cfg);
      Rng init(seed * 13 + 5);
      model.init(init);
      const auto& refs = ds.windows(1, true);
      const std::span<const chan::WindowRef> batch(refs.data(), 3);
      model.params().zero_grads();
      model.loss_batch(ds, batch, true);
      const RVec analytic = model.params().grads_to_flat();
      const RVec p0 = model.params().to_flat();
      auto f = [&](const RVec& p) {
        model.params().from_flat(p);
        return model.loss_batch(ds, batch, false);
      };
      const RVec numeric = finite_diff_grad_scaled(f, p0);
      model.params().from_flat(p0);
      worst = std::max(worst, max_rel_err(analytic, numeric));
    }
  }

  const double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max rel err %.3g over 5 seeds, %.1f s", worst, dt);
  report(2, worst < 1e-4 && dt < 60.0, "gradient suite vs finite differences", buf);
}

// ---------------------------------------------------------------------------
// 3: analytic channel oracle
// ---------------------------------------------------------------------------

void criterion_3() {
  chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
  cfg.mode = chan::SnapshotMode::Static;
  Rng rng(314);
  const Eigen::Vector3d ue{90.0, -20.0, 1.5};
  const chan::PathSet set = chan::sample_paths(cfg, rng, ue);
  const Eigen::Vector3d vel{10.0, 8.0, 0.0};

  double worst = 0.0;
  for (int t : {0, 1, 9, 100, 699}) {
    const CVec h = chan::snapshot(cfg, set, ue, vel, t, chan::SnapshotMode::Static);
    const Eigen::VectorXcd ref = oracles::static_channel_oracle(cfg, set, vel, t);
    worst = std::max(worst, (h - ref).cwiseAbs().maxCoeff());
  }

  // single path, motion parallel to the arrival direction
  chan::ScenarioConfig sp;
  sp.name = "custom";
  sp.n_paths = 1;
  sp.n_col = 1;
  sp.n_row = 1;
  chan::Path p;
  p.gain[0] = p.gain[1] = cxd(1.0, 0.0);
  p.r_rx = Eigen::Vector3d::UnitX();
  p.r_tx = Eigen::Vector3d::UnitX();
  chan::PathSet single;
  single.paths.push_back(p);
  const double v = 60.0 / 3.6;
  const CVec h0 = chan::snapshot(sp, single, ue, v * Eigen::Vector3d::UnitX(), 6,
                                 chan::SnapshotMode::Static);
  const CVec h1 = chan::snapshot(sp, single, ue, v * Eigen::Vector3d::UnitX(), 7,
                                 chan::SnapshotMode::Static);
  double expected = 2.0 * std::numbers::pi * v * sp.srs_period_s / sp.wavelength();
  while (expected > std::numbers::pi) expected -= 2.0 * std::numbers::pi;
  const double doppler_err = std::abs(std::arg(h1(0) / h0(0)) - expected);

  char buf[128];
  std::snprintf(buf, sizeof(buf), "oracle gap %.2e (tol 1e-12), Doppler gap %.2e rad",
                worst, doppler_err);
  report(3, worst < 1e-12 && doppler_err < 1e-9, "analytic channel oracle", buf);
}

// ---------------------------------------------------------------------------
// 4: AR / SH closed-form oracles
// ---------------------------------------------------------------------------

void criterion_4() {
  // noise-free static single-path channel rotating omega per SRS step
  chan::ScenarioConfig cfg;
  cfg.name = "custom";
  cfg.n_paths = 1;
  cfg.n_col = 1;
  cfg.n_row = 2;
  const double v = 45.0 / 3.6;
  const double omega =
      2.0 * std::numbers::pi * v * cfg.srs_period_s / cfg.wavelength();

  const int t_total = 64;
  chan::Trajectory traj;
  traj.cfg = cfg;
  traj.snapshots = CMat(t_total, cfg.n_antennas());
  chan::Path p;
  p.gain[0] = p.gain[1] = cxd(1.0, 0.0);
  p.r_rx = Eigen::Vector3d::UnitX();
  p.r_tx = Eigen::Vector3d::UnitY();
  chan::PathSet set;
  set.paths.push_back(p);
  for (int t = 0; t < t_total; ++t)
    traj.snapshots.row(t) = chan::snapshot(cfg, set, {50, 0, 1.5},
                                           v * Eigen::Vector3d::UnitX(), t,
                                           chan::SnapshotMode::Static)
                                 .transpose();

  const int k = 15;
  double sh_err = 0.0;
  double ar_db = -1e9;
  const double expected = 2.0 - 2.0 * std::cos(omega);
  for (int start = 0; start + k + 1 <= t_total; start += 7) {
    chan::Window w;
    w.traj = &traj;
    w.start = start;
    w.k = k;
    w.delta = 1;
    const CVec truth = w.target();
    sh_err = std::max(sh_err,
                      std::abs(analysis::nmse(pred::sh_predict(w), truth) - expected));
    const double ar_nmse = analysis::nmse(pred::ar_predict(w, 5).value, truth);
    ar_db = std::max(ar_db, analysis::nmse_db(std::max(ar_nmse, 1e-300)));
  }

  char buf[128];
  std::snprintf(buf, sizeof(buf), "SH gap %.2e (tol 1e-9), AR %.1f dB (< -80)", sh_err,
                ar_db);
  report(4, sh_err < 1e-9 && ar_db < -80.0, "AR / SH closed-form oracles", buf);
}

// ---------------------------------------------------------------------------
// 5: structural identities
// ---------------------------------------------------------------------------

chan::Trajectory traj_from(const CMat& snaps) {
  chan::Trajectory t;
  t.cfg.name = "custom";
  t.cfg.n_paths = 1;
  t.cfg.n_col = 1;
  t.cfg.n_row = static_cast<int>(snaps.cols()) / 2;
  t.snapshots = snaps;
  return t;
}

void criterion_5() {
  Rng rng(55);
  pred::LpcnetConfig cfg;
  cfg.k = 6;
  cfg.n_z = 8;
  cfg.n_w = 5;
  cfg.n_s = 4;
  pred::NnPredictor model(pred::ModelKind::LPCNET, 3, cfg);
  Rng init(56);
  model.init(init);

  // shift equivariance
  CMat snaps(10, 3);
  for (int t = 0; t < 10; ++t)
    for (int b = 0; b < 3; ++b) snaps(t, b) = cxd(rng.normal(), rng.normal());
  CVec shift(3);
  for (int b = 0; b < 3; ++b) shift(b) = cxd(rng.normal(), rng.normal());
  CMat shifted = snaps;
  for (int t = 0; t < 10; ++t) shifted.row(t) += shift.transpose();
  const auto tr_a = traj_from(snaps);
  const auto tr_b = traj_from(shifted);
  chan::Window wa{&tr_a, 2, 6, 1};
  chan::Window wb{&tr_b, 2, 6, 1};
  const double shift_gap =
      (pred::lpcnet_forward(wb, model.params(), cfg) -
       (pred::lpcnet_forward(wa, model.params(), cfg) + shift))
          .cwiseAbs()
          .maxCoeff();

  // adjuster identity element reduces to the static readout bit-for-bit
  pred::NnPredictor forced(pred::ModelKind::LPCNET, 3, cfg);
  Rng init2(57);
  forced.init(init2);
  forced.params().value("adj_w.W2").setZero();
  forced.params().value("adj_b.W2").setZero();
  pred::LpcnetConfig static_cfg = cfg;
  static_cfg.enable_adjuster = false;
  pred::NnPredictor plain(pred::ModelKind::LPCNET, 3, static_cfg);
  for (const char* name : {"lstm.W_x", "lstm.W_h", "lstm.b", "head.W", "head.b"})
    plain.params().value(name) = forced.params().value(name);
  double ident_gap = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    CMat s2(9, 3);
    for (int t = 0; t < 9; ++t)
      for (int b = 0; b < 3; ++b) s2(t, b) = cxd(rng.normal(), rng.normal());
    const auto tr = traj_from(s2);
    chan::Window w{&tr, 1, 6, 1};
    ident_gap = std::max(ident_gap, (pred::lpcnet_forward(w, forced.params(), cfg) -
                                     pred::lpcnet_forward(w, plain.params(), static_cfg))
                                        .cwiseAbs()
                                        .maxCoeff());
  }

  // beam loss invariant under complex rescaling of the prediction
  const int n = 4;
  RMat target(2 * n, 1), preds(2 * n, 1);
  for (int i = 0; i < 2 * n; ++i) {
    target(i, 0) = rng.normal();
    preds(i, 0) = rng.normal();
  }
  const double base = pred::cosine_loss(preds, target, nullptr);
  double scale_gap = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const cxd c = std::polar(0.25 + 3.0 * rng.uniform01(), rng.uniform(0.0, 6.28));
    RMat scaled(2 * n, 1);
    for (int i = 0; i < n; ++i) {
      const cxd val = c * cxd(preds(i, 0), preds(n + i, 0));
      scaled(i, 0) = val.real();
      scaled(n + i, 0) = val.imag();
    }
    scale_gap =
        std::max(scale_gap, std::abs(pred::cosine_loss(scaled, target, nullptr) - base));
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "shift gap %.2e, identity gap %.2e (bit-exact), scale gap %.2e",
                shift_gap, ident_gap, scale_gap);
  report(5, shift_gap < 1e-12 && ident_gap == 0.0 && scale_gap < 1e-12,
         "structural identities", buf);
}

// ---------------------------------------------------------------------------
// 6-9: desk-scale experiment campaign
// ---------------------------------------------------------------------------

struct DeskScores {
  // medians over seeds: nmse_db[method][combo], cosine_pct[method] at 60 km/h
  std::map<std::string, std::map<std::string, double>> nmse_db;
  std::map<std::string, double> cosine60d1;
  bool ready = false;
};

DeskScores g_desk;

// Desk-scale campaign shape: a 2-port array over long drifting trajectories.
// Two test environments per seed keep the medians stable; per-method settings
// were tuned on held-out seeds (11, 101-103), the gate below runs fresh ones.
struct Variant {
  const char* name;
  bool beam;
  bool diff, adjuster, residual;
  double lr;
  int batch;
  int nws;  // adjuster hidden widths
};

constexpr Variant kLpcnet{"lpcnet", false, true, true, true, 2e-2, 25, 16};
constexpr Variant kLstm{"lstm", false, false, false, true, 5e-3, 200, 16};
constexpr Variant kOnlyC{"only_c", false, true, false, true, 1e-3, 200, 16};
constexpr Variant kOnlyJ{"only_j", false, false, true, true, 5e-3, 100, 32};
constexpr Variant kNone{"without_cj", false, false, false, false, 3e-4, 200, 16};
constexpr Variant kJlpcnet{"jlpcnet", true, true, true, true, 1.5e-2, 25, 16};

chan::Dataset desk_dataset(double speed_kmh, std::uint64_t seed) {
  chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
  cfg.n_col = 1;
  cfg.n_row = 1;
  cfg.snapshots = 830;
  cfg.speed_mps = speed_kmh / 3.6;
  return chan::build_dataset(cfg, 8, 15, {1, 2}, 0.75, Rng(seed));
}

double train_and_score(const chan::Dataset& ds, int delta, const Variant& v,
                       std::uint64_t seed, double* cosine_out) {
  pred::LpcnetConfig cfg;
  cfg.k = 15;
  cfg.n_z = 64;
  cfg.n_w = v.nws;
  cfg.n_s = v.nws;
  cfg.horizon = delta;
  cfg.learning_rate = v.lr;
  cfg.batch_size = v.batch;
  cfg.epochs = 50;
  cfg.enable_diff = v.diff;
  cfg.enable_adjuster = v.adjuster;
  cfg.enable_residual = v.residual;
  const auto kind = v.beam ? pred::ModelKind::JLPCNET : pred::ModelKind::LPCNET;
  const int n_b = static_cast<int>(ds.trajectories[0].snapshots.cols());
  pred::NnPredictor model(kind, n_b, cfg);
  Rng root(seed);
  Rng init = root.spawn(0);
  Rng shuffle = root.spawn(1);
  model.init(init);
  pred::train(model, ds, shuffle);
  const auto r = experiment::evaluate_method(ds, delta, false, kind, &model);
  if (cosine_out) *cosine_out = r.cosine_pct;
  return r.nmse_db;
}

void run_desk_campaign() {
  if (g_desk.ready) return;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t> seeds{1, 2, 3};

  std::map<std::string, std::map<std::string, std::vector<double>>> nmse;
  std::map<std::string, std::vector<double>> cos60;

  int run_index = 0;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    const std::uint64_t seed = seeds[si];
    const chan::Dataset ds60 = desk_dataset(60.0, seed);
    const chan::Dataset ds30 = desk_dataset(30.0, seed * 7919 + 4242);

    // classical baselines run on the fly on every combo
    for (const auto& [combo, ds, delta] :
         std::vector<std::tuple<std::string, const chan::Dataset*, int>>{
             {"60d1", &ds60, 1}, {"30d1", &ds30, 1}, {"60d2", &ds60, 2}}) {
      const auto sh = experiment::evaluate_method(*ds, delta, false,
                                                  pred::ModelKind::SH, nullptr);
      const auto ar = experiment::evaluate_method(*ds, delta, false,
                                                  pred::ModelKind::AR, nullptr);
      nmse["sh"][combo].push_back(sh.nmse_db);
      nmse["ar"][combo].push_back(ar.nmse_db);
      if (combo == "60d1") {
        cos60["sh"].push_back(sh.cosine_pct);
        cos60["ar"].push_back(ar.cosine_pct);
      }
    }

    auto run = [&](const chan::Dataset& ds, int delta, const Variant& v,
                   const std::string& combo, bool track_cosine) {
      double cosine = 0.0;
      const std::uint64_t train_seed =
          seed * 10007 + static_cast<std::uint64_t>(delta) * 101 +
          (v.diff ? 8 : 0) + (v.adjuster ? 4 : 0) + (v.residual ? 2 : 0) +
          (v.beam ? 1 : 0);
      const double db = train_and_score(ds, delta, v, train_seed, &cosine);
      if (!v.beam) nmse[v.name][combo].push_back(db);
      if (track_cosine) cos60[v.name].push_back(cosine);
      std::printf("  desk run %2d: %-10s %-4s seed %llu -> %7.3f dB / %7.3f %%  (%.0f s)\n",
                  ++run_index, v.name, combo.c_str(),
                  static_cast<unsigned long long>(seed), db, cosine,
                  seconds_since(t0));
      std::fflush(stdout);
    };

    run(ds60, 1, kLpcnet, "60d1", true);
    run(ds60, 1, kLstm, "60d1", true);
    run(ds60, 1, kOnlyC, "60d1", false);
    run(ds60, 1, kOnlyJ, "60d1", false);
    run(ds60, 1, kNone, "60d1", false);
    run(ds60, 1, kJlpcnet, "60d1", true);
    run(ds30, 1, kLpcnet, "30d1", false);
    run(ds30, 1, kLstm, "30d1", false);
    run(ds60, 2, kLpcnet, "60d2", false);
    run(ds60, 2, kLstm, "60d2", false);
  }

  for (const auto& [method, combos] : nmse)
    for (const auto& [combo, vals] : combos)
      g_desk.nmse_db[method][combo] = median3(vals[0], vals[1], vals[2]);
  for (const auto& [method, vals] : cos60)
    g_desk.cosine60d1[method] = median3(vals[0], vals[1], vals[2]);
  g_desk.ready = true;
  std::printf("  desk campaign complete in %.1f s\n", seconds_since(t0));
}

void criterion_6() {
  run_desk_campaign();
  const double lpc = g_desk.nmse_db["lpcnet"]["60d1"];
  const double lstm = g_desk.nmse_db["lstm"]["60d1"];
  const double ar = g_desk.nmse_db["ar"]["60d1"];
  const double sh = g_desk.nmse_db["sh"]["60d1"];
  const bool pass = lpc <= lstm - 1.0 && lstm < ar && ar < sh;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "median dB: lpcnet %.2f <= lstm %.2f - 1, lstm < ar %.2f < sh %.2f",
                lpc, lstm, ar, sh);
  report(6, pass, "desk-scale NMSE ordering", buf);
}

void criterion_7() {
  run_desk_campaign();
  const double full = g_desk.nmse_db["lpcnet"]["60d1"];
  const double only_c = g_desk.nmse_db["only_c"]["60d1"];
  const double only_j = g_desk.nmse_db["only_j"]["60d1"];
  const double none = g_desk.nmse_db["without_cj"]["60d1"];
  const double slack = 0.3;
  const bool pass = full <= only_j + slack && only_j <= none + slack &&
                    only_c <= none + slack;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "median dB: both %.2f <= only_j %.2f <= none %.2f, only_c %.2f <= none",
                full, only_j, none, only_c);
  report(7, pass, "preprocessor / adjuster ablation ordering", buf);
}

void criterion_8() {
  run_desk_campaign();
  bool pass = true;
  std::ostringstream detail;
  detail.precision(2);
  detail << std::fixed;
  for (const char* method : {"sh", "ar", "lstm", "lpcnet"}) {
    const double d30 = g_desk.nmse_db[method]["30d1"];
    const double d60 = g_desk.nmse_db[method]["60d1"];
    const double d60h2 = g_desk.nmse_db[method]["60d2"];
    if (!(d60 > d30 && d60h2 > d60)) pass = false;
    detail << method << " " << d30 << "<" << d60 << "<" << d60h2 << "; ";
  }
  report(8, pass, "monotonic degradation in speed and horizon", detail.str());
}

void criterion_9() {
  run_desk_campaign();
  const double jl = g_desk.cosine60d1["jlpcnet"];
  const double lpc = g_desk.cosine60d1["lpcnet"];
  const double lstm = g_desk.cosine60d1["lstm"];
  const double ar = g_desk.cosine60d1["ar"];
  const double sh = g_desk.cosine60d1["sh"];
  const bool pass = jl >= lpc - 0.3 && jl > lstm && lpc > lstm && lstm > ar && ar > sh;
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "median %%: jlpcnet %.3f >= lpcnet %.3f - 0.3pp, > lstm %.3f > ar %.3f > sh %.3f",
      jl, lpc, lstm, ar, sh);
  report(9, pass, "beam-quality ordering", buf);
}

// ---------------------------------------------------------------------------
// 10: unit-root suite
// ---------------------------------------------------------------------------

void criterion_10() {
  const auto t0 = std::chrono::steady_clock::now();

  // canonical seeded series
  Rng rw_rng(12345);
  std::vector<double> walk(1000);
  double acc = 0.0;
  for (auto& v : walk) {
    acc += rw_rng.normal();
    v = acc;
  }
  const double p_walk = analysis::adf_test(walk, 1).p_value;

  Rng ar_rng(54321);
  std::vector<double> ar1(1000);
  double prev = 0.0;
  for (auto& v : ar1) {
    prev = 0.5 * prev + ar_rng.normal();
    v = prev;
  }
  const double p_ar1 = analysis::adf_test(ar1, 1).p_value;

  // Monte Carlo validation of the p-value map, independent seed
  const auto stats = oracles::df_null_tstats(100000, 1000, 1, 0xC0FFEE);
  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  auto empirical_p = [&](double t) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
  };
  double map_err = 0.0;
  for (double t = -3.6; t <= -0.8; t += 0.2)
    map_err = std::max(map_err, std::abs(analysis::df_pvalue(t) - empirical_p(t)));

  // stationarity ordering across speeds on the simulator; four lagged
  // differences absorb the oscillatory short-term structure (a single lag
  // saturates both speeds at p = 0)
  auto build = [](double speed_kmh, std::uint64_t seed) {
    chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
    cfg.n_col = 1;
    cfg.n_row = 1;
    cfg.snapshots = 900;
    cfg.speed_mps = speed_kmh / 3.6;
    std::vector<chan::Trajectory> out;
    Rng root(seed);
    for (int i = 0; i < 10; ++i) {
      Rng rng = root.spawn(static_cast<std::uint64_t>(i));
      out.push_back(chan::generate_trajectory(cfg, rng, static_cast<std::uint64_t>(i)));
    }
    return out;
  };
  const auto p30 = analysis::pvalue_cdf(build(30.0, 909), 32, 16, 4);
  const auto p60 = analysis::pvalue_cdf(build(60.0, 909), 32, 16, 4);
  const double med30 = p30[p30.size() / 2];
  const double med60 = p60[p60.size() / 2];

  const bool pass = p_walk > 0.4 && p_ar1 < 0.05 && map_err < 0.01 && med60 < med30;
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "walk p %.3f (>0.4), ar1 p %.2g (<0.05), map err %.4f (<0.01), med p 60kmh %.3f < 30kmh %.3f, %.0f s",
      p_walk, p_ar1, map_err, med60, med30, seconds_since(t0));
  report(10, pass, "unit-root suite", buf);
}

// ---------------------------------------------------------------------------
// 11: byte-identical reruns via the CLI
// ---------------------------------------------------------------------------

std::string g_cli_path = CHANFORECAST_CLI_PATH;

bool run_cmd(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str())) == 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion_11() {
  const fs::path dir = fs::temp_directory_path() / "chanforecast_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "exp.cfg";
  std::ofstream(cfg) << R"([channel]
scenario = NLOS-like
N_l = 1
N_r = 2
speed = 60
[dataset]
n_traj = 4
T = 60
K = 15
horizons = 1
split_ratio = 0.75
[model]
kind = lpcnet
N_z = 12
N_w = 6
N_s = 4
learning_rate = 0.002
batch_size = 32
epochs = 4
horizon = 1
[run]
seed = 31
)";

  bool pass = true;
  std::string failed_at;
  for (const char* run : {"a", "b"}) {
    const fs::path out = dir / run;
    if (!run_cmd("generate --config " + cfg.string() + " --out " + out.string() +
                 " --deterministic --seed 31"))
      pass = false;
    if (!run_cmd("train --config " + cfg.string() + " --dataset " +
                 (out / "dataset.chpd").string() + " --out " + out.string() +
                 " --deterministic --seed 31"))
      pass = false;
    if (!run_cmd("evaluate --config " + cfg.string() + " --dataset " +
                 (out / "dataset.chpd").string() + " --checkpoint " +
                 (out / "model.cfnm").string() + " --out " + out.string() +
                 " --deterministic --seed 31"))
      pass = false;
  }
  if (pass) {
    for (const char* file : {"dataset.chpd", "dataset.chpd.manifest.json", "model.cfnm",
                             "loss.csv", "metrics.csv", "metrics.json"}) {
      if (slurp(dir / "a" / file) != slurp(dir / "b" / file)) {
        pass = false;
        failed_at = file;
        break;
      }
    }
  } else {
    failed_at = "command failure";
  }
  fs::remove_all(dir);
  report(11, pass, "deterministic byte-identical reruns",
         pass ? "generate, train, evaluate all byte-identical" : "mismatch: " + failed_at);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> criteria;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) criteria.push_back(std::atoi(tok.c_str()));
    } else if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) {
      g_cli_path = argv[++i];
    }
  }
  if (criteria.empty())
    criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

  for (int c : criteria) {
    switch (c) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      case 9: criterion_9(); break;
      case 10: criterion_10(); break;
      case 11: criterion_11(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", c);
        ++g_failures;
    }
  }
  return g_failures;
}
