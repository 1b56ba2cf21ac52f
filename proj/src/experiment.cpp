#include "riskeysim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "riskeysim/attackers.hpp"
#include "riskeysim/channel.hpp"
#include "riskeysim/phase_opt.hpp"
#include "riskeysim/ris.hpp"
#include "riskeysim/rng.hpp"
#include "riskeysim/sensing.hpp"
#include "riskeysim/skg.hpp"
#include "riskeysim/theory.hpp"
#include "riskeysim/util.hpp"

namespace riskeysim {

namespace {

using cplx = std::complex<double>;

constexpr std::int64_t kRoundBlock = 256;

// Unit-gain decomposition of one round. The attacker's gain enters every
// feature as a pure sqrt-scale on the *_scaled parts, so one simulation
// pass serves a whole gain sweep.
struct RoundTrace {
  cplx a_fixed{0.0, 0.0};
  cplx b_fixed{0.0, 0.0};
  cplx a_scaled{0.0, 0.0};
  cplx b_scaled{0.0, 0.0};
  cplx eve_fixed{0.0, 0.0};
  cplx eve_scaled{0.0, 0.0};
};

// Thread-local steering-atom cache. OMP keeps re-selecting the same few
// atoms within a scatterer epoch, so reconstruction cost drops from a
// dictionary-sized product to O(iota * M).
struct AtomCache {
  std::uint64_t generation = 0;
  const Dictionary* dict = nullptr;
  std::unordered_map<int, Eigen::VectorXcd> atoms;

  const Eigen::VectorXcd& get(const Dictionary& d, int idx,
                              std::uint64_t gen) {
    if (generation != gen || dict != &d) {
      atoms.clear();
      generation = gen;
      dict = &d;
    }
    auto it = atoms.find(idx);
    if (it == atoms.end()) it = atoms.emplace(idx, d.atom(idx)).first;
    return it->second;
  }
};

thread_local AtomCache t_atom_cache;
std::atomic<std::uint64_t> g_engine_generation{1};

Eigen::VectorXcd reconstruct_cached(const Dictionary& dict,
                                    const SparseEstimate& s,
                                    std::uint64_t gen) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dict.geom.size());
  for (std::size_t i = 0; i < s.support.size(); ++i)
    g += s.coeffs[static_cast<int>(i)] *
         t_atom_cache.get(dict, s.support[i], gen);
  return g;
}

cplx combine_ris(const Eigen::VectorXcd& unit_weights, const Eigen::VectorXcd& ga,
                 const Eigen::VectorXcd& gb) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < unit_weights.size(); ++m)
    acc += unit_weights[m] * ga[m] * gb[m];
  return acc;
}

struct EpochData {
  LinkEpoch link_a;
  LinkEpoch link_b;
  Eigen::VectorXd opt_phases;        // Optimized strategy only
  Eigen::VectorXcd opt_unit_weights; // exp(j theta), amplitude 1
  double opt_sigma_e2_unit = 0.0;    // w^H G w at unit amplitude
};

// Caches greedy sensor placements across variants and sweep points; the
// placement depends only on geometry and dictionary resolution.
struct PlacementCache {
  struct Entry {
    std::shared_ptr<Dictionary> dict;
    SensingMatrix sense;
    SensingOperator op;
  };
  std::map<std::tuple<int, int, long, long, int, int, int>, Entry> entries;

  const Entry& get(const UpaGeometry& geom, double lambda, int grid, int sensors,
                   int threads) {
    const auto key = std::make_tuple(
        geom.mx, geom.my, std::lround(geom.elem_spacing * 1e12),
        std::lround(lambda * 1e12), grid, grid, sensors);
    auto it = entries.find(key);
    if (it == entries.end()) {
      Entry e;
      e.dict = std::make_shared<Dictionary>(
          build_dictionary(geom, lambda, grid, grid));
      e.sense = place_sensors(*e.dict, sensors, threads);
      e.op = make_sensing_operator(*e.dict, e.sense);
      it = entries.emplace(key, std::move(e)).first;
    }
    return it->second;
  }
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

KeyStream all_dropped(std::size_t n) {
  KeyStream ks;
  ks.outcomes.assign(n, Bit::Dropped);
  ks.degenerate = true;
  return ks;
}

class VariantEngine {
 public:
  VariantEngine(const ScenarioConfig& base, const VariantSpec& variant,
                const HarnessConfig& harness, const RelayConfig& relay,
                const SpoofingConfig& spoofing, PlacementCache* cache)
      : variant_(variant), harness_(harness), relay_(relay), spoofing_(spoofing) {
    cfg_ = base;
    if (variant.attacker == Attacker::EveRis) {
      cfg_.mx = variant.mx;
      cfg_.my = variant.my;
    }
    cfg_.validate();
    harness_.validate();
    if (variant.attacker == Attacker::EveRis &&
        variant.phase == PhaseStrategy::Optimized && harness_.per_round_angles)
      throw ConfigError(
          "optimized phase with per-round scatterer resampling has no "
          "re-optimization budget; use epochs_per_point instead");
    if (variant.scheme == SkgScheme::TwoWay &&
        (variant.attacker == Attacker::Relay || variant.attacker == Attacker::Spoof))
      throw ConfigError("relay/spoofing attackers are only modeled against the "
                        "CSI scheme");
    variant_seed_ = mix64(base.seed ^ fnv1a64(variant.id));
    geom_ = cfg_.geometry();
    if (variant.attacker == Attacker::EveRis) {
      const int grid = variant.dict_grid > 0 ? variant.dict_grid
                                             : harness_.dict_grid_el;
      own_cache_ = cache ? nullptr : std::make_unique<PlacementCache>();
      const auto& entry = (cache ? *cache : *own_cache_)
                              .get(geom_, cfg_.lambda, grid, harness_.sensors,
                                   harness_.threads);
      dict_ = entry.dict;
      sense_ = entry.sense;
      sensing_op_ = &entry.op;
    }
    generation_ = g_engine_generation.fetch_add(1);
  }

  void simulate(long rounds) {
    if (rounds < 2) throw ConfigError("run_point: need at least 2 rounds");
    rounds_ = rounds;
    build_epochs();
    traces_.assign(rounds, RoundTrace{});
    parallel_for_blocks(rounds, harness_.threads, kRoundBlock,
                        [&](std::int64_t lo, std::int64_t hi) {
                          for (std::int64_t r = lo; r < hi; ++r) simulate_round(r);
                        });
  }

  ResultRow evaluate(double beta, double gain_linear, double sweep_value) const {
    const long n = rounds_;
    std::vector<double> za(n), zb(n), ze(n);
    const double s = std::sqrt(std::max(gain_linear, 0.0));
    double mse = 0.0;
    for (long r = 0; r < n; ++r) {
      const RoundTrace& t = traces_[r];
      const cplx pa = t.a_fixed + s * t.a_scaled;
      const cplx pb = t.b_fixed + s * t.b_scaled;
      za[r] = pa.real();
      zb[r] = pb.real();
      ze[r] = (t.eve_fixed + s * t.eve_scaled).real();
      mse += std::norm(pa - pb);
    }
    mse /= static_cast<double>(n);

    const KeyStream ka = quantize_block(za, beta);
    const KeyStream kb = quantize_block(zb, beta);
    const KeyStream ke = variant_.attacker == Attacker::None
                             ? all_dropped(za.size())
                             : quantize_block(ze, beta);

    ResultRow row;
    row.sweep_value = sweep_value;
    row.variant = variant_.id;
    row.kmr_ae = key_match_rate(ka, ke);
    row.kmr_ab = key_match_rate(ka, kb);
    row.akr = available_key_rate(ka, kb, ke, harness_.eve_drop_counts_as_mismatch);
    row.mse_ab_dbw = linear_to_db(mse);
    row.stderr_kmr_ae =
        std::sqrt(row.kmr_ae * (1.0 - row.kmr_ae) / static_cast<double>(n));
    row.rounds = n;
    row.seed = cfg_.seed;
    return row;
  }

  double resolve_gain(double sweep_value, const std::string& sweep_name) const {
    const bool db_sweep = sweep_name == "amp_gain_db" || sweep_name == "gain_db";
    if (variant_.gain_from_sweep && db_sweep) return db_to_linear(sweep_value);
    if (std::isfinite(variant_.fixed_gain)) return variant_.fixed_gain;
    switch (variant_.attacker) {
      case Attacker::EveRis: return cfg_.amp_gain;
      case Attacker::Relay: return relay_.gain;
      case Attacker::Spoof: return spoofing_.spoof_gain;
      case Attacker::None: return 0.0;
    }
    return 0.0;
  }

  std::string metadata() const {
    std::ostringstream os;
    os << "variant=" << variant_.id;
    if (variant_.attacker == Attacker::EveRis) {
      os << " dict=" << dict_->grid_el << "x" << dict_->grid_az
         << " epochs=" << (harness_.per_round_angles ? rounds_ : harness_.epochs_per_point)
         << " sensors=[";
      for (std::size_t i = 0; i < sense_.rows.size(); ++i) {
        if (i) os << " ";
        os << sense_.rows[i];
      }
      os << "]";
    }
    return os.str();
  }

  const ScenarioConfig& cfg() const { return cfg_; }

 private:
  long epoch_count() const {
    if (variant_.attacker != Attacker::EveRis) return 1;
    if (harness_.per_round_angles) return rounds_;
    return std::min<long>(harness_.epochs_per_point, rounds_);
  }

  long epoch_of(long r) const { return r * epoch_count() / rounds_; }

  void build_epochs() {
    epochs_.clear();
    if (variant_.attacker != Attacker::EveRis) return;
    const long n_epochs = epoch_count();
    epochs_.resize(n_epochs);
    for (long e = 0; e < n_epochs; ++e) {
      Rng angle_rng = Rng::for_stream(variant_seed_, streams::kEpochAngles, e);
      EpochData& ep = epochs_[e];
      ep.link_a = make_link_epoch(cfg_, geom_, Endpoint::Alice, std::nullopt,
                                  angle_rng);
      ep.link_b = make_link_epoch(cfg_, geom_, Endpoint::Bob, std::nullopt,
                                  angle_rng);
      if (harness_.snap_angles_to_grid) {
        snap_epoch(ep.link_a);
        snap_epoch(ep.link_b);
      }
      if (variant_.phase == PhaseStrategy::Optimized) {
        const DeceptionOperator g =
            DeceptionOperator::from_links(ep.link_a, ep.link_b);
        OptimizerConfig ocfg;
        ocfg.restarts = harness_.optimizer_restarts;
        ocfg.max_iters = harness_.optimizer_max_iters;
        Rng opt_rng = Rng::for_stream(variant_seed_, streams::kOptimizer, e);
        OptimizeResult res = optimize_phase(g, 1.0, ocfg, opt_rng);
        ep.opt_phases = res.w.phases;
        ep.opt_unit_weights = res.w.weights();
        ep.opt_sigma_e2_unit = res.objective;
      }
    }
  }

  void snap_epoch(LinkEpoch& link) const {
    auto snap = [&](AnglePair a) { return dict_->grid[dict_->nearest_atom(a)]; };
    link.los = snap(link.los);
    link.g_los = std::sqrt(link.los_power) *
                 steering_vector(geom_, link.los.el, link.los.az, cfg_.lambda);
    for (auto& a : link.angles) a = snap(a);
    for (std::size_t n = 0; n < link.angles.size(); ++n)
      link.steer.col(static_cast<int>(n)) = steering_vector(
          geom_, link.angles[n].el, link.angles[n].az, cfg_.lambda);
  }

  void simulate_round(long r) {
    Rng rng = Rng::for_stream(variant_seed_, streams::kRound, r);
    RoundTrace& t = traces_[r];
    const DirectChannel h = sample_direct(cfg_, rng);

    switch (variant_.attacker) {
      case Attacker::None: {
        if (variant_.scheme == SkgScheme::Csi) {
          const ProbeRound p = csi_probe(h, {0.0, 0.0}, cfg_, rng);
          t.a_fixed = p.h_a_hat;
          t.b_fixed = p.h_b_hat;
        } else {
          const ProbeRound p = twoway_probe(h, {0.0, 0.0}, cfg_, rng);
          t.a_fixed = p.phi_a_hat;
          t.b_fixed = p.phi_b_hat;
        }
        return;
      }
      case Attacker::EveRis: {
        simulate_ris_round(r, h, rng, t);
        return;
      }
      case Attacker::Relay: {
        const cplx g_ae = sample_attacker_channel(cfg_, cfg_.pos_alice,
                                                  cfg_.pos_eve, rng);
        const cplx g_be = sample_attacker_channel(cfg_, cfg_.pos_bob,
                                                  cfg_.pos_eve, rng);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const cplx inserted_unit = std::polar(1.0, phase) * g_ae * g_be;
        t.a_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_b);
        t.b_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_a);
        t.a_scaled = inserted_unit;
        t.b_scaled = inserted_unit;
        t.eve_scaled = inserted_unit;
        t.eve_fixed = rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_a);
        return;
      }
      case Attacker::Spoof: {
        const cplx g_ae = sample_attacker_channel(cfg_, cfg_.pos_alice,
                                                  cfg_.pos_eve, rng);
        t.a_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_b);
        t.b_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_a);
        t.a_scaled = g_ae;
        t.eve_fixed =
            g_ae + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_a);
        return;
      }
    }
  }

  void simulate_ris_round(long r, const DirectChannel& h, Rng& rng,
                          RoundTrace& t) {
    const EpochData& ep = epochs_[epoch_of(r)];
    const RisLinkChannel ga = sample_link_epoch(ep.link_a, rng);
    const RisLinkChannel gb = sample_link_epoch(ep.link_b, rng);

    Eigen::VectorXcd unit_weights;
    const Eigen::VectorXcd* weights = nullptr;
    if (variant_.phase == PhaseStrategy::Random) {
      unit_weights.resize(geom_.size());
      for (int m = 0; m < geom_.size(); ++m)
        unit_weights[m] = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
      weights = &unit_weights;
    } else {
      weights = &ep.opt_unit_weights;
    }
    const cplx he_unit = combine_ris(*weights, ga.g, gb.g);

    if (variant_.scheme == SkgScheme::Csi) {
      t.a_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_b);
      t.b_fixed = h.h + rng.cnormal(2.0 * cfg_.noise_var / cfg_.pilot_power_a);
      t.a_scaled = he_unit;
      t.b_scaled = he_unit;

      // Eve's RF-chain measurements of each pilot, post matched filter;
      // per-sensor noise variance sigma_n^2, filtered by the pilot power.
      const int c = sense_.count();
      Eigen::VectorXcd ya(c), yb(c);
      for (int i = 0; i < c; ++i)
        ya[i] = ga.g[sense_.rows[i]] + rng.cnormal(cfg_.noise_var) /
                                           std::sqrt(cfg_.pilot_power_a);
      for (int i = 0; i < c; ++i)
        yb[i] = gb.g[sense_.rows[i]] + rng.cnormal(cfg_.noise_var) /
                                           std::sqrt(cfg_.pilot_power_b);
      const int sparsity = cfg_.iota + 1;
      const SparseEstimate sa = omp_recover(ya, *sensing_op_, sparsity);
      const SparseEstimate sb = omp_recover(yb, *sensing_op_, sparsity);
      const Eigen::VectorXcd ga_hat = reconstruct_cached(*dict_, sa, generation_);
      const Eigen::VectorXcd gb_hat = reconstruct_cached(*dict_, sb, generation_);
      t.eve_scaled = combine_ris(*weights, ga_hat, gb_hat);
    } else {
      const cplx q_a = rng.cnormal(cfg_.twoway_power);
      const cplx q_b = rng.cnormal(cfg_.twoway_power);
      const cplx n_a = rng.cnormal(2.0 * cfg_.noise_var);
      const cplx n_b = rng.cnormal(2.0 * cfg_.noise_var);
      const cplx shared = h.h * q_a * q_b;
      t.a_fixed = shared + n_a * q_a;
      t.b_fixed = shared + n_b * q_b;
      t.a_scaled = he_unit * q_a * q_b;
      t.b_scaled = t.a_scaled;

      const int c = sense_.count();
      Eigen::VectorXcd ra(c), rb(c);
      for (int i = 0; i < c; ++i)
        ra[i] = ga.g[sense_.rows[i]] * q_a + rng.cnormal(2.0 * cfg_.noise_var);
      for (int i = 0; i < c; ++i)
        rb[i] = gb.g[sense_.rows[i]] * q_b + rng.cnormal(2.0 * cfg_.noise_var);
      const int sparsity = cfg_.iota + 1;
      const SparseEstimate sa = omp_recover(ra, *sensing_op_, sparsity);
      const SparseEstimate sb = omp_recover(rb, *sensing_op_, sparsity);
      const Eigen::VectorXcd gqa_hat = reconstruct_cached(*dict_, sa, generation_);
      const Eigen::VectorXcd gqb_hat = reconstruct_cached(*dict_, sb, generation_);
      t.eve_scaled = combine_ris(*weights, gqa_hat, gqb_hat);
    }
  }

  VariantSpec variant_;
  HarnessConfig harness_;
  RelayConfig relay_;
  SpoofingConfig spoofing_;
  ScenarioConfig cfg_;
  UpaGeometry geom_;
  std::uint64_t variant_seed_ = 0;
  std::uint64_t generation_ = 0;
  std::shared_ptr<Dictionary> dict_;
  SensingMatrix sense_;
  const SensingOperator* sensing_op_ = nullptr;
  std::unique_ptr<PlacementCache> own_cache_;
  std::vector<EpochData> epochs_;
  std::vector<RoundTrace> traces_;
  long rounds_ = 0;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return v;
}

VariantSpec ris_variant(const std::string& id, PhaseStrategy phase,
                        SkgScheme scheme, int side, bool gain_from_sweep,
                        double fixed_gain, int dict_grid) {
  VariantSpec v;
  v.id = id;
  v.attacker = Attacker::EveRis;
  v.phase = phase;
  v.scheme = scheme;
  v.mx = side;
  v.my = side;
  v.gain_from_sweep = gain_from_sweep;
  v.fixed_gain = fixed_gain;
  v.dict_grid = dict_grid;
  return v;
}

}  // namespace

ExperimentSpec figure_preset(const std::string& figure_id,
                             const ConfigDocument& doc) {
  ExperimentSpec spec;
  spec.figure_id = figure_id;
  spec.base = doc.scenario;
  spec.relay = doc.relay;
  spec.spoofing = doc.spoofing;
  spec.harness = doc.harness;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto kmr_sweep_variants = [&](SkgScheme scheme) {
    spec.sweep = {"amp_gain_db", linspace(0.0, 30.0, 7)};
    const char* tag = scheme == SkgScheme::Csi ? "csi" : "twoway";
    for (int side : {10, 20}) {
      const int m = side * side;
      spec.variants.push_back(ris_variant(
          "eve_ris_rand_M" + std::to_string(m) + "_" + tag,
          PhaseStrategy::Random, scheme, side, true, nan, 48));
      spec.variants.push_back(ris_variant(
          "eve_ris_opt_M" + std::to_string(m) + "_" + tag,
          PhaseStrategy::Optimized, scheme, side, true, nan, 48));
    }
    spec.harness.rounds_per_point = 100000;
    spec.harness.epochs_per_point = 16;
  };

  auto akr_sweep_variants = [&](SkgScheme scheme) {
    spec.sweep = {"beta", linspace(0.05, 0.45, 9)};
    const char* tag = scheme == SkgScheme::Csi ? "csi" : "twoway";
    VariantSpec none;
    none.id = std::string("no_eve_") + tag;
    none.scheme = scheme;
    spec.variants.push_back(none);
    for (int side : {10, 20, 40, 80}) {
      const int m = side * side;
      spec.variants.push_back(ris_variant(
          "eve_ris_opt_passive_M" + std::to_string(m) + "_" + tag,
          PhaseStrategy::Optimized, scheme, side, false, 1.0,
          side >= 80 ? 96 : 48));
    }
    spec.harness.rounds_per_point = 100000;
    spec.harness.epochs_per_point = 16;
  };

  if (figure_id == "fig1b") {
    spec.sweep = {"ratio_db", linspace(-20.0, 30.0, 51)};
    for (double beta : {0.1, 0.2, 0.3, 0.4}) {
      VariantSpec v;
      char id[32];
      std::snprintf(id, sizeof(id), "theory_beta%.2f", beta);
      v.id = id;
      v.fixed_gain = beta;  // carries beta for the theory rows
      spec.variants.push_back(v);
    }
  } else if (figure_id == "fig2") {
    kmr_sweep_variants(SkgScheme::Csi);
  } else if (figure_id == "fig3") {
    akr_sweep_variants(SkgScheme::Csi);
  } else if (figure_id == "fig4") {
    kmr_sweep_variants(SkgScheme::TwoWay);
  } else if (figure_id == "fig5") {
    akr_sweep_variants(SkgScheme::TwoWay);
  } else if (figure_id == "fig6" || figure_id == "fig7") {
    spec.sweep = {"gain_db", linspace(-60.0, 30.0, 19)};
    if (figure_id == "fig6") {
      VariantSpec none;
      none.id = "no_eve";
      spec.variants.push_back(none);
      spec.variants.push_back(ris_variant("eve_ris_rand_M100",
                                          PhaseStrategy::Random, SkgScheme::Csi,
                                          10, true, nan, 48));
    } else {
      spec.variants.push_back(ris_variant("eve_ris_opt_M100",
                                          PhaseStrategy::Optimized,
                                          SkgScheme::Csi, 10, true, nan, 48));
      spec.variants.push_back(ris_variant("eve_ris_opt_M400",
                                          PhaseStrategy::Optimized,
                                          SkgScheme::Csi, 20, true, nan, 48));
    }
    VariantSpec spoof;
    spoof.id = "spoof";
    spoof.attacker = Attacker::Spoof;
    spoof.gain_from_sweep = true;
    spec.variants.push_back(spoof);
    spec.harness.rounds_per_point = 100000;
    spec.harness.epochs_per_point = 8;
  } else if (figure_id == "fig8") {
    spec.sweep = {"pos_y", linspace(1.0, 49.0, 49)};
    for (int side : {10, 20, 40}) {
      const int m = side * side;
      spec.variants.push_back(ris_variant(
          "eve_ris_opt_passive_M" + std::to_string(m), PhaseStrategy::Optimized,
          SkgScheme::Csi, side, false, 1.0, 48));
    }
    VariantSpec relay;
    relay.id = "relay_60db";
    relay.attacker = Attacker::Relay;
    relay.fixed_gain = 1e6;
    spec.variants.push_back(relay);
    spec.harness.rounds_per_point = 20000;
    spec.harness.epochs_per_point = 20;
  } else {
    throw ConfigError("unknown figure preset '" + figure_id + "'");
  }
  return spec;
}

ResultRow run_point(const ScenarioConfig& cfg, const VariantSpec& variant,
                    long rounds, std::uint64_t seed,
                    const HarnessConfig& harness, const RelayConfig& relay,
                    const SpoofingConfig& spoofing) {
  if (rounds < 2) throw ConfigError("run_point: rounds must be >= 2");
  ScenarioConfig local = cfg;
  local.seed = seed;
  VariantEngine engine(local, variant, harness, relay, spoofing, nullptr);
  engine.simulate(rounds);
  const double gain = engine.resolve_gain(0.0, "none");
  return engine.evaluate(local.beta, gain, 0.0);
}

FigureResult run_figure(const ExperimentSpec& spec) {
  FigureResult out;
  spec.base.validate();
  spec.harness.validate();
  if (spec.figure_id == "fig1b") {
    for (double v : spec.sweep.values) {
      for (const auto& variant : spec.variants) {
        const double beta = variant.fixed_gain;
        ResultRow row;
        row.sweep_value = v;
        row.variant = variant.id;
        row.kmr_ae = theoretical_kmr({db_to_linear(v / 2.0), beta});
        row.kmr_ab = kmr_limit(beta);
        row.akr = std::numeric_limits<double>::quiet_NaN();
        row.mse_ab_dbw = std::numeric_limits<double>::quiet_NaN();
        row.stderr_kmr_ae = 0.0;
        row.rounds = 0;
        row.seed = spec.base.seed;
        out.rows.push_back(row);
      }
    }
    out.metadata.push_back("theory rows: kmr_ae is the quadrature value, "
                           "kmr_ab the wave-blockage limit");
    return out;
  }

  PlacementCache cache;
  const bool per_position = spec.sweep.name == "pos_y";

  if (per_position) {
    std::vector<std::vector<ResultRow>> rows_by_value(spec.sweep.values.size());
    for (const auto& variant : spec.variants) {
      for (std::size_t i = 0; i < spec.sweep.values.size(); ++i) {
        ScenarioConfig cfg = spec.base;
        cfg.pos_eve = {0.0, spec.sweep.values[i], 0.0};
        VariantEngine engine(cfg, variant, spec.harness, spec.relay,
                             spec.spoofing, &cache);
        engine.simulate(spec.harness.rounds_per_point);
        const double gain =
            engine.resolve_gain(spec.sweep.values[i], spec.sweep.name);
        rows_by_value[i].push_back(
            engine.evaluate(cfg.beta, gain, spec.sweep.values[i]));
        if (i == 0) out.metadata.push_back(engine.metadata());
      }
    }
    for (auto& group : rows_by_value)
      for (auto& row : group) out.rows.push_back(std::move(row));
    return out;
  }

  std::vector<std::vector<ResultRow>> rows_by_variant(spec.variants.size());
  for (std::size_t vi = 0; vi < spec.variants.size(); ++vi) {
    const auto& variant = spec.variants[vi];
    VariantEngine engine(spec.base, variant, spec.harness, spec.relay,
                         spec.spoofing, &cache);
    engine.simulate(spec.harness.rounds_per_point);
    out.metadata.push_back(engine.metadata());
    for (double v : spec.sweep.values) {
      const double beta = spec.sweep.name == "beta" ? v : spec.base.beta;
      const double gain = engine.resolve_gain(v, spec.sweep.name);
      rows_by_variant[vi].push_back(engine.evaluate(beta, gain, v));
    }
  }
  for (std::size_t i = 0; i < spec.sweep.values.size(); ++i)
    for (std::size_t vi = 0; vi < spec.variants.size(); ++vi)
      out.rows.push_back(std::move(rows_by_variant[vi][i]));
  return out;
}

std::string render_csv(const ExperimentSpec& spec, const FigureResult& result) {
  std::ostringstream os;
  ConfigDocument doc;
  doc.scenario = spec.base;
  doc.relay = spec.relay;
  doc.spoofing = spec.spoofing;
  doc.harness = spec.harness;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(doc.hash()));
  os << "# provenance=riskeysim-1.0.0\n";
  os << "# figure=" << spec.figure_id << " sweep=" << spec.sweep.name << "\n";
  os << "# seed=" << spec.base.seed
     << " rounds_per_point=" << spec.harness.rounds_per_point << "\n";
  os << "# config_hash=" << hash << "\n";
  os << "# scenario=" << spec.base.to_json().dump() << "\n";
  os << "# harness=" << spec.harness.to_json().dump() << "\n";
  for (const auto& line : result.metadata) os << "# " << line << "\n";
  os << "sweep_value,variant,kmr_ae,kmr_ab,akr,mse_ab_dbw,stderr_kmr_ae,rounds,"
        "seed\n";
  for (const auto& r : result.rows) {
    os << format_double(r.sweep_value) << "," << r.variant << ","
       << format_double(r.kmr_ae) << "," << format_double(r.kmr_ab) << ","
       << format_double(r.akr) << "," << format_double(r.mse_ab_dbw) << ","
       << format_double(r.stderr_kmr_ae) << "," << r.rounds << "," << r.seed
       << "\n";
  }
  return os.str();
}

}  // namespace riskeysim
