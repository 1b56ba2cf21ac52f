#include <doctest.h>

#include <cmath>

#include "riskeysim/experiment.hpp"
#include "riskeysim/theory.hpp"
#include "riskeysim/util.hpp"

using namespace riskeysim;

namespace {

// Small scenario that keeps OMP cheap inside unit tests.
ConfigDocument small_doc() {
  ConfigDocument doc;
  doc.scenario.mx = doc.scenario.my = 4;
  doc.harness.rounds_per_point = 800;
  doc.harness.epochs_per_point = 2;
  doc.harness.sensors = 8;
  doc.harness.threads = 1;
  return doc;
}

VariantSpec small_ris_variant() {
  VariantSpec v;
  v.id = "eve_ris_rand_M16";
  v.attacker = Attacker::EveRis;
  v.phase = PhaseStrategy::Random;
  v.scheme = SkgScheme::Csi;
  v.mx = v.my = 4;
  v.dict_grid = 8;
  return v;
}

}  // namespace

TEST_CASE("run_point contract checks") {
  const ConfigDocument doc = small_doc();
  const VariantSpec v = small_ris_variant();
  CHECK_THROWS_AS(run_point(doc.scenario, v, 0, 1, doc.harness), ConfigError);
  CHECK_THROWS_AS(run_point(doc.scenario, v, 1, 1, doc.harness), ConfigError);

  HarnessConfig conflicted = doc.harness;
  conflicted.per_round_angles = true;
  VariantSpec opt = v;
  opt.phase = PhaseStrategy::Optimized;
  CHECK_THROWS_AS(run_point(doc.scenario, opt, 100, 1, conflicted), ConfigError);

  VariantSpec relay_twoway;
  relay_twoway.id = "bad";
  relay_twoway.attacker = Attacker::Relay;
  relay_twoway.scheme = SkgScheme::TwoWay;
  CHECK_THROWS_AS(run_point(doc.scenario, relay_twoway, 100, 1, doc.harness),
                  ConfigError);
}

TEST_CASE("unknown figure preset is rejected") {
  CHECK_THROWS_AS(figure_preset("fig99", ConfigDocument{}), ConfigError);
}

TEST_CASE("every known preset constructs") {
  const ConfigDocument doc;
  for (const char* id : {"fig1b", "fig2", "fig3", "fig4", "fig5", "fig6",
                         "fig7", "fig8"}) {
    const ExperimentSpec spec = figure_preset(id, doc);
    CHECK(!spec.variants.empty());
    CHECK(!spec.sweep.values.empty());
  }
}

TEST_CASE("no-attacker rows: kmr_ae zero, akr equals kmr_ab") {
  const ConfigDocument doc = small_doc();
  VariantSpec none;
  none.id = "no_eve";
  const ResultRow row = run_point(doc.scenario, none, 2000, 7, doc.harness);
  CHECK(row.kmr_ae == 0.0);
  CHECK(row.akr == doctest::Approx(row.kmr_ab));
  CHECK(row.rounds == 2000);
  CHECK(row.stderr_kmr_ae == 0.0);
}

TEST_CASE("legitimate match rate approaches the theory limit at low noise") {
  ConfigDocument doc = small_doc();
  doc.scenario.noise_var = 1e-20;
  doc.scenario.beta = 0.2;
  VariantSpec none;
  none.id = "no_eve";
  const long rounds = 20000;
  const ResultRow row = run_point(doc.scenario, none, rounds, 11, doc.harness);
  const double expect = kmr_limit(0.2);
  const double se = std::sqrt(expect * (1.0 - expect) / rounds);
  CHECK(std::abs(row.kmr_ab - expect) < 3.0 * se);
}

TEST_CASE("deceiving channel keeps the probes reciprocal") {
  const ConfigDocument doc = small_doc();
  VariantSpec none;
  none.id = "no_eve";
  const ResultRow base = run_point(doc.scenario, none, 4000, 3, doc.harness);
  ScenarioConfig amped = doc.scenario;
  amped.amp_gain = 1000.0;
  const ResultRow ris =
      run_point(amped, small_ris_variant(), 4000, 3, doc.harness);
  CHECK(std::abs(ris.mse_ab_dbw - base.mse_ab_dbw) < 1.0);
}

TEST_CASE("run_point is reproducible") {
  const ConfigDocument doc = small_doc();
  const ResultRow a =
      run_point(doc.scenario, small_ris_variant(), 600, 5, doc.harness);
  const ResultRow b =
      run_point(doc.scenario, small_ris_variant(), 600, 5, doc.harness);
  CHECK(a.kmr_ae == b.kmr_ae);
  CHECK(a.kmr_ab == b.kmr_ab);
  CHECK(a.akr == b.akr);
  CHECK(a.mse_ab_dbw == b.mse_ab_dbw);
}

TEST_CASE("figure runs are byte-identical across thread counts") {
  ConfigDocument doc = small_doc();
  ExperimentSpec spec;
  spec.figure_id = "custom";
  spec.sweep = {"gain_db", {0.0, 10.0, 20.0}};
  spec.base = doc.scenario;
  spec.harness = doc.harness;
  VariantSpec ris = small_ris_variant();
  ris.gain_from_sweep = true;
  spec.variants.push_back(ris);
  VariantSpec spoof;
  spoof.id = "spoof";
  spoof.attacker = Attacker::Spoof;
  spoof.gain_from_sweep = true;
  spec.variants.push_back(spoof);
  VariantSpec twoway = small_ris_variant();
  twoway.id = "eve_ris_rand_M16_twoway";
  twoway.scheme = SkgScheme::TwoWay;
  twoway.gain_from_sweep = true;
  spec.variants.push_back(twoway);

  spec.harness.threads = 1;
  const std::string csv1 = render_csv(spec, run_figure(spec));
  spec.harness.threads = 3;
  const std::string csv3 = render_csv(spec, run_figure(spec));
  spec.harness.threads = 8;
  const std::string csv8 = render_csv(spec, run_figure(spec));
  CHECK(csv1 == csv3);
  CHECK(csv1 == csv8);
  CHECK(csv1.find("sweep_value,variant,kmr_ae,kmr_ab,akr,mse_ab_dbw,"
                  "stderr_kmr_ae,rounds,seed") != std::string::npos);
}

TEST_CASE("fig1b rows carry the quadrature values") {
  ConfigDocument doc;
  ExperimentSpec spec = figure_preset("fig1b", doc);
  const FigureResult result = run_figure(spec);
  REQUIRE(result.rows.size() == spec.sweep.values.size() * spec.variants.size());
  const ResultRow& row = result.rows.front();
  const double ratio = db_to_linear(row.sweep_value / 2.0);
  CHECK(row.kmr_ae == doctest::Approx(theoretical_kmr({ratio, 0.1})));
  CHECK(row.kmr_ab == doctest::Approx(kmr_limit(0.1)));
  CHECK(std::isnan(row.akr));
  CHECK(row.rounds == 0);
}

TEST_CASE("row order groups variants within each sweep value") {
  ConfigDocument doc = small_doc();
  ExperimentSpec spec;
  spec.figure_id = "custom";
  spec.sweep = {"beta", {0.1, 0.3}};
  spec.base = doc.scenario;
  spec.harness = doc.harness;
  VariantSpec none;
  none.id = "no_eve";
  spec.variants.push_back(none);
  spec.variants.push_back(small_ris_variant());
  const FigureResult result = run_figure(spec);
  REQUIRE(result.rows.size() == 4);
  CHECK(result.rows[0].variant == "no_eve");
  CHECK(result.rows[0].sweep_value == doctest::Approx(0.1));
  CHECK(result.rows[1].variant == "eve_ris_rand_M16");
  CHECK(result.rows[2].sweep_value == doctest::Approx(0.3));
  // Drop rate grows with beta, so the legitimate match rate falls.
  CHECK(result.rows[2].kmr_ab < result.rows[0].kmr_ab);
}

TEST_CASE("metadata lists the sensor placement") {
  ConfigDocument doc = small_doc();
  ExperimentSpec spec;
  spec.figure_id = "custom";
  spec.sweep = {"amp_gain_db", {0.0}};
  spec.base = doc.scenario;
  spec.harness = doc.harness;
  VariantSpec ris = small_ris_variant();
  ris.gain_from_sweep = true;
  spec.variants.push_back(ris);
  const FigureResult result = run_figure(spec);
  REQUIRE(result.metadata.size() == 1);
  CHECK(result.metadata[0].find("sensors=[") != std::string::npos);
  CHECK(result.metadata[0].find("dict=8x8") != std::string::npos);
}
