#include "riskeysim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "riskeysim/rng.hpp"
#include "riskeysim/util.hpp"

namespace riskeysim {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("config: field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

// Reads `key` (linear) or `key` + "_db"/"_dbw" (decibel) from j.
// Specifying both forms is rejected.
double get_scalar(const json& j, const std::string& key, double fallback) {
  const std::string db = key + "_db";
  const std::string dbw = key + "_dbw";
  const int present = j.contains(key) + j.contains(db) + j.contains(dbw);
  if (present > 1)
    throw ConfigError("config: field '" + key + "' given in several forms");
  if (j.contains(db)) return db_to_linear(get_number(j, db, 0.0));
  if (j.contains(dbw)) return db_to_linear(get_number(j, dbw, 0.0));
  return get_number(j, key, fallback);
}

Eigen::Vector3d get_vec3(const json& j, const std::string& key,
                         const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ConfigError("config: field '" + key + "' must be a 3-element array");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

json vec3_json(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

void check_known_keys(const json& j, const std::set<std::string>& known,
                      const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key()))
      throw ConfigError("config: unknown field '" + it.key() + "' in " + where);
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::section_v_preset() { return ScenarioConfig{}; }

void ScenarioConfig::validate() const {
  auto positive_dist = [](double d) { return d > 0.0 && std::isfinite(d); };
  if (!positive_dist(d_ab()) || !positive_dist(d_ae()) || !positive_dist(d_be()))
    throw ConfigError("scenario: node positions must be pairwise distinct");
  if (!(c0 > 0.0)) throw ConfigError("scenario: c0 must be > 0");
  if (!(alpha_los >= 2.0)) throw ConfigError("scenario: alpha_los must be >= 2");
  if (!(alpha_nlos >= alpha_los))
    throw ConfigError("scenario: alpha_nlos must be >= alpha_los");
  if (iota < 1) throw ConfigError("scenario: iota must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("scenario: lambda must be > 0");
  if (mx < 1 || my < 1) throw ConfigError("scenario: mx, my must be >= 1");
  if (!(elem_spacing > 0.0)) throw ConfigError("scenario: elem_spacing must be > 0");
  if (!(pilot_power_a > 0.0) || !(pilot_power_b > 0.0))
    throw ConfigError("scenario: pilot powers must be > 0");
  if (!(twoway_power > 0.0)) throw ConfigError("scenario: twoway_power must be > 0");
  if (!(noise_var >= 0.0)) throw ConfigError("scenario: noise_var must be >= 0");
  if (!(amp_gain >= 0.0)) throw ConfigError("scenario: amp_gain must be >= 0");
  if (!(beta >= 0.0 && beta < 0.5))
    throw ConfigError("scenario: beta must be in [0, 0.5)");
  if (trials < 1) throw ConfigError("scenario: trials must be >= 1");
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  check_known_keys(j, {"pos_alice", "pos_bob", "pos_eve",
                       "c0", "c0_db",
                       "alpha_los", "alpha_nlos", "iota",
                       "lambda", "mx", "my", "elem_spacing",
                       "pilot_power_a", "pilot_power_a_dbw",
                       "pilot_power_b", "pilot_power_b_dbw",
                       "twoway_power", "twoway_power_dbw",
                       "noise_var", "noise_var_dbw",
                       "amp_gain", "amp_gain_db",
                       "beta", "trials", "seed",
                       "relay", "spoofing", "harness"},
                   "scenario");
  ScenarioConfig c;
  c.pos_alice = get_vec3(j, "pos_alice", c.pos_alice);
  c.pos_bob = get_vec3(j, "pos_bob", c.pos_bob);
  c.pos_eve = get_vec3(j, "pos_eve", c.pos_eve);
  c.c0 = get_scalar(j, "c0", c.c0);
  c.alpha_los = get_number(j, "alpha_los", c.alpha_los);
  c.alpha_nlos = get_number(j, "alpha_nlos", c.alpha_nlos);
  c.iota = static_cast<int>(get_number(j, "iota", c.iota));
  c.lambda = get_number(j, "lambda", c.lambda);
  c.mx = static_cast<int>(get_number(j, "mx", c.mx));
  c.my = static_cast<int>(get_number(j, "my", c.my));
  c.elem_spacing = get_number(j, "elem_spacing", c.lambda / 8.0);
  c.pilot_power_a = get_scalar(j, "pilot_power_a", c.pilot_power_a);
  c.pilot_power_b = get_scalar(j, "pilot_power_b", c.pilot_power_b);
  c.twoway_power = get_scalar(j, "twoway_power", c.twoway_power);
  c.noise_var = get_scalar(j, "noise_var", c.noise_var);
  c.amp_gain = get_scalar(j, "amp_gain", c.amp_gain);
  c.beta = get_number(j, "beta", c.beta);
  c.trials = static_cast<long>(get_number(j, "trials", c.trials));
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["pos_alice"] = vec3_json(pos_alice);
  j["pos_bob"] = vec3_json(pos_bob);
  j["pos_eve"] = vec3_json(pos_eve);
  j["c0"] = c0;
  j["alpha_los"] = alpha_los;
  j["alpha_nlos"] = alpha_nlos;
  j["iota"] = iota;
  j["lambda"] = lambda;
  j["mx"] = mx;
  j["my"] = my;
  j["elem_spacing"] = elem_spacing;
  j["pilot_power_a"] = pilot_power_a;
  j["pilot_power_b"] = pilot_power_b;
  j["twoway_power"] = twoway_power;
  j["noise_var"] = noise_var;
  j["amp_gain"] = amp_gain;
  j["beta"] = beta;
  j["trials"] = trials;
  j["seed"] = seed;
  return j;
}

void RelayConfig::validate() const {
  if (!(gain >= 0.0)) throw ConfigError("relay: gain must be >= 0");
}

RelayConfig RelayConfig::from_json(const json& j) {
  check_known_keys(j, {"gain", "gain_db", "position"}, "relay");
  RelayConfig c;
  c.gain = get_scalar(j, "gain", c.gain);
  c.position = get_vec3(j, "position", c.position);
  c.validate();
  return c;
}

json RelayConfig::to_json() const {
  json j;
  j["gain"] = gain;
  j["position"] = vec3_json(position);
  return j;
}

void SpoofingConfig::validate() const {
  if (!(spoof_gain >= 0.0)) throw ConfigError("spoofing: spoof_gain must be >= 0");
}

SpoofingConfig SpoofingConfig::from_json(const json& j) {
  check_known_keys(j, {"spoof_gain", "spoof_gain_db", "position",
                       "detection_snr_db"},
                   "spoofing");
  SpoofingConfig c;
  c.spoof_gain = get_scalar(j, "spoof_gain", c.spoof_gain);
  c.position = get_vec3(j, "position", c.position);
  c.detection_snr_db = get_number(j, "detection_snr_db", c.detection_snr_db);
  c.validate();
  return c;
}

json SpoofingConfig::to_json() const {
  json j;
  j["spoof_gain"] = spoof_gain;
  j["position"] = vec3_json(position);
  j["detection_snr_db"] = detection_snr_db;
  return j;
}

void HarnessConfig::validate() const {
  if (rounds_per_point < 1) throw ConfigError("harness: rounds_per_point must be >= 1");
  if (epochs_per_point < 1) throw ConfigError("harness: epochs_per_point must be >= 1");
  if (dict_grid_el < 2 || dict_grid_az < 2)
    throw ConfigError("harness: dictionary grid counts must be >= 2");
  if (sensors < 1) throw ConfigError("harness: sensors must be >= 1");
  if (threads < 1) throw ConfigError("harness: threads must be >= 1");
  if (optimizer_restarts < 1) throw ConfigError("harness: optimizer_restarts must be >= 1");
  if (optimizer_max_iters < 1) throw ConfigError("harness: optimizer_max_iters must be >= 1");
}

HarnessConfig HarnessConfig::from_json(const json& j) {
  check_known_keys(j, {"rounds_per_point", "epochs_per_point", "per_round_angles",
                       "dict_grid_el", "dict_grid_az", "sensors", "threads",
                       "eve_drop_counts_as_mismatch", "snap_angles_to_grid",
                       "optimizer_restarts", "optimizer_max_iters"},
                   "harness");
  HarnessConfig c;
  c.rounds_per_point = static_cast<long>(get_number(j, "rounds_per_point", c.rounds_per_point));
  c.epochs_per_point = static_cast<int>(get_number(j, "epochs_per_point", c.epochs_per_point));
  if (j.contains("per_round_angles")) c.per_round_angles = j.at("per_round_angles").get<bool>();
  c.dict_grid_el = static_cast<int>(get_number(j, "dict_grid_el", c.dict_grid_el));
  c.dict_grid_az = static_cast<int>(get_number(j, "dict_grid_az", c.dict_grid_az));
  c.sensors = static_cast<int>(get_number(j, "sensors", c.sensors));
  c.threads = static_cast<int>(get_number(j, "threads", c.threads));
  if (j.contains("eve_drop_counts_as_mismatch"))
    c.eve_drop_counts_as_mismatch = j.at("eve_drop_counts_as_mismatch").get<bool>();
  if (j.contains("snap_angles_to_grid"))
    c.snap_angles_to_grid = j.at("snap_angles_to_grid").get<bool>();
  c.optimizer_restarts = static_cast<int>(get_number(j, "optimizer_restarts", c.optimizer_restarts));
  c.optimizer_max_iters = static_cast<int>(get_number(j, "optimizer_max_iters", c.optimizer_max_iters));
  c.validate();
  return c;
}

json HarnessConfig::to_json() const {
  json j;
  j["rounds_per_point"] = rounds_per_point;
  j["epochs_per_point"] = epochs_per_point;
  j["per_round_angles"] = per_round_angles;
  j["dict_grid_el"] = dict_grid_el;
  j["dict_grid_az"] = dict_grid_az;
  j["sensors"] = sensors;
  // threads is a runtime knob: results are thread-count independent, so it
  // stays out of the serialized form and the config hash.
  j["eve_drop_counts_as_mismatch"] = eve_drop_counts_as_mismatch;
  j["snap_angles_to_grid"] = snap_angles_to_grid;
  j["optimizer_restarts"] = optimizer_restarts;
  j["optimizer_max_iters"] = optimizer_max_iters;
  return j;
}

ConfigDocument ConfigDocument::from_json(const json& j) {
  ConfigDocument d;
  d.scenario = ScenarioConfig::from_json(j);
  if (j.contains("relay")) d.relay = RelayConfig::from_json(j.at("relay"));
  if (j.contains("spoofing")) d.spoofing = SpoofingConfig::from_json(j.at("spoofing"));
  if (j.contains("harness")) d.harness = HarnessConfig::from_json(j.at("harness"));
  return d;
}

ConfigDocument ConfigDocument::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: JSON parse error in '" + path + "': " + e.what());
  }
  return from_json(j);
}

json ConfigDocument::to_json() const {
  json j = scenario.to_json();
  j["relay"] = relay.to_json();
  j["spoofing"] = spoofing.to_json();
  j["harness"] = harness.to_json();
  return j;
}

std::uint64_t ConfigDocument::hash() const {
  const std::string s = to_json().dump();
  return fnv1a64(s);
}

}  // namespace riskeysim
