#include "band/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "band/rng.hpp"
#include "json.hpp"

namespace band {

using nlohmann::json;

double distance(const BodyPosition& a, const BodyPosition& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double EnergyParams::amp_energy(double lambda) const {
  auto it = amp_table.find(lambda);
  if (it == amp_table.end()) {
    throw ConfigError("no amplifier energy configured for path-loss exponent " +
                      std::to_string(lambda));
  }
  return it->second;
}

EnergyParams nrf2401_params() {
  EnergyParams p;
  p.e_tx_circ = 16.7;
  p.e_rx_circ = 36.1;
  p.lambda_los = 3.38;
  p.lambda_nlos = 5.90;
  p.amp_table = {{3.38, 1.97}, {5.90, 7990.0}};
  return p;
}

double energy_tx(double v, double delta, double lambda, const EnergyParams& params) {
  return params.e_tx_circ * v + params.amp_energy(lambda) * std::pow(delta, lambda) * v;
}

double energy_rx(double v, const EnergyParams& params) { return params.e_rx_circ * v; }

bool BanInstance::is_nlos(const std::string& a, const std::string& b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  return nlos_pairs.count(key) > 0;
}

double BanInstance::rate(const Scenario& sc, const std::string& b, const std::string& s) const {
  auto it = sc.rates.find({b, s});
  return it == sc.rates.end() ? 0.0 : it->second;
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

bool finite_position(const BodyPosition& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

void BanInstance::validate() const {
  require(tx_range > 0, "tx_range must be positive");
  require(relay_budget >= 0, "relay_budget must be non-negative");
  require(!scenarios.empty(), "instance needs at least one scenario");
  require(energy.e_tx_circ >= 0 && energy.e_rx_circ >= 0, "circuit energies must be non-negative");
  require(energy.lambda_los > 0 && energy.lambda_nlos > 0, "path-loss exponents must be positive");
  require(energy.amp_table.count(energy.lambda_los) > 0, "amp_table is missing lambda_los");
  require(energy.amp_table.count(energy.lambda_nlos) > 0, "amp_table is missing lambda_nlos");
  for (const auto& [lambda, amp] : energy.amp_table) {
    require(lambda > 0, "amp_table exponents must be positive");
    require(amp >= 0, "amplifier energies must be non-negative");
  }

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id) {
    require(!id.empty(), "device ids must be non-empty");
    require(ids.insert(id).second, "duplicate device id: " + id);
  };
  for (const auto& b : biosensors) {
    check_id(b.id);
    require(finite_position(b.position), "non-finite position for " + b.id);
    if (const auto* c = std::get_if<ConstantRate>(&b.rate)) {
      require(c->rate >= 0, "negative constant rate for " + b.id);
    } else {
      const auto& v = std::get<VariableRate>(b.rate);
      require(v.lo >= 0 && v.lo <= v.hi, "bad variable rate range for " + b.id);
    }
  }
  for (const auto& s : sinks) {
    check_id(s.id);
    require(finite_position(s.position), "non-finite position for " + s.id);
  }
  for (const auto& r : relays) {
    check_id(r.id);
    require(finite_position(r.position), "non-finite position for " + r.id);
    require(r.capacity >= 0, "negative capacity for " + r.id);
  }

  const std::set<std::pair<std::string, std::string>>* key_set = nullptr;
  std::set<std::pair<std::string, std::string>> first_keys;
  bool any_positive = false;
  for (const auto& sc : scenarios) {
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& [couple, rate] : sc.rates) {
      require(rate >= 0, "negative rate in scenario " + sc.id);
      require(ids.count(couple.first) > 0, "unknown biosensor id in scenario " + sc.id);
      require(ids.count(couple.second) > 0, "unknown sink id in scenario " + sc.id);
      if (rate > 0) any_positive = true;
      keys.insert(couple);
    }
    if (key_set == nullptr) {
      first_keys = std::move(keys);
      key_set = &first_keys;
    } else {
      require(keys == *key_set, "scenario " + sc.id + " has a different couple key set");
    }
  }
  require(any_positive, "no couple has positive demand in any scenario");
}

void GeneratorConfig::validate() const {
  require(biosensor_count >= 1 && sink_count >= 1 && relay_count >= 0,
          "generator sizes must be at least 1 (relays may be 0)");
  require(scenario_count >= 1, "need at least one scenario");
  require(tx_range > 0, "tx_range must be positive");
  require(relay_capacity >= 0, "relay capacity must be non-negative");
  require(constant_fraction >= 0 && constant_fraction <= 1, "constant_fraction in [0,1]");
  require(!constant_rate_choices.empty(), "constant_rate_choices must be non-empty");
  require(variable_rate_lo >= 0 && variable_rate_lo <= variable_rate_hi,
          "variable rate range must satisfy 0 <= lo <= hi");
  require(p_nlos >= 0 && p_nlos <= 1, "p_nlos in [0,1]");
  require(box_x > 0 && box_y > 0 && box_z > 0, "body box dimensions must be positive");
  if (!biosensor_positions.empty()) {
    require(static_cast<int>(biosensor_positions.size()) == biosensor_count,
            "biosensor_positions size mismatch");
  }
  if (!sink_positions.empty()) {
    require(static_cast<int>(sink_positions.size()) == sink_count, "sink_positions size mismatch");
  }
}

namespace {

std::string padded_id(const std::string& prefix, int index, int count) {
  size_t width = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  std::string out = prefix;
  out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

BodyPosition sample_position(Rng& rng, const GeneratorConfig& c) {
  return {rng.uniform(0.0, c.box_x), rng.uniform(0.0, c.box_y), rng.uniform(0.0, c.box_z)};
}

}  // namespace

BanInstance generate_instance(const GeneratorConfig& config, uint64_t seed) {
  config.validate();
  Rng rng(seed);
  BanInstance inst;
  inst.energy = nrf2401_params();
  inst.tx_range = config.tx_range;
  inst.relay_budget = config.relay_budget < 0 ? config.relay_count : config.relay_budget;

  // Draw order is fixed: positions, rate specs, scenario rates, NLOS pairs.
  for (int i = 0; i < config.biosensor_count; ++i) {
    Biosensor b;
    b.id = padded_id("b", i, config.biosensor_count);
    b.position = config.biosensor_positions.empty() ? sample_position(rng, config)
                                                    : config.biosensor_positions[i];
    inst.biosensors.push_back(std::move(b));
  }
  for (int i = 0; i < config.sink_count; ++i) {
    Sink s;
    s.id = padded_id("s", i, config.sink_count);
    s.position =
        config.sink_positions.empty() ? sample_position(rng, config) : config.sink_positions[i];
    inst.sinks.push_back(std::move(s));
  }
  for (int i = 0; i < config.relay_count; ++i) {
    RelayCandidate r;
    r.id = padded_id("r", i, config.relay_count);
    r.position = sample_position(rng, config);
    r.capacity = config.relay_capacity;
    inst.relays.push_back(std::move(r));
  }

  // A random subset of biosensors transmits at a constant rate.
  const int constant_count =
      static_cast<int>(std::llround(config.constant_fraction * config.biosensor_count));
  std::vector<int> order(config.biosensor_count);
  std::iota(order.begin(), order.end(), 0);
  for (int i = config.biosensor_count - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }
  std::vector<bool> is_constant(config.biosensor_count, false);
  for (int k = 0; k < constant_count; ++k) is_constant[order[k]] = true;
  for (int i = 0; i < config.biosensor_count; ++i) {
    if (is_constant[i]) {
      const auto& choices = config.constant_rate_choices;
      const double rate =
          choices[rng.uniform_int(0, static_cast<int64_t>(choices.size()) - 1)];
      inst.biosensors[i].rate = ConstantRate{rate};
    } else {
      inst.biosensors[i].rate = VariableRate{config.variable_rate_lo, config.variable_rate_hi};
    }
  }

  // Every couple carries a demand; variable sensors draw one rate per
  // (scenario, sink), constant sensors repeat their rate.
  for (int k = 0; k < config.scenario_count; ++k) {
    Scenario sc;
    sc.id = padded_id("sigma", k, config.scenario_count);
    for (const auto& b : inst.biosensors) {
      for (const auto& s : inst.sinks) {
        double rate;
        if (const auto* c = std::get_if<ConstantRate>(&b.rate)) {
          rate = c->rate;
        } else {
          const auto& v = std::get<VariableRate>(b.rate);
          rate = rng.uniform(v.lo, v.hi);
        }
        sc.rates[{b.id, s.id}] = rate;
      }
    }
    inst.scenarios.push_back(std::move(sc));
  }

  // NLOS is drawn per unordered in-range device pair, in sorted id order.
  std::vector<std::pair<std::string, BodyPosition>> devices;
  for (const auto& b : inst.biosensors) devices.emplace_back(b.id, b.position);
  for (const auto& r : inst.relays) devices.emplace_back(r.id, r.position);
  for (const auto& s : inst.sinks) devices.emplace_back(s.id, s.position);
  std::sort(devices.begin(), devices.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  bool any_arc_possible = false;
  for (size_t i = 0; i < devices.size(); ++i) {
    for (size_t j = i + 1; j < devices.size(); ++j) {
      if (distance(devices[i].second, devices[j].second) > config.tx_range) continue;
      any_arc_possible = true;
      if (rng.uniform01() < config.p_nlos) {
        inst.nlos_pairs.insert({devices[i].first, devices[j].first});
      }
    }
  }
  if (!any_arc_possible) {
    throw GenerationError(
        "degenerate configuration: no device pair lies within the transmission range of " +
        std::to_string(config.tx_range) + " m");
  }

  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// Instance document (versioned, round-trip exact)
// ---------------------------------------------------------------------------

namespace {

constexpr int kFormatVersion = 1;

json position_to_json(const BodyPosition& p) {
  return json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

BodyPosition position_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
}

}  // namespace

void write_instance(const BanInstance& instance, std::ostream& out) {
  json j;
  j["format_version"] = kFormatVersion;
  j["tx_range"] = instance.tx_range;
  j["relay_budget"] = instance.relay_budget;

  json energy;
  energy["e_tx_circ"] = instance.energy.e_tx_circ;
  energy["e_rx_circ"] = instance.energy.e_rx_circ;
  energy["lambda_los"] = instance.energy.lambda_los;
  energy["lambda_nlos"] = instance.energy.lambda_nlos;
  energy["amp_table"] = json::array();
  for (const auto& [lambda, amp] : instance.energy.amp_table) {
    energy["amp_table"].push_back(json{{"lambda", lambda}, {"e_tx_amp", amp}});
  }
  j["energy"] = std::move(energy);

  j["biosensors"] = json::array();
  for (const auto& b : instance.biosensors) {
    json jb{{"id", b.id}, {"position", position_to_json(b.position)}};
    if (const auto* c = std::get_if<ConstantRate>(&b.rate)) {
      jb["rate"] = json{{"kind", "constant"}, {"rate", c->rate}};
    } else {
      const auto& v = std::get<VariableRate>(b.rate);
      jb["rate"] = json{{"kind", "variable"}, {"lo", v.lo}, {"hi", v.hi}};
    }
    j["biosensors"].push_back(std::move(jb));
  }
  j["sinks"] = json::array();
  for (const auto& s : instance.sinks) {
    j["sinks"].push_back(json{{"id", s.id}, {"position", position_to_json(s.position)}});
  }
  j["relays"] = json::array();
  for (const auto& r : instance.relays) {
    j["relays"].push_back(json{
        {"id", r.id}, {"position", position_to_json(r.position)}, {"capacity", r.capacity}});
  }
  j["scenarios"] = json::array();
  for (const auto& sc : instance.scenarios) {
    json rates = json::array();
    for (const auto& [couple, rate] : sc.rates) {
      rates.push_back(json{{"biosensor", couple.first}, {"sink", couple.second}, {"rate", rate}});
    }
    j["scenarios"].push_back(json{{"id", sc.id}, {"rates", std::move(rates)}});
  }
  j["nlos_pairs"] = json::array();
  for (const auto& [a, b] : instance.nlos_pairs) {
    j["nlos_pairs"].push_back(json::array({a, b}));
  }

  out << j.dump(2) << '\n';
}

BanInstance read_instance(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed instance document: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw ConfigError("unsupported instance format_version");
    }
    BanInstance inst;
    inst.tx_range = j.at("tx_range").get<double>();
    inst.relay_budget = j.at("relay_budget").get<int>();
    const json& energy = j.at("energy");
    inst.energy.e_tx_circ = energy.at("e_tx_circ").get<double>();
    inst.energy.e_rx_circ = energy.at("e_rx_circ").get<double>();
    inst.energy.lambda_los = energy.at("lambda_los").get<double>();
    inst.energy.lambda_nlos = energy.at("lambda_nlos").get<double>();
    for (const auto& row : energy.at("amp_table")) {
      inst.energy.amp_table[row.at("lambda").get<double>()] = row.at("e_tx_amp").get<double>();
    }
    for (const auto& jb : j.at("biosensors")) {
      Biosensor b;
      b.id = jb.at("id").get<std::string>();
      b.position = position_from_json(jb.at("position"));
      const json& rate = jb.at("rate");
      if (rate.at("kind").get<std::string>() == "constant") {
        b.rate = ConstantRate{rate.at("rate").get<double>()};
      } else {
        b.rate = VariableRate{rate.at("lo").get<double>(), rate.at("hi").get<double>()};
      }
      inst.biosensors.push_back(std::move(b));
    }
    for (const auto& js : j.at("sinks")) {
      inst.sinks.push_back(
          {js.at("id").get<std::string>(), position_from_json(js.at("position"))});
    }
    for (const auto& jr : j.at("relays")) {
      inst.relays.push_back({jr.at("id").get<std::string>(),
                             position_from_json(jr.at("position")),
                             jr.at("capacity").get<double>()});
    }
    for (const auto& jsc : j.at("scenarios")) {
      Scenario sc;
      sc.id = jsc.at("id").get<std::string>();
      for (const auto& row : jsc.at("rates")) {
        sc.rates[{row.at("biosensor").get<std::string>(), row.at("sink").get<std::string>()}] =
            row.at("rate").get<double>();
      }
      inst.scenarios.push_back(std::move(sc));
    }
    for (const auto& pair : j.at("nlos_pairs")) {
      inst.nlos_pairs.insert({pair.at(0).get<std::string>(), pair.at(1).get<std::string>()});
    }
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid instance document: ") + e.what());
  }
}

std::string instance_to_string(const BanInstance& instance) {
  std::ostringstream out;
  write_instance(instance, out);
  return out.str();
}

BanInstance instance_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

}  // namespace band
