#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "band/errors.hpp"

namespace band {

/// Cartesian position of a device on/in the body, in meters.
struct BodyPosition {
  double x = 0, y = 0, z = 0;
  friend bool operator==(const BodyPosition&, const BodyPosition&) = default;
};

double distance(const BodyPosition& a, const BodyPosition& b);

/// Transceiver energy model. Circuit energies and the amplifier energy table
/// are in nJ/bit; the table is keyed by path-loss exponent.
struct EnergyParams {
  double e_tx_circ = 0;
  double e_rx_circ = 0;
  std::map<double, double> amp_table;
  double lambda_los = 0;
  double lambda_nlos = 0;

  /// Amplifier energy for a known exponent; unknown exponents are a
  /// configuration error.
  double amp_energy(double lambda) const;

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

/// Parameters of the Nordic nRF2401 transceiver with the LOS/NLOS path-loss
/// exponents used throughout the experiments.
EnergyParams nrf2401_params();

struct ConstantRate {
  double rate = 0;  // bit/s
  friend bool operator==(const ConstantRate&, const ConstantRate&) = default;
};

struct VariableRate {
  double lo = 0, hi = 0;  // bit/s
  friend bool operator==(const VariableRate&, const VariableRate&) = default;
};

using RateSpec = std::variant<ConstantRate, VariableRate>;

struct Biosensor {
  std::string id;
  BodyPosition position;
  RateSpec rate;
  friend bool operator==(const Biosensor&, const Biosensor&) = default;
};

struct Sink {
  std::string id;
  BodyPosition position;
  friend bool operator==(const Sink&, const Sink&) = default;
};

struct RelayCandidate {
  std::string id;
  BodyPosition position;
  double capacity = 0;  // bit/s
  friend bool operator==(const RelayCandidate&, const RelayCandidate&) = default;
};

/// One complete realization of the bitrates of every biosensor-sink couple.
struct Scenario {
  std::string id;
  std::map<std::pair<std::string, std::string>, double> rates;  // (b,s) -> bit/s
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A robust BAN design instance: devices, energy model, transmission range,
/// relay budget and the scenario set.
struct BanInstance {
  std::vector<Biosensor> biosensors;
  std::vector<Sink> sinks;
  std::vector<RelayCandidate> relays;
  EnergyParams energy;
  double tx_range = 0;   // meters
  int relay_budget = 0;  // max deployable relays (U)
  std::vector<Scenario> scenarios;
  /// Unordered device pairs with non-line-of-sight propagation; pairs are
  /// stored with the lexicographically smaller id first. Absent pairs are LOS.
  std::set<std::pair<std::string, std::string>> nlos_pairs;

  bool is_nlos(const std::string& a, const std::string& b) const;
  double rate(const Scenario& sc, const std::string& b, const std::string& s) const;

  /// Throws ConfigError when any structural invariant is broken.
  void validate() const;

  friend bool operator==(const BanInstance&, const BanInstance&) = default;
};

/// Energy to transmit v bits over distance delta with path-loss exponent
/// lambda: circuit term plus amplifier term.
double energy_tx(double v, double delta, double lambda, const EnergyParams& params);

/// Energy to receive v bits: circuit term only.
double energy_rx(double v, const EnergyParams& params);

/// Random-instance generator configuration. Defaults mirror the reference
/// experimental setup: 16 biosensors, 2 sinks, 400 candidate relay sites,
/// 0.3 m transmission range, 250 kbit/s relay capacity, 25 scenarios, half of
/// the biosensors at a constant rate from {100,150,200} bit/s and the rest
/// variable in [100,200] bit/s.
struct GeneratorConfig {
  int biosensor_count = 16;
  int sink_count = 2;
  int relay_count = 400;
  int scenario_count = 25;
  double tx_range = 0.3;
  double relay_capacity = 250'000.0;
  /// Relay budget; negative means "equal to relay_count" (non-binding).
  int relay_budget = -1;
  double constant_fraction = 0.5;
  std::vector<double> constant_rate_choices = {100.0, 150.0, 200.0};
  double variable_rate_lo = 100.0;
  double variable_rate_hi = 200.0;
  /// Probability that an unordered device pair is NLOS.
  double p_nlos = 0.3;
  /// Body bounding box (meters); relays are sampled uniformly inside it.
  double box_x = 0.5, box_y = 0.4, box_z = 1.5;
  /// Optional fixed positions; when empty, positions are sampled in the box.
  std::vector<BodyPosition> biosensor_positions;
  std::vector<BodyPosition> sink_positions;

  void validate() const;
};

/// Deterministically generates an instance from (config, seed). The same pair
/// always yields a byte-identical instance file.
BanInstance generate_instance(const GeneratorConfig& config, uint64_t seed);

/// Self-describing versioned instance document. read(write(x)) == x exactly.
void write_instance(const BanInstance& instance, std::ostream& out);
BanInstance read_instance(std::istream& in);
std::string instance_to_string(const BanInstance& instance);
BanInstance instance_from_string(const std::string& text);

}  // namespace band
