#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "band/instance.hpp"

namespace band {

enum class VertexKind : uint8_t { Biosensor, Relay, Sink };

enum class ArcClass : uint8_t {
  BiosensorToSink,
  BiosensorToRelay,
  RelayToRelay,
  RelayToSink,
};

const char* to_string(ArcClass cls);

/// Directional wireless link with its precomputed per-bit energy coefficient.
struct Arc {
  int tail = -1;
  int head = -1;
  ArcClass cls = ArcClass::BiosensorToSink;
  double delta = 0;    // meters
  double lambda = 0;   // path-loss exponent
  double e_coeff = 0;  // nJ/bit, transmit + receive for one bit
};

/// Total per-bit energy of a link: [e_tx_circ + e_tx_amp(lambda)*delta^lambda]
/// + e_rx_circ.
double energy_coefficient(double delta, double lambda, const EnergyParams& params);

/// Directed BAN graph. Vertices are indexed contiguously: biosensors first,
/// then relay candidates, then sinks, each group sorted by id. Biosensors
/// have no in-arcs and sinks no out-arcs.
struct BanGraph {
  std::vector<std::string> vertex_ids;
  int biosensor_count = 0;
  int relay_count = 0;
  int sink_count = 0;

  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out_arcs;  // per vertex, ascending arc index
  std::vector<std::vector<int>> in_arcs;

  /// Positive-demand couples (biosensor id, sink id) with no connecting path.
  std::vector<std::pair<std::string, std::string>> unreachable_couples;

  int vertex_count() const { return static_cast<int>(vertex_ids.size()); }
  VertexKind kind(int v) const {
    if (v < biosensor_count) return VertexKind::Biosensor;
    if (v < biosensor_count + relay_count) return VertexKind::Relay;
    return VertexKind::Sink;
  }
  bool is_biosensor(int v) const { return kind(v) == VertexKind::Biosensor; }
  bool is_relay(int v) const { return kind(v) == VertexKind::Relay; }
  bool is_sink(int v) const { return kind(v) == VertexKind::Sink; }
  int first_relay() const { return biosensor_count; }
  int first_sink() const { return biosensor_count + relay_count; }
  /// Relay ordinal in [0, relay_count) for a relay vertex.
  int relay_ordinal(int v) const { return v - biosensor_count; }
  int relay_vertex(int ordinal) const { return biosensor_count + ordinal; }
  const std::string& id(int v) const { return vertex_ids[v]; }
  /// Index lookup by id; returns -1 when unknown.
  int vertex_index(const std::string& id) const;
};

/// Builds the graph from an instance: one arc per in-range ordered device
/// pair allowed by the transmit-only/receive-only rules, with E_ij attached.
/// Unreachable positive-demand couples are reported, not fatal.
BanGraph build_graph(const BanInstance& instance);

/// Debug dump: one arc per line (tail, head, class, delta, lambda, E_ij).
void write_arc_dump(const BanGraph& graph, std::ostream& out);

}  // namespace band
