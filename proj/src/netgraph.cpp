#include "band/netgraph.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

namespace band {

const char* to_string(ArcClass cls) {
  switch (cls) {
    case ArcClass::BiosensorToSink: return "B->S";
    case ArcClass::BiosensorToRelay: return "B->R";
    case ArcClass::RelayToRelay: return "R<->R";
    case ArcClass::RelayToSink: return "R->S";
  }
  return "?";
}

double energy_coefficient(double delta, double lambda, const EnergyParams& params) {
  return energy_tx(1.0, delta, lambda, params) + energy_rx(1.0, params);
}

int BanGraph::vertex_index(const std::string& id) const {
  for (int v = 0; v < vertex_count(); ++v) {
    if (vertex_ids[v] == id) return v;
  }
  return -1;
}

BanGraph build_graph(const BanInstance& instance) {
  instance.validate();
  BanGraph g;
  g.biosensor_count = static_cast<int>(instance.biosensors.size());
  g.relay_count = static_cast<int>(instance.relays.size());
  g.sink_count = static_cast<int>(instance.sinks.size());

  // Vertex order: biosensors, relays, sinks, each sorted by id.
  std::vector<const Biosensor*> bios;
  for (const auto& b : instance.biosensors) bios.push_back(&b);
  std::sort(bios.begin(), bios.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<const RelayCandidate*> relays;
  for (const auto& r : instance.relays) relays.push_back(&r);
  std::sort(relays.begin(), relays.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<const Sink*> sinks;
  for (const auto& s : instance.sinks) sinks.push_back(&s);
  std::sort(sinks.begin(), sinks.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::vector<BodyPosition> positions;
  for (const auto* b : bios) g.vertex_ids.push_back(b->id), positions.push_back(b->position);
  for (const auto* r : relays) g.vertex_ids.push_back(r->id), positions.push_back(r->position);
  for (const auto* s : sinks) g.vertex_ids.push_back(s->id), positions.push_back(s->position);

  const int n = g.vertex_count();
  g.out_arcs.assign(n, {});
  g.in_arcs.assign(n, {});

  auto add_arc = [&](int tail, int head, ArcClass cls) {
    const double delta = distance(positions[tail], positions[head]);
    if (delta > instance.tx_range) return;  // closed ball: equality is in range
    const double lambda = instance.is_nlos(g.id(tail), g.id(head))
                              ? instance.energy.lambda_nlos
                              : instance.energy.lambda_los;
    Arc arc;
    arc.tail = tail;
    arc.head = head;
    arc.cls = cls;
    arc.delta = delta;
    arc.lambda = lambda;
    arc.e_coeff = energy_coefficient(delta, lambda, instance.energy);
    g.arcs.push_back(arc);
  };

  // Arc order follows tail-major vertex order, heads ascending per class.
  for (int b = 0; b < g.biosensor_count; ++b) {
    for (int s = g.first_sink(); s < n; ++s) add_arc(b, s, ArcClass::BiosensorToSink);
    for (int r = g.first_relay(); r < g.first_sink(); ++r) {
      add_arc(b, r, ArcClass::BiosensorToRelay);
    }
  }
  for (int r = g.first_relay(); r < g.first_sink(); ++r) {
    for (int r2 = g.first_relay(); r2 < g.first_sink(); ++r2) {
      if (r2 != r) add_arc(r, r2, ArcClass::RelayToRelay);
    }
    for (int s = g.first_sink(); s < n; ++s) add_arc(r, s, ArcClass::RelayToSink);
  }
  std::sort(g.arcs.begin(), g.arcs.end(), [](const Arc& a, const Arc& b) {
    return a.tail != b.tail ? a.tail < b.tail : a.head < b.head;
  });
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    g.out_arcs[g.arcs[a].tail].push_back(a);
    g.in_arcs[g.arcs[a].head].push_back(a);
  }

  // Reachability of every couple with positive demand in some scenario.
  for (const auto& b : instance.biosensors) {
    for (const auto& s : instance.sinks) {
      bool positive = false;
      for (const auto& sc : instance.scenarios) {
        if (instance.rate(sc, b.id, s.id) > 0) {
          positive = true;
          break;
        }
      }
      if (!positive) continue;
      const int bv = g.vertex_index(b.id);
      const int sv = g.vertex_index(s.id);
      std::vector<bool> seen(n, false);
      std::deque<int> queue{bv};
      seen[bv] = true;
      bool reached = false;
      while (!queue.empty() && !reached) {
        const int v = queue.front();
        queue.pop_front();
        for (int a : g.out_arcs[v]) {
          const Arc& arc = g.arcs[a];
          // Only sink s terminates this couple; other sinks absorb nothing.
          if (g.is_sink(arc.head) && arc.head != sv) continue;
          if (arc.head == sv) {
            reached = true;
            break;
          }
          if (!seen[arc.head]) {
            seen[arc.head] = true;
            queue.push_back(arc.head);
          }
        }
      }
      if (!reached) g.unreachable_couples.emplace_back(b.id, s.id);
    }
  }
  return g;
}

void write_arc_dump(const BanGraph& graph, std::ostream& out) {
  out << "tail\thead\tclass\tdelta_m\tlambda\te_coeff_nj_per_bit\n";
  for (const Arc& a : graph.arcs) {
    out << graph.id(a.tail) << '\t' << graph.id(a.head) << '\t' << to_string(a.cls) << '\t'
        << a.delta << '\t' << a.lambda << '\t' << a.e_coeff << '\n';
  }
}

}  // namespace band
