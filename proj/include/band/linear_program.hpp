#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "band/netgraph.hpp"

namespace band {

/// Symbolic identity of a decision variable. Flow(b,s,i,j) is the
/// unsplittable flow variable of couple (b,s) on arc (i,j); Relay(r) the
/// deployment variable of relay vertex r; EnergyBound the worst-case energy
/// variable of the robust counterpart. Indices are graph vertex indices.
///
/// Ordering is Relay < Flow < EnergyBound, then lexicographic on the fields;
/// branching tie-breaks rely on deployment variables coming first.
struct VariableKey {
  enum class Kind : uint8_t { Relay = 0, Flow = 1, EnergyBound = 2 };

  Kind kind = Kind::EnergyBound;
  int32_t b = -1, s = -1, i = -1, j = -1, r = -1;

  static VariableKey flow(int b, int s, int i, int j) {
    VariableKey k;
    k.kind = Kind::Flow;
    k.b = b, k.s = s, k.i = i, k.j = j;
    return k;
  }
  static VariableKey relay(int r) {
    VariableKey k;
    k.kind = Kind::Relay;
    k.r = r;
    return k;
  }
  static VariableKey energy_bound() { return VariableKey{}; }

  friend auto operator<=>(const VariableKey&, const VariableKey&) = default;
};

/// Display name, e.g. "x[b0,s0,b0,r1]", "y[r1]", "E".
std::string variable_name(const VariableKey& key, const BanGraph& graph);
/// Inverse of variable_name; throws ConfigError on unknown names.
VariableKey parse_variable_name(const std::string& name, const BanGraph& graph);

struct Variable {
  VariableKey key;
  std::string name;
  double lb = 0;
  double ub = 0;
  bool integral = false;
};

enum class RowSense : uint8_t { LessEqual, Equal, GreaterEqual };

struct ConstraintRow {
  std::string name;
  std::vector<std::pair<int32_t, double>> coeffs;  // (variable index, coefficient)
  RowSense sense = RowSense::LessEqual;
  double rhs = 0;
};

/// Generic minimization program over named variables.
struct LinearProgram {
  std::vector<Variable> variables;
  std::vector<ConstraintRow> rows;
  std::vector<std::pair<int32_t, double>> objective;  // sparse, minimize

  std::map<VariableKey, int32_t> index_of;

  int32_t add_variable(const VariableKey& key, std::string name, double lb, double ub,
                       bool integral);
  /// Variable index for a key, or -1.
  int32_t find(const VariableKey& key) const;

  double objective_value(std::span<const double> x) const;
  double row_activity(const ConstraintRow& row, std::span<const double> x) const;
  /// Signed violation of a row: positive when the row is broken.
  double row_violation(const ConstraintRow& row, std::span<const double> x) const;
  /// True when every row and every bound holds within tol (absolute).
  bool satisfies(std::span<const double> x, double tol) const;

  /// Structural sanity (bounds ordered, coefficient indices valid, binaries
  /// in [0,1]); throws ConfigError on violation.
  void validate() const;
};

enum class SolutionStatus : uint8_t { Optimal, Feasible, Infeasible, TimeLimit, Unbounded };

const char* to_string(SolutionStatus status);
SolutionStatus solution_status_from_string(const std::string& s);

/// A (candidate) solution: variable assignment, objective and status.
struct Solution {
  std::map<VariableKey, double> values;
  double objective = 0;
  SolutionStatus status = SolutionStatus::Infeasible;

  double value(const VariableKey& key) const {
    auto it = values.find(key);
    return it == values.end() ? 0.0 : it->second;
  }
};

/// Builds a Solution from a dense assignment over lp.variables. Zero values
/// are dropped; the map stays sparse and readable.
Solution make_solution(const LinearProgram& lp, std::span<const double> x, double objective,
                       SolutionStatus status);

/// Dense view of a Solution in lp variable order (missing keys become 0).
std::vector<double> dense_values(const LinearProgram& lp, const Solution& solution);

/// Industry-conventional row-based LP text export (CPLEX LP file format).
void write_lp_format(const LinearProgram& lp, std::ostream& out);

/// Versioned solution document: variable/value pairs, objective, status.
void write_solution(const Solution& solution, const BanGraph& graph, std::ostream& out);
Solution read_solution(std::istream& in, const BanGraph& graph);

}  // namespace band
