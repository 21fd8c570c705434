#include "band/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "band/errors.hpp"
#include "json.hpp"

namespace band {

using nlohmann::json;

std::string variable_name(const VariableKey& key, const BanGraph& graph) {
  switch (key.kind) {
    case VariableKey::Kind::Flow:
      return "x[" + graph.id(key.b) + "," + graph.id(key.s) + "," + graph.id(key.i) + "," +
             graph.id(key.j) + "]";
    case VariableKey::Kind::Relay:
      return "y[" + graph.id(key.r) + "]";
    case VariableKey::Kind::EnergyBound:
      return "E";
  }
  throw ConfigError("unknown variable kind");
}

VariableKey parse_variable_name(const std::string& name, const BanGraph& graph) {
  if (name == "E") return VariableKey::energy_bound();
  auto parse_ids = [&](size_t prefix_len) {
    if (name.size() < prefix_len + 2 || name.back() != ']') {
      throw ConfigError("malformed variable name: " + name);
    }
    std::string inner = name.substr(prefix_len, name.size() - prefix_len - 1);
    std::vector<int> ids;
    size_t start = 0;
    while (true) {
      size_t comma = inner.find(',', start);
      std::string id = inner.substr(start, comma == std::string::npos ? comma : comma - start);
      int v = graph.vertex_index(id);
      if (v < 0) throw ConfigError("unknown vertex id '" + id + "' in variable " + name);
      ids.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return ids;
  };
  if (name.rfind("x[", 0) == 0) {
    auto ids = parse_ids(2);
    if (ids.size() != 4) throw ConfigError("flow variable needs 4 ids: " + name);
    return VariableKey::flow(ids[0], ids[1], ids[2], ids[3]);
  }
  if (name.rfind("y[", 0) == 0) {
    auto ids = parse_ids(2);
    if (ids.size() != 1) throw ConfigError("relay variable needs 1 id: " + name);
    return VariableKey::relay(ids[0]);
  }
  throw ConfigError("unknown variable name: " + name);
}

int32_t LinearProgram::add_variable(const VariableKey& key, std::string name, double lb, double ub,
                                    bool integral) {
  if (index_of.count(key) > 0) throw ConfigError("duplicate variable key: " + name);
  const int32_t index = static_cast<int32_t>(variables.size());
  variables.push_back({key, std::move(name), lb, ub, integral});
  index_of.emplace(key, index);
  return index;
}

int32_t LinearProgram::find(const VariableKey& key) const {
  auto it = index_of.find(key);
  return it == index_of.end() ? -1 : it->second;
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double v = 0;
  for (const auto& [j, c] : objective) v += c * x[j];
  return v;
}

double LinearProgram::row_activity(const ConstraintRow& row, std::span<const double> x) const {
  double v = 0;
  for (const auto& [j, c] : row.coeffs) v += c * x[j];
  return v;
}

double LinearProgram::row_violation(const ConstraintRow& row, std::span<const double> x) const {
  const double activity = row_activity(row, x);
  switch (row.sense) {
    case RowSense::LessEqual: return activity - row.rhs;
    case RowSense::GreaterEqual: return row.rhs - activity;
    case RowSense::Equal: return std::abs(activity - row.rhs);
  }
  return 0;
}

bool LinearProgram::satisfies(std::span<const double> x, double tol) const {
  for (size_t j = 0; j < variables.size(); ++j) {
    if (x[j] < variables[j].lb - tol || x[j] > variables[j].ub + tol) return false;
  }
  for (const auto& row : rows) {
    if (row_violation(row, x) > tol) return false;
  }
  return true;
}

void LinearProgram::validate() const {
  const int32_t n = static_cast<int32_t>(variables.size());
  for (const auto& v : variables) {
    if (v.lb > v.ub) throw ConfigError("variable " + v.name + " has lb > ub");
    if (v.integral && (v.lb < -0.0 || v.ub > 1.0)) {
      throw ConfigError("binary variable " + v.name + " must have bounds within [0,1]");
    }
  }
  auto check_coeffs = [&](const std::vector<std::pair<int32_t, double>>& coeffs,
                          const std::string& where) {
    for (const auto& [j, c] : coeffs) {
      if (j < 0 || j >= n) throw ConfigError("coefficient references unknown variable in " + where);
      if (!std::isfinite(c)) throw ConfigError("non-finite coefficient in " + where);
    }
  };
  for (const auto& row : rows) check_coeffs(row.coeffs, "row " + row.name);
  check_coeffs(objective, "objective");
}

const char* to_string(SolutionStatus status) {
  switch (status) {
    case SolutionStatus::Optimal: return "Optimal";
    case SolutionStatus::Feasible: return "Feasible";
    case SolutionStatus::Infeasible: return "Infeasible";
    case SolutionStatus::TimeLimit: return "TimeLimit";
    case SolutionStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

SolutionStatus solution_status_from_string(const std::string& s) {
  if (s == "Optimal") return SolutionStatus::Optimal;
  if (s == "Feasible") return SolutionStatus::Feasible;
  if (s == "Infeasible") return SolutionStatus::Infeasible;
  if (s == "TimeLimit") return SolutionStatus::TimeLimit;
  if (s == "Unbounded") return SolutionStatus::Unbounded;
  throw ConfigError("unknown solution status: " + s);
}

Solution make_solution(const LinearProgram& lp, std::span<const double> x, double objective,
                       SolutionStatus status) {
  Solution sol;
  sol.objective = objective;
  sol.status = status;
  for (size_t j = 0; j < lp.variables.size(); ++j) {
    if (x[j] != 0.0) sol.values[lp.variables[j].key] = x[j];
  }
  return sol;
}

std::vector<double> dense_values(const LinearProgram& lp, const Solution& solution) {
  std::vector<double> x(lp.variables.size(), 0.0);
  for (const auto& [key, value] : solution.values) {
    const int32_t j = lp.find(key);
    if (j >= 0) x[j] = value;
  }
  return x;
}

namespace {

std::string lp_safe_name(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == '[' || c == ']' || c == ',') c = '_';
  }
  return out;
}

void write_lp_terms(std::ostream& out, const LinearProgram& lp,
                    const std::vector<std::pair<int32_t, double>>& coeffs) {
  bool first = true;
  int on_line = 0;
  for (const auto& [j, c] : coeffs) {
    if (c == 0.0) continue;
    std::ostringstream term;
    if (first) {
      if (c < 0) term << "- ";
    } else {
      term << (c < 0 ? "- " : "+ ");
    }
    const double mag = std::abs(c);
    if (mag != 1.0) term << mag << " ";
    term << lp_safe_name(lp.variables[j].name);
    out << (first ? "" : " ") << term.str();
    first = false;
    if (++on_line % 8 == 0) out << "\n   ";
  }
  if (first) out << "0";
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
  out << "\\ " << lp.variables.size() << " variables, " << lp.rows.size() << " rows\n";
  out << "Minimize\n obj: ";
  write_lp_terms(out, lp, lp.objective);
  out << "\nSubject To\n";
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    out << " " << (row.name.empty() ? "c" + std::to_string(i) : lp_safe_name(row.name)) << ": ";
    write_lp_terms(out, lp, row.coeffs);
    switch (row.sense) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (const auto& v : lp.variables) {
    // Binaries appear here only when their bounds were tightened (fixings).
    if (v.integral && v.lb == 0.0 && v.ub == 1.0) continue;
    out << " ";
    if (v.lb == v.ub) {
      out << lp_safe_name(v.name) << " = " << v.lb << "\n";
      continue;
    }
    if (v.lb == -kInf) {
      out << "-inf <= ";
    } else if (v.lb != 0.0) {
      out << v.lb << " <= ";
    }
    out << lp_safe_name(v.name);
    if (v.ub != kInf) out << " <= " << v.ub;
    out << "\n";
  }
  bool any_binary = false;
  for (const auto& v : lp.variables) {
    if (v.integral) {
      if (!any_binary) out << "Binaries\n";
      any_binary = true;
      out << " " << lp_safe_name(v.name) << "\n";
    }
  }
  out << "End\n";
}

constexpr int kSolutionFormatVersion = 1;

void write_solution(const Solution& solution, const BanGraph& graph, std::ostream& out) {
  json j;
  j["format_version"] = kSolutionFormatVersion;
  j["status"] = to_string(solution.status);
  j["objective"] = solution.objective;
  json values = json::object();
  for (const auto& [key, value] : solution.values) {
    values[variable_name(key, graph)] = value;
  }
  j["values"] = std::move(values);
  out << j.dump(2) << '\n';
}

Solution read_solution(std::istream& in, const BanGraph& graph) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed solution document: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kSolutionFormatVersion) {
      throw ConfigError("unsupported solution format_version");
    }
    Solution sol;
    sol.status = solution_status_from_string(j.at("status").get<std::string>());
    sol.objective = j.at("objective").get<double>();
    for (const auto& [name, value] : j.at("values").items()) {
      sol.values[parse_variable_name(name, graph)] = value.get<double>();
    }
    return sol;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid solution document: ") + e.what());
  }
}

}  // namespace band
