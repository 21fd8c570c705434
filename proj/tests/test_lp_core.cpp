#include "band/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <vector>

#include "band/rng.hpp"
#include "doctest.h"

using namespace band;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Anonymous continuous variable for hand-built programs.
int add_var(LinearProgram& lp, const std::string& name, double lb, double ub) {
  VariableKey key = VariableKey::flow(0, 0, 0, static_cast<int>(lp.variables.size()));
  return lp.add_variable(key, name, lb, ub, false);
}

// ---------------------------------------------------------------------------
// Vertex-enumeration oracle. A bounded LP attains its optimum at a point
// where n linearly independent constraints (bounds or rows) are active.
// Enumerate all n-subsets of candidate equalities, solve the square system,
// keep feasible points, take the best objective. Written against the original
// row/bound formulation, fully independent of the simplex implementation.
// ---------------------------------------------------------------------------

struct OracleOutcome {
  bool feasible = false;
  double objective = 0;
};

bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    double best = 1e-9;
    for (int i = k; i < n; ++i) {
      if (std::abs(a[i][k]) > best) {
        best = std::abs(a[i][k]);
        pivot = i;
      }
    }
    if (pivot < 0) return false;
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (int c = k; c < n; ++c) a[i][c] -= f * a[k][c];
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    double v = b[k];
    for (int c = k + 1; c < n; ++c) v -= a[k][c] * x[c];
    x[k] = v / a[k][k];
  }
  return true;
}

OracleOutcome enumerate_optimum(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.variables.size());
  // Candidate active equalities: every finite bound and every row.
  struct Candidate {
    std::vector<double> coeffs;
    double rhs;
  };
  std::vector<Candidate> cands;
  for (int j = 0; j < n; ++j) {
    const auto& v = lp.variables[j];
    if (v.lb > -kInf) {
      Candidate c{std::vector<double>(n, 0.0), v.lb};
      c.coeffs[j] = 1.0;
      cands.push_back(std::move(c));
    }
    if (v.ub < kInf && v.ub != v.lb) {
      Candidate c{std::vector<double>(n, 0.0), v.ub};
      c.coeffs[j] = 1.0;
      cands.push_back(std::move(c));
    }
  }
  for (const auto& row : lp.rows) {
    Candidate c{std::vector<double>(n, 0.0), row.rhs};
    for (const auto& [j, coeff] : row.coeffs) c.coeffs[j] += coeff;
    cands.push_back(std::move(c));
  }

  OracleOutcome out;
  out.objective = kInf;
  std::vector<int> pick(n);
  const int total = static_cast<int>(cands.size());

  std::vector<int> stack;
  // Iterative enumeration of all n-subsets of candidates.
  std::vector<int> idx(n, 0);
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int k = 0; k < n; ++k) {
        a.push_back(cands[idx[k]].coeffs);
        b.push_back(cands[idx[k]].rhs);
      }
      std::vector<double> x;
      if (!solve_square(std::move(a), std::move(b), x)) return;
      if (!lp.satisfies(x, 1e-7)) return;
      const double obj = lp.objective_value(x);
      if (!out.feasible || obj < out.objective) {
        out.feasible = true;
        out.objective = obj;
      }
      return;
    }
    for (int c = start; c <= total - (n - depth); ++c) {
      idx[depth] = c;
      rec(depth + 1, c + 1);
    }
  };
  rec(0, 0);
  return out;
}

LinearProgram random_lp(Rng& rng, int n_vars, int n_rows) {
  LinearProgram lp;
  for (int j = 0; j < n_vars; ++j) {
    const double lb = rng.uniform(-3.0, 0.0);
    const double ub = lb + rng.uniform(0.5, 4.0);
    add_var(lp, "v" + std::to_string(j), lb, ub);
    lp.objective.emplace_back(j, rng.uniform(-2.0, 2.0));
  }
  for (int i = 0; i < n_rows; ++i) {
    ConstraintRow row;
    row.name = "r" + std::to_string(i);
    for (int j = 0; j < n_vars; ++j) {
      if (rng.uniform01() < 0.7) row.coeffs.emplace_back(j, rng.uniform(-2.0, 2.0));
    }
    if (row.coeffs.empty()) row.coeffs.emplace_back(0, 1.0);
    const double pick = rng.uniform01();
    row.sense = pick < 0.45   ? RowSense::LessEqual
                : pick < 0.9 ? RowSense::GreaterEqual
                              : RowSense::Equal;
    row.rhs = rng.uniform(-2.0, 2.0);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

}  // namespace

TEST_CASE("one-variable program: min x subject to x >= 3") {
  LinearProgram lp;
  add_var(lp, "x", 0.0, 10.0);
  lp.objective = {{0, 1.0}};
  lp.rows.push_back({"lb", {{0, 1.0}}, RowSense::GreaterEqual, 3.0});
  const LpResult res = solve_lp(lp, {});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(res.values[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(res.dual_bound <= res.objective + 1e-9);
}

TEST_CASE("equality row is handled natively") {
  LinearProgram lp;
  add_var(lp, "x", 0.0, 1.0);
  add_var(lp, "y", 0.0, 1.0);
  lp.objective = {{0, 2.0}, {1, 3.0}};
  lp.rows.push_back({"sum", {{0, 1.0}, {1, 1.0}}, RowSense::Equal, 1.0});
  const LpResult res = solve_lp(lp, {});
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-9));  // all weight on x
}

TEST_CASE("infeasible and unbounded statuses") {
  LinearProgram infeas;
  add_var(infeas, "x", 0.0, 1.0);
  infeas.objective = {{0, 1.0}};
  infeas.rows.push_back({"", {{0, 1.0}}, RowSense::GreaterEqual, 2.0});
  CHECK(solve_lp(infeas, {}).status == LpStatus::Infeasible);

  LinearProgram unb;
  add_var(unb, "x", 0.0, kInf);
  unb.objective = {{0, -1.0}};
  unb.rows.push_back({"", {{0, 1.0}}, RowSense::GreaterEqual, 0.0});
  CHECK(solve_lp(unb, {}).status == LpStatus::Unbounded);
}

TEST_CASE("random programs match the vertex-enumeration oracle") {
  Rng rng(20240901);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));  // 2..5 variables
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 2));  // 1..3 rows
    LinearProgram lp = random_lp(rng, n, m);
    const OracleOutcome oracle = enumerate_optimum(lp);
    const LpResult res = solve_lp(lp, {});
    if (oracle.feasible) {
      REQUIRE_MESSAGE(res.status == LpStatus::Optimal, "trial ", trial);
      CHECK_MESSAGE(res.objective ==
                        doctest::Approx(oracle.objective).epsilon(1e-6).scale(1.0),
                    "trial ", trial);
      CHECK(res.dual_bound <= res.objective + 1e-6);
      ++solved;
    } else {
      CHECK_MESSAGE(res.status == LpStatus::Infeasible, "trial ", trial);
    }
  }
  CHECK(solved > 20);  // the suite must exercise plenty of feasible programs
}

TEST_CASE("deterministic: same program solved twice is bitwise identical") {
  Rng rng(7);
  LinearProgram lp = random_lp(rng, 5, 3);
  const LpResult a = solve_lp(lp, {});
  const LpResult b = solve_lp(lp, {});
  CHECK(a.status == b.status);
  CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::memcmp(&a.values[i], &b.values[i], sizeof(double)) == 0);
  }
}

TEST_CASE("iteration limit reports a valid dual bound") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    LinearProgram lp = random_lp(rng, 5, 3);
    const OracleOutcome oracle = enumerate_optimum(lp);
    if (!oracle.feasible) continue;
    LpOptions truncated;
    truncated.truncated = true;
    truncated.truncated_cap = 2;
    const LpResult res = solve_lp(lp, truncated);
    if (res.status == LpStatus::IterationLimit) {
      CHECK(res.dual_bound <= oracle.objective + 1e-6);
      CHECK(res.dual_bound <= res.objective + 1e-9);
    }
  }
}

TEST_CASE("warm start reaches the same optimum") {
  Rng rng(41);
  LinearProgram lp = random_lp(rng, 5, 3);
  const LpResult cold = solve_lp(lp, {});
  if (cold.status != LpStatus::Optimal) return;
  // Tighten one variable and resume from the previous basis.
  lp.variables[0].ub = lp.variables[0].lb;
  const LpResult warm = solve_lp(lp, {}, cold.basis);
  const LpResult fresh = solve_lp(lp, {});
  CHECK(warm.status == fresh.status);
  if (warm.status == LpStatus::Optimal) {
    CHECK(warm.objective == doctest::Approx(fresh.objective).epsilon(1e-8));
  }
}
