#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "band/linear_program.hpp"
#include "band/work.hpp"

namespace band {

enum class LpStatus : uint8_t { Optimal, IterationLimit, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpOptions {
  /// Overall simplex iteration cap; negative means unlimited.
  int64_t max_iterations = -1;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  /// Truncated mode: stop after truncated_cap iterations and report the best
  /// dual bound found, trading optimality for speed.
  bool truncated = false;
  int64_t truncated_cap = 5000;
  /// Shared deterministic work meter; solve stops with IterationLimit when
  /// the deadline passes. Optional.
  WorkMeter* work = nullptr;
  uint64_t work_deadline = WorkMeter::kNoLimit;
};

/// Nonbasic/basic status of one variable, part of a simplex basis.
enum class VarStatus : uint8_t { Basic, AtLower, AtUpper, NonbasicFree };

/// A resumable basis snapshot over structural + slack variables.
struct SimplexBasis {
  std::vector<VarStatus> status;
};

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  /// Objective of the returned point; +inf when no primal-feasible point was
  /// reached before truncation.
  double objective = 0;
  /// Dense primal values over lp.variables.
  std::vector<double> values;
  /// Lagrangian lower bound, valid for the (relaxed) program at any exit;
  /// -inf when nothing better is known.
  double dual_bound = 0;
  bool primal_feasible = false;
  int64_t iterations = 0;
  /// Final basis, resumable via LpOptions-independent warm start.
  SimplexBasis basis;

  Solution to_solution(const LinearProgram& lp) const;
};

/// Solves the LP relaxation of the program (integrality flags ignored) with a
/// revised primal simplex over bounded variables. Deterministic: identical
/// inputs produce bitwise-identical results.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts);

/// As solve_lp, starting from a previous basis when compatible.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts,
                  const std::optional<SimplexBasis>& warm_start);

}  // namespace band
