#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smbp {

enum class RowSense { LE, EQ, GE };
enum class ObjSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, IterLimit };
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

/// Thrown when a basis stays numerically unusable even after refreshes and
/// a Bland-rule restart.  Callers that can live with the last valid bound
/// (cutting plane loops) may catch this; others should treat it as fatal.
struct LpNumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * A linear program over bounded variables.  Rows and columns can be appended
 * after a solve; an existing basis stays usable as a warm start (new columns
 * enter nonbasic at a bound, new rows enter with their slack basic).
 */
struct LpProblem {
  ObjSense sense = ObjSense::Minimize;

  std::vector<double> obj;
  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, coeff)
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;

  int num_cols() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  // returns the new column index; entries reference existing rows
  int add_column(double objective, double lower, double upper,
                 const std::vector<std::pair<int, double>>& entries = {});

  // returns the new row index; entries reference existing columns
  int add_row(RowSense sense, double rhs_value,
              const std::vector<std::pair<int, double>>& entries = {});

  void set_bounds(int col, double lower, double upper);
  void set_objective(int col, double objective);

  // human readable dump: one line per row plus bounds, for debugging
  std::string dump() const;
};

/**
 * Basis snapshot.  Layout: one status per structural column followed by one
 * per row slack, together with the shape it was taken from so that a grown
 * problem can remap it.
 */
struct Basis {
  std::vector<VarStatus> status;
  int n_cols = 0;
  int n_rows = 0;

  bool empty() const { return status.empty(); }
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  long max_iters = -1;  // < 0: use 50 * (rows + cols)
  int refactor_every = 100;
};

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0.0;
  std::vector<double> x;              // structural values
  std::vector<double> duals;          // one multiplier per row
  std::vector<double> reduced_costs;  // structural reduced costs
  Basis basis;
  long iterations = 0;
};

/**
 * Two phase primal simplex for bounded variables with a dense explicit
 * basis inverse, refactorized periodically.  Pricing is Dantzig and falls
 * back to Bland's rule after 3 * (rows + cols) degenerate pivots; a
 * numerical failure triggers one full re-solve under Bland's rule.  A warm
 * basis that is stale or primal infeasible is repaired by the phase 1.
 * Throws std::runtime_error on an unbounded ray (the solvers in this
 * project only build bounded models).
 */
LpSolution solve_lp(const LpProblem& problem, const Basis* warm = nullptr,
                    const SimplexOptions& options = {});

}  // namespace smbp
