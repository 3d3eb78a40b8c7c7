#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "itbound/rational.hpp"
#include "itbound/sparse_lu.hpp"

namespace itbound {

/// min cost . x  subject to  row_k . x (>= | =) rhs_k,  x >= 0.
/// All costs must be nonnegative, so the dual always has a feasible slack basis.
struct LpData {
  int num_cols = 0;
  std::vector<SparseVector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<bool> equality;
  std::vector<Rational> cost;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;              // primal values per column
  std::vector<Rational> row_duals;      // >= 0 on inequality rows
  std::vector<Rational> reduced_costs;  // duals of x >= 0, all >= 0
  /// How the exact answer was obtained: "rationalized", "exact-basis" or "exact-simplex".
  const char* route = "";
  long float_iterations = 0;
  long exact_iterations = 0;
};

struct SimplexOptions {
  bool use_float_presolve = true;
  std::uint64_t perturbation_seed = 0x5eed;
  long max_float_iterations = 2'000'000;
  /// Denominator cap for continued-fraction recovery of floating solutions.
  double max_denominator = 1e12;
};

/// Solves the LP exactly. The floating pre-solve only proposes a basis; the
/// returned value, primal point and duals are exact and satisfy primal and
/// dual feasibility with equal objectives.
LpSolution solve_lp(const LpData& lp, const SimplexOptions& options = {});

/// Exact check of the optimality conditions of `s` against `lp`.
bool check_optimal(const LpData& lp, const LpSolution& s);

namespace simplex_detail {

/// Dual problem D of an LpData, in equality form:
///   maximize obj . z  subject to  sum_v column_v z_v = rhs,  z >= 0,
/// whose variables are y+ per row, y- per equality row, and one slack per
/// primal column. rhs is the primal cost vector.
template <class T>
struct DualForm {
  int m = 0;
  std::vector<SparseVector<T>> columns;
  std::vector<T> obj;
  std::vector<T> rhs;
  std::vector<int> source_row;  // -1 for slacks
  std::vector<int> sign;        // +1 / -1 for row duals
  int first_slack = 0;
};

template <class T>
DualForm<T> make_dual_form(const LpData& lp);

enum class Outcome { optimal, unbounded, infeasible, failed };

/// Revised simplex on a DualForm, templated on the scalar. With double it
/// prices by normalized Dantzig and uses Harris ratio tests; with Rational it
/// uses Bland's rule and exact ratios, which guarantees termination.
template <class T>
class RevisedSimplex {
 public:
  explicit RevisedSimplex(const DualForm<T>& form);
  ~RevisedSimplex();

  bool set_basis(const std::vector<int>& basis);
  bool set_slack_basis();
  const std::vector<int>& basis() const { return basis_; }

  /// Primal simplex; requires a primal feasible basis.
  Outcome primal(long max_iterations);
  /// Dual simplex; requires a dual feasible basis.
  Outcome dual(long max_iterations);

  void set_rhs(std::vector<T> rhs);
  bool primal_feasible() const;
  bool dual_feasible();
  /// Basic variable values z_B (aligned with basis()).
  const std::vector<T>& basic_values() const { return values_; }
  /// Simplex multipliers, i.e. the primal LP point.
  std::vector<T> multipliers();
  long iterations() const { return iterations_; }

 private:
  class Factor;
  bool refactor();
  void ftran(std::vector<T>& v) const;
  void btran(std::vector<T>& v) const;
  T reduced_cost(int var, const std::vector<T>& y) const;
  void pivot(int leave_pos, int enter_var, const std::vector<T>& w);

  const DualForm<T>& form_;
  std::vector<int> basis_;
  std::vector<int> position_;  // var -> basis position or -1
  std::vector<T> rhs_;
  std::vector<T> values_;
  std::vector<double> column_norm_;
  std::unique_ptr<Factor> factor_;
  struct Eta {
    int pos;
    std::vector<std::pair<int, T>> w;
    T pivot;
  };
  std::vector<Eta> etas_;
  long iterations_ = 0;
  bool broken_ = false;
};

}  // namespace simplex_detail
}  // namespace itbound
