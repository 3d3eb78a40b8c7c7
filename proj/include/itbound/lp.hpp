#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "itbound/inequality.hpp"
#include "itbound/linear_form.hpp"
#include "itbound/problem.hpp"
#include "itbound/simplex.hpp"
#include "itbound/symmetry.hpp"

namespace itbound {

struct RowOrigin {
  enum class Kind { problem, shannon, baseline };
  Kind kind = Kind::problem;
  InequalitySpec spec;   // shannon
  std::string name;      // problem
  LinearForm declared;   // the row as stated, before orbit collapsing
};

struct LpRow {
  LinearForm form;  // canonical (orbit-collapsed when symmetry is on)
  RowOrigin origin;
};

/// Column layout: 0 = alpha, 1 = beta, then one column per distinct
/// (canonical) entropy term in first-seen order. Rows are the problem
/// constraints, then the Shannon rows, then one nonnegativity row per column
/// in column order.
class AssembledLP {
 public:
  static constexpr int kAlpha = 0;
  static constexpr int kBeta = 1;

  const Problem& problem() const { return problem_; }
  /// Exact text of the problem file that certificates of this LP refer to.
  const std::string& problem_text() const { return problem_text_; }
  const Rational& eta() const { return eta_; }
  bool symmetric() const { return symmetric_; }

  int num_columns() const { return static_cast<int>(terms_.size()) + 2; }
  /// Entropy term of column c >= 2.
  TermSet term(int column) const { return terms_.at(column - 2); }
  /// -1 when the (already canonical) term has no column.
  int column_of(TermSet t) const;

  const std::vector<LpRow>& rows() const { return rows_; }
  std::size_t count(RowOrigin::Kind kind) const;
  /// Index of the first baseline row; baseline row of column c is first_baseline() + c.
  std::size_t first_baseline() const { return first_baseline_; }
  const LinearForm& objective() const { return objective_; }

  /// The LP without baseline rows, which become the x >= 0 bounds.
  LpData to_lp_data() const;

 private:
  friend AssembledLP assemble(const std::vector<InequalitySpec>&, const Problem&, const Rational&, const SymmetryGroup*);
  int column(TermSet t);

  Problem problem_;
  std::string problem_text_;
  Rational eta_;
  bool symmetric_ = false;
  std::vector<TermSet> terms_;
  std::unordered_map<TermSet, int, TermSetHash> column_;
  std::vector<LpRow> rows_;
  std::size_t first_baseline_ = 0;
  LinearForm objective_{Relation::objective};
};

/// Builds min alpha + eta*beta over the problem constraints, the expanded
/// specs and nonnegativity of every column. With a symmetry group, every
/// term is replaced by its orbit representative and the group must preserve
/// the problem's constraint set; its generators are written into the
/// problem text so that certificates remain checkable. Rows that coincide
/// after canonicalization are merged (first occurrence kept), and rows that
/// vanish identically are dropped.
/// Throws std::invalid_argument for eta < 0, a spec that does not fit the
/// universe, or a group that is not a symmetry of the problem.
AssembledLP assemble(const std::vector<InequalitySpec>& specs, const Problem& problem, const Rational& eta,
                     const SymmetryGroup* symmetry = nullptr);

struct SolveResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  /// One weight per row of the AssembledLP, baseline rows included.
  std::vector<Rational> duals;
  /// Optimal point, one value per column.
  std::vector<Rational> primal;
  std::string route;
};

SolveResult solve(const AssembledLP& lp, const SimplexOptions& options = {});

/// Shannon rows with nonzero dual weight, heaviest first (ties in row order).
std::vector<InequalitySpec> effective_set(const SolveResult& r, const AssembledLP& lp);

}  // namespace itbound
