#pragma once

#include <utility>
#include <vector>

namespace itbound {

template <class T>
using SparseVector = std::vector<std::pair<int, T>>;

/// Right-looking sparse LU with Markowitz-style pivot choice (sparsest
/// column, then sparsest row). Written for exact scalars, where any nonzero
/// pivot is acceptable; with double it picks the largest entry among the
/// sparsest rows of the chosen column.
template <class T>
class SparseLu {
 public:
  /// Factors the square matrix given by its columns. Returns false if singular.
  bool factor(int size, const std::vector<SparseVector<T>>& columns);

  int size() const { return size_; }
  /// Solves B x = rhs in place.
  void solve(std::vector<T>& rhs) const;
  /// Solves B^T x = rhs in place.
  void solve_transpose(std::vector<T>& rhs) const;

 private:
  struct Step {
    int row = 0;
    int col = 0;
    T pivot{};
    SparseVector<T> upper;        // remaining entries of the pivot row (col, value)
    SparseVector<T> multipliers;  // (row, l): row -= l * pivot row
  };
  int size_ = 0;
  std::vector<Step> steps_;
};

}  // namespace itbound
