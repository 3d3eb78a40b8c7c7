#include "itbound/sparse_lu.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "itbound/rational.hpp"

namespace itbound {

namespace {

template <class T>
bool is_zero(const T& v) {
  return v == 0;
}

template <>
bool is_zero<double>(const double& v) {
  return std::abs(v) < 1e-14;
}

template <class T>
double magnitude(const T& v) {
  if constexpr (std::is_same_v<T, double>) return std::abs(v);
  else return 1.0;  // exact: every nonzero pivot is equally good
}

}  // namespace

template <class T>
bool SparseLu<T>::factor(int size, const std::vector<SparseVector<T>>& columns) {
  size_ = size;
  steps_.clear();
  steps_.reserve(size);
  std::vector<std::map<int, T>> rows(size);
  std::vector<std::set<int>> col_rows(size);
  for (int j = 0; j < size; ++j)
    for (const auto& [i, v] : columns[j]) {
      if (is_zero(v)) continue;
      rows[i][j] = v;
      col_rows[j].insert(i);
    }
  std::vector<bool> row_done(size, false), col_done(size, false);
  // Buckets of active columns by count, for cheap sparsest-column lookup.
  std::vector<std::set<int>> by_count(size + 1);
  std::vector<int> count(size);
  for (int j = 0; j < size; ++j) {
    count[j] = static_cast<int>(col_rows[j].size());
    by_count[count[j]].insert(j);
  }
  auto recount = [&](int j) {
    if (col_done[j]) return;
    by_count[count[j]].erase(j);
    count[j] = static_cast<int>(col_rows[j].size());
    by_count[count[j]].insert(j);
  };

  for (int step = 0; step < size; ++step) {
    int col = -1;
    for (int c = 1; c <= size && col < 0; ++c)
      if (!by_count[c].empty()) col = *by_count[c].begin();
    if (col < 0) return false;
    int row = -1;
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    double best_mag = 0;
    double col_max = 0;
    for (int i : col_rows[col]) col_max = std::max(col_max, magnitude(rows[i].at(col)));
    for (int i : col_rows[col]) {
      const double mag = magnitude(rows[i].at(col));
      if (mag < 0.01 * col_max) continue;  // threshold pivoting for floating scalars
      const std::size_t len = rows[i].size();
      if (len < best_len || (len == best_len && mag > best_mag)) {
        best_len = len;
        best_mag = mag;
        row = i;
      }
    }
    if (row < 0) return false;

    Step s;
    s.row = row;
    s.col = col;
    s.pivot = rows[row].at(col);
    for (const auto& [j, v] : rows[row])
      if (j != col) s.upper.emplace_back(j, v);

    std::vector<int> targets;
    for (int i : col_rows[col])
      if (i != row) targets.push_back(i);
    for (int i : targets) {
      T l = rows[i].at(col) / s.pivot;
      rows[i].erase(col);
      for (const auto& [j, v] : s.upper) {
        auto [it, inserted] = rows[i].try_emplace(j, T(0));
        it->second -= l * v;
        if (is_zero(it->second)) {
          rows[i].erase(it);
          col_rows[j].erase(i);
        } else if (inserted) {
          col_rows[j].insert(i);
        }
      }
      s.multipliers.emplace_back(i, std::move(l));
    }
    // Retire the pivot row and column.
    for (const auto& [j, v] : rows[row]) {
      col_rows[j].erase(row);
    }
    rows[row].clear();
    by_count[count[col]].erase(col);
    col_done[col] = true;
    row_done[row] = true;
    col_rows[col].clear();
    for (const auto& [j, v] : s.upper) recount(j);
    for (int i : targets)
      for (const auto& [j, v] : rows[i]) recount(j);
    steps_.push_back(std::move(s));
  }
  return true;
}

template <class T>
void SparseLu<T>::solve(std::vector<T>& rhs) const {
  // Forward: apply the row operations.
  for (const auto& s : steps_) {
    const T& p = rhs[s.row];
    if (is_zero(p)) continue;
    for (const auto& [i, l] : s.multipliers) rhs[i] -= l * p;
  }
  // Backward substitution on the permuted upper factor.
  std::vector<T> x(size_, T(0));
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    T v = rhs[it->row];
    for (const auto& [j, u] : it->upper) v -= u * x[j];
    x[it->col] = v / it->pivot;
  }
  rhs = std::move(x);
}

template <class T>
void SparseLu<T>::solve_transpose(std::vector<T>& rhs) const {
  // U'^T z = rhs, indexed by columns; z is indexed by pivot rows.
  std::vector<T> c = rhs;
  std::vector<T> z(size_, T(0));
  for (const auto& s : steps_) {
    T v = c[s.col] / s.pivot;
    if (!is_zero(v))
      for (const auto& [j, u] : s.upper) c[j] -= u * v;
    z[s.row] = std::move(v);
  }
  // Apply the transposed row operations in reverse.
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    T acc(0);
    for (const auto& [i, l] : it->multipliers) acc += l * z[i];
    z[it->row] -= acc;
  }
  rhs = std::move(z);
}

template class SparseLu<double>;
template class SparseLu<Rational>;

}  // namespace itbound
