#include "itbound/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace itbound {
namespace simplex_detail {

namespace {

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, double>) return r.get_d();
  else return r;
}

template <class T>
constexpr bool kExact = !std::is_same_v<T, double>;

constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;

template <class T>
T dot(const SparseVector<T>& col, const std::vector<T>& y) {
  T acc(0);
  for (const auto& [i, v] : col) acc += v * y[i];
  return acc;
}

}  // namespace

template <class T>
DualForm<T> make_dual_form(const LpData& lp) {
  DualForm<T> f;
  f.m = lp.num_cols;
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    SparseVector<T> col;
    col.reserve(lp.rows[k].size());
    for (const auto& [j, v] : lp.rows[k]) col.emplace_back(j, from_rational<T>(v));
    f.obj.push_back(from_rational<T>(lp.rhs[k]));
    f.source_row.push_back(static_cast<int>(k));
    f.sign.push_back(1);
    if (lp.equality[k]) {
      SparseVector<T> neg = col;
      for (auto& e : neg) e.second = -e.second;
      f.columns.push_back(std::move(col));
      f.columns.push_back(std::move(neg));
      f.obj.push_back(-from_rational<T>(lp.rhs[k]));
      f.source_row.push_back(static_cast<int>(k));
      f.sign.push_back(-1);
    } else {
      f.columns.push_back(std::move(col));
    }
  }
  f.first_slack = static_cast<int>(f.columns.size());
  for (int j = 0; j < lp.num_cols; ++j) {
    f.columns.push_back({{j, T(1)}});
    f.obj.push_back(T(0));
    f.source_row.push_back(-1);
    f.sign.push_back(0);
  }
  for (const auto& c : lp.cost) f.rhs.push_back(from_rational<T>(c));
  return f;
}

template <class T>
class RevisedSimplex<T>::Factor {
 public:
  bool factor(int m, const std::vector<SparseVector<T>>& cols) {
    if constexpr (kExact<T>) {
      return lu_.factor(m, cols);
    } else {
      std::vector<Eigen::Triplet<double>> triplets;
      for (int j = 0; j < m; ++j)
        for (const auto& [i, v] : cols[j]) triplets.emplace_back(i, j, v);
      Eigen::SparseMatrix<double> b(m, m);
      b.setFromTriplets(triplets.begin(), triplets.end());
      b.makeCompressed();
      eigen_lu_.analyzePattern(b);
      eigen_lu_.factorize(b);
      return eigen_lu_.info() == Eigen::Success;
    }
  }

  void solve(std::vector<T>& v) const {
    if constexpr (kExact<T>) {
      lu_.solve(v);
    } else {
      Eigen::Map<Eigen::VectorXd> rhs(v.data(), static_cast<Eigen::Index>(v.size()));
      Eigen::VectorXd x = eigen_lu_.solve(rhs);
      rhs = x;
    }
  }

  void solve_transpose(std::vector<T>& v) const {
    if constexpr (kExact<T>) {
      lu_.solve_transpose(v);
    } else {
      Eigen::Map<Eigen::VectorXd> rhs(v.data(), static_cast<Eigen::Index>(v.size()));
      Eigen::VectorXd x = eigen_lu_.transpose().solve(rhs);
      rhs = x;
    }
  }

 private:
  SparseLu<Rational> lu_;
  // SparseLU's solve() is logically const but not declared so.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> eigen_lu_;
};

template <class T>
RevisedSimplex<T>::RevisedSimplex(const DualForm<T>& form)
    : form_(form), position_(form.columns.size(), -1), rhs_(form.rhs), factor_(std::make_unique<Factor>()) {
  column_norm_.reserve(form.columns.size());
  for (const auto& col : form.columns) {
    double s = 1.0;
    for (const auto& e : col) {
      double v;
      if constexpr (kExact<T>) v = e.second.get_d();
      else v = e.second;
      s += v * v;
    }
    column_norm_.push_back(std::sqrt(s));
  }
}

template <class T>
RevisedSimplex<T>::~RevisedSimplex() = default;

template <class T>
bool RevisedSimplex<T>::set_basis(const std::vector<int>& basis) {
  if (static_cast<int>(basis.size()) != form_.m) return false;
  std::fill(position_.begin(), position_.end(), -1);
  for (std::size_t p = 0; p < basis.size(); ++p) {
    if (basis[p] < 0 || basis[p] >= static_cast<int>(form_.columns.size()) || position_[basis[p]] >= 0) return false;
    position_[basis[p]] = static_cast<int>(p);
  }
  basis_ = basis;
  broken_ = !refactor();
  return !broken_;
}

template <class T>
bool RevisedSimplex<T>::set_slack_basis() {
  std::vector<int> basis(form_.m);
  for (int j = 0; j < form_.m; ++j) basis[j] = form_.first_slack + j;
  return set_basis(basis);
}

template <class T>
bool RevisedSimplex<T>::refactor() {
  std::vector<SparseVector<T>> cols;
  cols.reserve(basis_.size());
  for (int v : basis_) cols.push_back(form_.columns[v]);
  etas_.clear();
  if (!factor_->factor(form_.m, cols)) return false;
  values_ = rhs_;
  ftran(values_);
  if constexpr (!kExact<T>) {
    for (auto& v : values_)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

template <class T>
void RevisedSimplex<T>::set_rhs(std::vector<T> rhs) {
  rhs_ = std::move(rhs);
  values_ = rhs_;
  ftran(values_);
}

template <class T>
void RevisedSimplex<T>::ftran(std::vector<T>& v) const {
  factor_->solve(v);
  for (const auto& eta : etas_) {
    T vp = v[eta.pos] / eta.pivot;
    if (vp != 0)
      for (const auto& [i, w] : eta.w)
        if (i != eta.pos) v[i] -= w * vp;
    v[eta.pos] = std::move(vp);
  }
}

template <class T>
void RevisedSimplex<T>::btran(std::vector<T>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    T acc = v[it->pos];
    for (const auto& [i, w] : it->w)
      if (i != it->pos) acc -= w * v[i];
    v[it->pos] = acc / it->pivot;
  }
  factor_->solve_transpose(v);
}

template <class T>
std::vector<T> RevisedSimplex<T>::multipliers() {
  std::vector<T> y(form_.m);
  for (int p = 0; p < form_.m; ++p) y[p] = form_.obj[basis_[p]];
  btran(y);
  return y;
}

template <class T>
T RevisedSimplex<T>::reduced_cost(int var, const std::vector<T>& y) const {
  return form_.obj[var] - dot(form_.columns[var], y);
}

template <class T>
bool RevisedSimplex<T>::primal_feasible() const {
  for (const auto& v : values_) {
    if constexpr (kExact<T>) {
      if (v < 0) return false;
    } else {
      if (v < -kFeasTol) return false;
    }
  }
  return true;
}

template <class T>
bool RevisedSimplex<T>::dual_feasible() {
  const auto y = multipliers();
  for (std::size_t v = 0; v < form_.columns.size(); ++v) {
    if (position_[v] >= 0) continue;
    const T d = reduced_cost(static_cast<int>(v), y);
    if constexpr (kExact<T>) {
      if (d > 0) return false;
    } else {
      if (d > kOptTol) return false;
    }
  }
  return true;
}

template <class T>
void RevisedSimplex<T>::pivot(int leave_pos, int enter_var, const std::vector<T>& w) {
  Eta eta;
  eta.pos = leave_pos;
  eta.pivot = w[leave_pos];
  for (int i = 0; i < form_.m; ++i) {
    if constexpr (kExact<T>) {
      if (w[i] != 0) eta.w.emplace_back(i, w[i]);
    } else {
      if (std::abs(w[i]) > 1e-13) eta.w.emplace_back(i, w[i]);
    }
  }
  position_[basis_[leave_pos]] = -1;
  basis_[leave_pos] = enter_var;
  position_[enter_var] = leave_pos;
  etas_.push_back(std::move(eta));
  ++iterations_;
  const std::size_t limit = kExact<T> ? 40 : 100;
  if (etas_.size() >= limit && !refactor()) broken_ = true;
}

template <class T>
Outcome RevisedSimplex<T>::primal(long max_iterations) {
  const int nvars = static_cast<int>(form_.columns.size());
  for (long it = 0; it < max_iterations; ++it) {
    if (broken_) return Outcome::failed;
    const auto y = multipliers();
    int enter = -1;
    if constexpr (kExact<T>) {
      for (int v = 0; v < nvars && enter < 0; ++v)
        if (position_[v] < 0 && reduced_cost(v, y) > 0) enter = v;
    } else {
      double best = 0;
      for (int v = 0; v < nvars; ++v) {
        if (position_[v] >= 0) continue;
        const double d = reduced_cost(v, y);
        if (d <= kOptTol) continue;
        const double score = d / column_norm_[v];
        if (score > best) {
          best = score;
          enter = v;
        }
      }
    }
    if (enter < 0) return Outcome::optimal;

    std::vector<T> w(form_.m, T(0));
    for (const auto& [i, v] : form_.columns[enter]) w[i] = v;
    ftran(w);

    int leave = -1;
    if constexpr (kExact<T>) {
      T best_ratio;
      for (int i = 0; i < form_.m; ++i) {
        if (w[i] <= 0) continue;
        T ratio = values_[i] / w[i];
        if (leave < 0 || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
    } else {
      double bound = std::numeric_limits<double>::infinity();
      for (int i = 0; i < form_.m; ++i)
        if (w[i] > kPivotTol) bound = std::min(bound, (std::max(values_[i], 0.0) + kFeasTol) / w[i]);
      double best_w = 0;
      for (int i = 0; i < form_.m; ++i)
        if (w[i] > kPivotTol && std::max(values_[i], 0.0) / w[i] <= bound && w[i] > best_w) {
          best_w = w[i];
          leave = i;
        }
    }
    if (leave < 0) return Outcome::unbounded;

    T theta = values_[leave] / w[leave];
    if constexpr (!kExact<T>) theta = std::max(theta, 0.0);
    for (int i = 0; i < form_.m; ++i) {
      if (w[i] == 0) continue;
      values_[i] -= theta * w[i];
      if constexpr (!kExact<T>)
        if (values_[i] < 0) values_[i] = 0;
    }
    values_[leave] = theta;
    pivot(leave, enter, w);
  }
  return Outcome::failed;
}

template <class T>
Outcome RevisedSimplex<T>::dual(long max_iterations) {
  const int nvars = static_cast<int>(form_.columns.size());
  for (long it = 0; it < max_iterations; ++it) {
    if (broken_) return Outcome::failed;
    int leave = -1;
    if constexpr (kExact<T>) {
      for (int i = 0; i < form_.m; ++i)
        if (values_[i] < 0 && (leave < 0 || basis_[i] < basis_[leave])) leave = i;
    } else {
      double worst = -kFeasTol;
      for (int i = 0; i < form_.m; ++i)
        if (values_[i] < worst) {
          worst = values_[i];
          leave = i;
        }
    }
    if (leave < 0) return Outcome::optimal;

    std::vector<T> rho(form_.m, T(0));
    rho[leave] = T(1);
    btran(rho);
    const auto y = multipliers();

    int enter = -1;
    if constexpr (kExact<T>) {
      T best_ratio;
      for (int v = 0; v < nvars; ++v) {
        if (position_[v] >= 0) continue;
        const T a = dot(form_.columns[v], rho);
        if (a >= 0) continue;
        T ratio = reduced_cost(v, y) / a;
        if (enter < 0 || ratio < best_ratio) {
          enter = v;
          best_ratio = std::move(ratio);
        }
      }
    } else {
      std::vector<std::pair<int, double>> cand;
      double bound = std::numeric_limits<double>::infinity();
      for (int v = 0; v < nvars; ++v) {
        if (position_[v] >= 0) continue;
        const double a = dot(form_.columns[v], rho);
        if (a >= -kPivotTol) continue;
        const double d = std::min(reduced_cost(v, y), 0.0);
        bound = std::min(bound, (d - kOptTol) / a);
        cand.emplace_back(v, a);
      }
      double best_a = 0;
      for (const auto& [v, a] : cand) {
        const double d = std::min(reduced_cost(v, y), 0.0);
        if (d / a <= bound && -a > best_a) {
          best_a = -a;
          enter = v;
        }
      }
    }
    if (enter < 0) return Outcome::infeasible;

    std::vector<T> w(form_.m, T(0));
    for (const auto& [i, v] : form_.columns[enter]) w[i] = v;
    ftran(w);
    T theta = values_[leave] / w[leave];
    for (int i = 0; i < form_.m; ++i) {
      if (w[i] == 0) continue;
      values_[i] -= theta * w[i];
    }
    values_[leave] = theta;
    pivot(leave, enter, w);
  }
  return Outcome::failed;
}

template struct DualForm<double>;
template struct DualForm<Rational>;
template DualForm<double> make_dual_form<double>(const LpData&);
template DualForm<Rational> make_dual_form<Rational>(const LpData&);
template class RevisedSimplex<double>;
template class RevisedSimplex<Rational>;

}  // namespace simplex_detail

namespace {

using simplex_detail::DualForm;
using simplex_detail::Outcome;
using simplex_detail::RevisedSimplex;

void validate(const LpData& lp) {
  if (lp.rows.size() != lp.rhs.size() || lp.rows.size() != lp.equality.size())
    throw std::invalid_argument("LP row arrays have inconsistent lengths");
  if (static_cast<int>(lp.cost.size()) != lp.num_cols) throw std::invalid_argument("LP cost vector has wrong length");
  for (const auto& c : lp.cost)
    if (c < 0) throw std::invalid_argument("LP costs must be nonnegative");
  for (const auto& row : lp.rows)
    for (const auto& [j, v] : row)
      if (j < 0 || j >= lp.num_cols) throw std::invalid_argument("LP row references a missing column");
}

/// Fills reduced costs and value from x and row duals.
void complete(const LpData& lp, LpSolution& s) {
  s.reduced_costs = lp.cost;
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    if (s.row_duals[k] == 0) continue;
    for (const auto& [j, v] : lp.rows[k]) s.reduced_costs[j] -= s.row_duals[k] * v;
  }
  s.value = 0;
  for (std::size_t k = 0; k < lp.rows.size(); ++k) s.value += s.row_duals[k] * lp.rhs[k];
}

template <class T>
void extract(const LpData& lp, const DualForm<T>& form, RevisedSimplex<T>& sim, LpSolution& s,
             const std::function<bool(const T&, Rational&)>& to_exact, bool& ok) {
  ok = true;
  s.row_duals.assign(lp.rows.size(), Rational(0));
  const auto& basis = sim.basis();
  const auto& values = sim.basic_values();
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const int v = basis[p];
    if (form.source_row[v] < 0) continue;
    Rational r;
    if (!to_exact(values[p], r)) {
      ok = false;
      return;
    }
    s.row_duals[form.source_row[v]] += form.sign[v] * r;
  }
  const auto y = sim.multipliers();
  s.x.assign(lp.num_cols, Rational(0));
  for (int j = 0; j < lp.num_cols; ++j)
    if (!to_exact(y[j], s.x[j])) {
      ok = false;
      return;
    }
  complete(lp, s);
}

}  // namespace

bool check_optimal(const LpData& lp, const LpSolution& s) {
  if (s.status != LpStatus::optimal) return false;
  if (s.x.size() != static_cast<std::size_t>(lp.num_cols) || s.row_duals.size() != lp.rows.size()) return false;
  Rational primal = 0;
  for (int j = 0; j < lp.num_cols; ++j) {
    if (s.x[j] < 0) return false;
    primal += lp.cost[j] * s.x[j];
  }
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    Rational lhs = 0;
    for (const auto& [j, v] : lp.rows[k]) lhs += v * s.x[j];
    if (lp.equality[k] ? lhs != lp.rhs[k] : lhs < lp.rhs[k]) return false;
    if (!lp.equality[k] && s.row_duals[k] < 0) return false;
  }
  std::vector<Rational> reduced = lp.cost;
  Rational dual = 0;
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    if (s.row_duals[k] == 0) continue;
    dual += s.row_duals[k] * lp.rhs[k];
    for (const auto& [j, v] : lp.rows[k]) reduced[j] -= s.row_duals[k] * v;
  }
  for (int j = 0; j < lp.num_cols; ++j)
    if (reduced[j] < 0 || reduced[j] != s.reduced_costs[j]) return false;
  return primal == dual && dual == s.value;
}

LpSolution solve_lp(const LpData& lp, const SimplexOptions& options) {
  using namespace simplex_detail;
  validate(lp);
  LpSolution s;
  std::optional<std::vector<int>> warm_basis;

  if (options.use_float_presolve) {
    const auto form = make_dual_form<double>(lp);
    RevisedSimplex<double> fs(form);
    std::mt19937_64 rng(options.perturbation_seed);
    std::vector<double> perturbed = form.rhs;
    for (auto& c : perturbed) c += (1e-7 + 1e-7 * static_cast<double>(rng() >> 11) * 0x1.0p-53) * (1 + std::abs(c));
    Outcome out = Outcome::failed;
    if (fs.set_slack_basis()) {
      fs.set_rhs(perturbed);
      out = fs.primal(options.max_float_iterations);
      if (out == Outcome::optimal) {
        fs.set_rhs(form.rhs);
        if (!fs.primal_feasible()) out = fs.dual(options.max_float_iterations);
      }
    }
    s.float_iterations = fs.iterations();
    if (out == Outcome::optimal && fs.set_basis(fs.basis())) {
      warm_basis = fs.basis();
      const BigInt cap(static_cast<unsigned long>(options.max_denominator));
      bool ok = false;
      extract<double>(
          lp, form, fs, s, [&](const double& v, Rational& r) { return rationalize(v, 1e-9, cap, r); }, ok);
      s.status = LpStatus::optimal;
      s.route = "rationalized";
      if (ok && check_optimal(lp, s)) return s;
    } else if (out == Outcome::optimal) {
      warm_basis = fs.basis();
    }
  }

  const auto form = make_dual_form<Rational>(lp);
  RevisedSimplex<Rational> es(form);
  Outcome out;
  s.route = "exact-simplex";
  if (warm_basis && es.set_basis(*warm_basis)) {
    if (es.primal_feasible()) {
      out = es.primal(std::numeric_limits<long>::max());
      if (es.iterations() == 0) s.route = "exact-basis";
    } else if (es.dual_feasible()) {
      out = es.dual(std::numeric_limits<long>::max());
      if (out == Outcome::optimal && es.iterations() == 0) s.route = "exact-basis";
    } else {
      es.set_slack_basis();
      out = es.primal(std::numeric_limits<long>::max());
    }
  } else {
    if (!es.set_slack_basis()) throw std::logic_error("slack basis is singular");
    out = es.primal(std::numeric_limits<long>::max());
  }
  s.exact_iterations = es.iterations();
  if (out == Outcome::unbounded || out == Outcome::infeasible) {
    // The dual is unbounded (or, after a dual pass, primal-infeasible for D):
    // the primal LP has no feasible point.
    if (out == Outcome::infeasible) {
      es.set_slack_basis();
      out = es.primal(std::numeric_limits<long>::max());
    }
    if (out == Outcome::unbounded) {
      s.status = LpStatus::infeasible;
      s.x.clear();
      s.row_duals.clear();
      s.reduced_costs.clear();
      return s;
    }
  }
  if (out != Outcome::optimal) throw std::runtime_error("exact simplex did not terminate");
  bool ok = false;
  extract<Rational>(
      lp, form, es, s,
      [](const Rational& v, Rational& r) {
        r = v;
        return true;
      },
      ok);
  s.status = LpStatus::optimal;
  if (!check_optimal(lp, s)) throw std::logic_error("exact simplex produced a non-optimal point");
  return s;
}

}  // namespace itbound
