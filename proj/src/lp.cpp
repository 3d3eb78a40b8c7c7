#include "itbound/lp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace itbound {

int AssembledLP::column_of(TermSet t) const {
  auto it = column_.find(t);
  return it == column_.end() ? -1 : it->second;
}

int AssembledLP::column(TermSet t) {
  auto [it, inserted] = column_.try_emplace(t, num_columns());
  if (inserted) terms_.push_back(t);
  return it->second;
}

std::size_t AssembledLP::count(RowOrigin::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [&](const LpRow& r) { return r.origin.kind == kind; }));
}

LpData AssembledLP::to_lp_data() const {
  LpData d;
  d.num_cols = num_columns();
  d.cost.assign(d.num_cols, Rational(0));
  d.cost[kAlpha] = 1;
  d.cost[kBeta] = eta_;
  for (std::size_t k = 0; k < first_baseline_; ++k) {
    const LinearForm& f = rows_[k].form;
    SparseVector<Rational> row;
    if (f.alpha() != 0) row.emplace_back(kAlpha, f.alpha());
    if (f.beta() != 0) row.emplace_back(kBeta, f.beta());
    for (const auto& [t, v] : f.entropy()) row.emplace_back(column_of(t), v);
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    d.rows.push_back(std::move(row));
    d.rhs.push_back(-f.constant());
    d.equality.push_back(f.relation() == Relation::equal);
  }
  return d;
}

namespace {

bool vanishes(const LinearForm& f) {
  if (!f.entropy().empty() || f.alpha() != 0 || f.beta() != 0) return false;
  return f.relation() == Relation::equal ? f.constant() == 0 : f.constant() >= 0;
}

Problem with_generators(const Problem& problem, const SymmetryGroup& group) {
  Problem p = problem;
  if (group.degree() != p.universe.size()) throw std::invalid_argument("symmetry group degree does not match the universe");
  if (p.symmetry_generators.empty() ||
      SymmetryGroup::generate(p.universe.size(), p.symmetry_generators).elements() != group.elements())
    p.symmetry_generators = group.generators();
  check_symmetry(p);
  return p;
}

}  // namespace

AssembledLP assemble(const std::vector<InequalitySpec>& specs, const Problem& problem, const Rational& eta,
                     const SymmetryGroup* symmetry) {
  if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
  AssembledLP lp;
  lp.eta_ = eta;
  lp.symmetric_ = symmetry != nullptr && !symmetry->is_trivial();
  lp.problem_ = symmetry ? with_generators(problem, *symmetry) : problem;
  lp.problem_text_ = emit_problem(lp.problem_);
  lp.objective_.add_alpha(1).add_beta(eta);

  const SymmetryGroup trivial = SymmetryGroup::trivial(problem.universe.size());
  Canonicalizer canon(symmetry ? *symmetry : trivial);
  std::map<LinearForm, std::size_t> seen;

  auto add_row = [&](LinearForm declared, RowOrigin origin) {
    LinearForm form = canonicalize(declared, canon);
    if (vanishes(form)) return;
    if (!seen.emplace(form, lp.rows_.size()).second) return;
    for (const auto& [t, v] : form.entropy()) lp.column(t);
    origin.declared = std::move(declared);
    lp.rows_.push_back({std::move(form), std::move(origin)});
  };

  for (const auto& c : lp.problem_.constraints) {
    for (const auto& [t, v] : c.form.entropy())
      if (!problem.universe.contains(t)) throw std::invalid_argument("constraint " + c.name + " lies outside the universe");
    RowOrigin o;
    o.kind = RowOrigin::Kind::problem;
    o.name = c.name;
    add_row(c.form, std::move(o));
  }
  for (const auto& q : specs) {
    validate(q, problem.universe.size());
    RowOrigin o;
    o.kind = RowOrigin::Kind::shannon;
    o.spec = q;
    add_row(expand(q), std::move(o));
  }
  lp.first_baseline_ = lp.rows_.size();
  for (int c = 0; c < lp.num_columns(); ++c) {
    LinearForm f(Relation::greater_equal);
    if (c == AssembledLP::kAlpha) f.add_alpha(1);
    else if (c == AssembledLP::kBeta) f.add_beta(1);
    else f.add_entropy(lp.term(c), 1);
    RowOrigin o;
    o.kind = RowOrigin::Kind::baseline;
    o.declared = f;
    lp.rows_.push_back({std::move(f), std::move(o)});
  }
  return lp;
}

SolveResult solve(const AssembledLP& lp, const SimplexOptions& options) {
  const LpData data = lp.to_lp_data();
  const LpSolution s = solve_lp(data, options);
  SolveResult r;
  r.status = s.status;
  r.route = s.route;
  if (s.status != LpStatus::optimal) return r;
  r.value = s.value;
  r.primal = s.x;
  r.duals = s.row_duals;
  r.duals.insert(r.duals.end(), s.reduced_costs.begin(), s.reduced_costs.end());
  return r;
}

std::vector<InequalitySpec> effective_set(const SolveResult& r, const AssembledLP& lp) {
  if (r.status != LpStatus::optimal) throw std::invalid_argument("effective_set needs an optimal solve");
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < lp.rows().size(); ++k)
    if (lp.rows()[k].origin.kind == RowOrigin::Kind::shannon && r.duals[k] != 0) order.push_back(k);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return abs(r.duals[a]) > abs(r.duals[b]); });
  std::vector<InequalitySpec> out;
  out.reserve(order.size());
  for (std::size_t k : order) out.push_back(lp.rows()[k].origin.spec);
  return out;
}

}  // namespace itbound
