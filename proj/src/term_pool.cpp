#include "itbound/term_pool.hpp"

#include <unordered_set>

namespace itbound {

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  if (bound <= 1) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

TermSet TermPool::normalize(TermSet t) const { return canon_ ? (*canon_)(t) : t; }

bool TermPool::insert(TermSet t, Provenance provenance) {
  if (t.empty()) return false;
  t = normalize(t);
  auto [it, inserted] = index_.try_emplace(t, terms_.size());
  if (!inserted) {
    if (provenance == Provenance::evidence) provenance_[it->second] = Provenance::evidence;
    return false;
  }
  terms_.push_back(t);
  provenance_.push_back(provenance);
  span_ = span_ | t;
  return true;
}

bool TermPool::contains(TermSet t) const { return index_.count(normalize(t)) != 0; }

namespace {

class WeightedPicker {
 public:
  WeightedPicker(const TermPool& pool, unsigned evidence_weight) : pool_(pool), weight_(evidence_weight) { refresh(); }

  void refresh() {
    for (std::size_t i = cumulative_.size(); i < pool_.size(); ++i) {
      const std::uint64_t w = pool_.provenance(i) == Provenance::evidence ? weight_ : 1;
      cumulative_.push_back((cumulative_.empty() ? 0 : cumulative_.back()) + w);
    }
  }

  std::size_t pick(Rng& rng) const {
    const std::uint64_t r = uniform_index(rng, cumulative_.back());
    std::size_t lo = 0, hi = cumulative_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative_[mid] > r) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

 private:
  const TermPool& pool_;
  unsigned weight_;
  std::vector<std::uint64_t> cumulative_;
};

}  // namespace

std::vector<InequalitySpec> grow_pool(TermPool& pool, const GrowthOptions& options, Rng& rng) {
  std::vector<InequalitySpec> out;
  std::unordered_set<InequalitySpec, InequalitySpecHash> seen;
  if (pool.empty()) return out;
  auto emit = [&](const InequalitySpec& q) {
    if (seen.insert(q).second) out.push_back(q);
  };

  WeightedPicker picker(pool, options.evidence_weight);
  for (int round = 0; round < options.rounds; ++round) {
    // Provenance tags only change for terms that exist before growth, and
    // only through evidence seeding, so the cumulative table stays valid.
    std::vector<TermSet> fresh;
    for (std::size_t draw = 0; draw < options.pairs_per_round; ++draw) {
      const TermSet p = pool.terms()[picker.pick(rng)];
      TermSet q = pool.terms()[picker.pick(rng)];
      if (options.symmetry && !options.symmetry->is_trivial()) {
        const auto& elements = options.symmetry->elements();
        q = apply_permutation(q, elements[uniform_index(rng, elements.size())]);
      }
      if (p.subset_of(q) || q.subset_of(p)) continue;
      emit(InequalitySpec::cmi(p - q, q - p, p & q));
      fresh.push_back(p | q);
      fresh.push_back(p & q);
    }
    for (TermSet t : fresh)
      if (pool.size() < options.max_pool) pool.insert(t, Provenance::grown);
    picker.refresh();
  }

  if (options.monotonicity_candidates) {
    const std::vector<int> present = pool.union_of_terms().members();
    for (TermSet t : pool.terms())
      for (int i : present)
        if (!t.contains(i)) emit(InequalitySpec::monotonicity(i, t));
  }
  return out;
}

}  // namespace itbound
