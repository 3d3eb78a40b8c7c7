#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "itbound/inequality.hpp"
#include "itbound/symmetry.hpp"
#include "itbound/term_set.hpp"

namespace itbound {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Implemented here rather than with
/// std::uniform_int_distribution so that streams are identical across
/// standard libraries.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

enum class Provenance : std::uint8_t { bootstrap, grown, evidence };

/// Joint-entropy terms that seed inequality generation. Insertion ordered.
class TermPool {
 public:
  TermPool() = default;
  /// With a canonicalizer every inserted term is replaced by its orbit
  /// representative, which keeps the pool closed under the symmetry.
  explicit TermPool(Canonicalizer* canonicalizer) : canon_(canonicalizer) {}

  /// Returns true if the term was new. Empty sets are ignored. Re-inserting
  /// an existing term with Provenance::evidence upgrades its tag.
  bool insert(TermSet t, Provenance provenance);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  bool contains(TermSet t) const;
  const std::vector<TermSet>& terms() const { return terms_; }
  Provenance provenance(std::size_t i) const { return provenance_[i]; }
  TermSet union_of_terms() const { return span_; }

 private:
  TermSet normalize(TermSet t) const;

  Canonicalizer* canon_ = nullptr;
  std::vector<TermSet> terms_;
  std::vector<Provenance> provenance_;
  std::unordered_map<TermSet, std::size_t, TermSetHash> index_;
  TermSet span_;
};

struct GrowthOptions {
  int rounds = 1;
  std::size_t max_pool = 4096;
  /// Pair draws per round; draws that hit nested or equal terms are skipped.
  std::size_t pairs_per_round = 256;
  /// Sampling weight of evidence-tagged terms relative to others.
  unsigned evidence_weight = 3;
  bool monotonicity_candidates = true;
  /// When set, the second term of each pair is moved by a random group
  /// element first, so that a pool of orbit representatives still reaches
  /// every relative position of two orbits.
  const SymmetryGroup* symmetry = nullptr;
};

/// Union/intersection growth. Each round draws term pairs (P, Q) that are not
/// nested, emits I(P-Q ; Q-P | P&Q), and inserts P|Q and P&Q while the pool
/// is below max_pool. Afterwards, H(T+i) - H(T) >= 0 is emitted for each pool
/// term T and each variable i outside T that occurs in some pool term.
/// The returned list is duplicate-free and deterministic for a given rng state.
std::vector<InequalitySpec> grow_pool(TermPool& pool, const GrowthOptions& options, Rng& rng);

}  // namespace itbound
