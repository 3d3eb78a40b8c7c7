#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "itbound/certificate.hpp"
#include "itbound/inequality.hpp"
#include "itbound/lp.hpp"
#include "itbound/oracle.hpp"
#include "itbound/problem.hpp"
#include "itbound/term_pool.hpp"

namespace itbound {

struct SearchConfig {
  std::size_t kappa_init = 64;
  std::size_t kappa_max = 8192;
  int max_episodes = 200;
  int growth_rounds = 3;
  std::size_t max_pool = 4096;
  std::size_t pairs_per_round = 256;
  int stagnation_window = 5;
  std::uint64_t seed = 1;
  /// Candidates must hold with equality under every listed oracle.
  std::vector<EntropyOracle> filters;
  bool symmetry = false;
  /// Rebuild the pool from the problem terms and the evidence at the start
  /// of every episode instead of only when kappa grows.
  bool reseed_each_episode = true;
  /// Keep orbit representatives in the pool (and pair terms in random
  /// relative position) instead of the terms as they occur.
  bool canonical_pool = true;
  /// Cap on the number of candidates kept between episodes.
  std::size_t max_candidates = 1 << 20;
  /// Share of each sample drawn from candidates that the previous episode's
  /// optimum violates. 0 gives plain uniform sampling.
  double guided_fraction = 0.5;
  /// Stop as soon as the bound reaches this value (e.g. the objective value
  /// of the filtering code, which the bound cannot exceed).
  std::optional<Rational> stop_at;
  /// Wall-clock cap in seconds, checked before each episode; 0 means none.
  /// Runs cut short by it are not reproducible episode for episode.
  double time_limit_seconds = 0;

  /// Throws std::invalid_argument when the configuration is inconsistent.
  void validate() const;
};

struct EvidenceStats {
  int episodes_used = 0;
  int last_effective = 0;
  Rational max_weight = 0;
};

struct Evidence {
  std::map<InequalitySpec, EvidenceStats> specs;
  std::optional<Rational> best_bound;
  std::optional<ProofCertificate> best_certificate;

  /// Set union; statistics merge by maximum.
  void merge(const Evidence& other);
};

struct EpisodeStats {
  int episode = 0;
  Rational value;
  std::size_t selected = 0;   // |I_p|
  std::size_t effective = 0;
  std::size_t kappa = 0;
  std::size_t pool = 0;
  std::size_t candidates = 0;  // reservoir size after filtering
  double seconds = 0;
};

/// Everything an episode needs besides the evolving pool, evidence and rng.
class SearchContext {
 public:
  SearchContext(Problem problem, Rational eta, SearchConfig config);

  const Problem& problem() const { return problem_; }
  const Rational& eta() const { return eta_; }
  const SearchConfig& config() const { return config_; }
  const SymmetryGroup* group() const { return config_.symmetry ? &group_ : nullptr; }
  Canonicalizer* canonicalizer() { return config_.symmetry ? &canon_ : nullptr; }

  /// Pool of the problem's own terms, plus the terms of the evidence specs.
  TermPool seed_pool(const Evidence& evidence);
  bool passes_filter(const InequalitySpec& q);

 private:
  Problem problem_;
  Rational eta_;
  SearchConfig config_;
  SymmetryGroup group_;
  Canonicalizer canon_;
  std::unordered_map<InequalitySpec, bool, InequalitySpecHash> filter_cache_;
};

/// Mutable state carried from one episode to the next.
struct SearchState {
  TermPool pool;
  Evidence evidence;
  Rng rng;
  std::size_t kappa = 0;
  /// Every filtered candidate generated so far, in first-seen order.
  std::vector<InequalitySpec> candidates;
  std::unordered_set<InequalitySpec, InequalitySpecHash> known;
  /// Previous optimum by (canonical) term, for guided sampling.
  std::unordered_map<TermSet, double, TermSetHash> hint;
};

struct EpisodeResult {
  Rational value;
  SolveResult solution;
  std::vector<InequalitySpec> effective;
  EpisodeStats stats;
  bool improved = false;
};

/// One episode: grow the pool, filter the new candidates into the
/// reservoir, select the evidence plus up to kappa candidates, solve, and
/// fold the effective set into the evidence.
EpisodeResult run_episode(SearchContext& ctx, int episode, SearchState& state);

struct SearchResult {
  bool certified = false;
  Rational bound;
  ProofCertificate certificate;
  /// The problem file that the certificate refers to.
  std::string problem_text;
  std::vector<EpisodeStats> stats;
  Evidence evidence;
};

using EpisodeCallback = std::function<void(const EpisodeStats&)>;

/// Episodic search with kappa doubling on stagnation. The returned
/// certificate has passed verify_certificate. Throws std::runtime_error when
/// an episode LP is infeasible.
SearchResult run_search(const Problem& problem, const Rational& eta, const SearchConfig& config,
                        const Evidence* warm_start = nullptr, const EpisodeCallback& on_episode = {});

struct SweepPoint {
  Rational eta;
  bool ok = false;
  std::string error;
  SearchResult result;
};

/// run_search per eta with seeds derived from config.seed and the eta index.
/// With warm_start, evidence carries from each eta to the next and the
/// points run in order; otherwise up to `threads` points run concurrently.
std::vector<SweepPoint> sweep_eta(const Problem& problem, const std::vector<Rational>& etas, const SearchConfig& config,
                                  bool warm_start = true, unsigned threads = 1);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// episode,value,value_decimal,selected,effective,kappa,pool,candidates
std::string stats_csv(const std::vector<EpisodeStats>& stats);

}  // namespace itbound
