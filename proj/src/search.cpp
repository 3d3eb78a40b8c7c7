#include "itbound/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "itbound/verify.hpp"

namespace itbound {

void SearchConfig::validate() const {
  if (kappa_init > kappa_max) throw std::invalid_argument("kappa_init exceeds kappa_max");
  if (kappa_max == 0 || max_episodes <= 0 || growth_rounds < 0 || max_pool == 0 || stagnation_window <= 0)
    throw std::invalid_argument("search counts must be positive");
  if (!(guided_fraction >= 0 && guided_fraction <= 1)) throw std::invalid_argument("guided_fraction must lie in [0, 1]");
  if (time_limit_seconds < 0) throw std::invalid_argument("time limit must be nonnegative");
}

void Evidence::merge(const Evidence& other) {
  for (const auto& [q, s] : other.specs) {
    auto [it, inserted] = specs.try_emplace(q, s);
    if (inserted) continue;
    it->second.episodes_used = std::max(it->second.episodes_used, s.episodes_used);
    it->second.last_effective = std::max(it->second.last_effective, s.last_effective);
    if (s.max_weight > it->second.max_weight) it->second.max_weight = s.max_weight;
  }
  if (other.best_bound && (!best_bound || *other.best_bound > *best_bound)) {
    best_bound = other.best_bound;
    best_certificate = other.best_certificate;
  }
}

SearchContext::SearchContext(Problem problem, Rational eta, SearchConfig config)
    : problem_(std::move(problem)),
      eta_(std::move(eta)),
      config_(std::move(config)),
      group_(config_.symmetry ? problem_.symmetry_group() : SymmetryGroup::trivial(problem_.universe.size())),
      canon_(group_) {
  config_.validate();
  if (config_.symmetry && group_.is_trivial()) throw std::invalid_argument("symmetry requested but the problem declares no generators");
  for (const auto& f : config_.filters)
    if (!(f.universe == problem_.universe)) throw std::invalid_argument("filter oracle universe differs from the problem universe");
}

TermPool SearchContext::seed_pool(const Evidence& evidence) {
  TermPool pool(config_.canonical_pool ? canonicalizer() : nullptr);
  for (const auto& c : problem_.constraints)
    for (const auto& [t, v] : c.form.entropy()) pool.insert(t, Provenance::bootstrap);
  for (const auto& [q, s] : evidence.specs)
    for (TermSet t : touched_terms(q)) pool.insert(t, Provenance::evidence);
  return pool;
}

bool SearchContext::passes_filter(const InequalitySpec& q) {
  if (config_.filters.empty()) return true;
  auto it = filter_cache_.find(q);
  if (it != filter_cache_.end()) return it->second;
  bool ok = true;
  for (const auto& f : config_.filters)
    if (slack(q, f) != 0) {
      ok = false;
      break;
    }
  filter_cache_.emplace(q, ok);
  return ok;
}

namespace {

/// Violation of q at the previous optimum; nullopt when a term has no value.
std::optional<double> hinted_slack(const InequalitySpec& q, SearchContext& ctx,
                                   const std::unordered_map<TermSet, double, TermSetHash>& hint) {
  TermSet plus[2], minus[2];
  int n_plus = 0, n_minus = 0;
  if (q.kind == InequalitySpec::Kind::monotonicity) {
    plus[n_plus++] = q.given | TermSet::singleton(q.variable);
    minus[n_minus++] = q.given;
  } else {
    plus[n_plus++] = q.given | q.left;
    plus[n_plus++] = q.given | q.right;
    minus[n_minus++] = q.given | q.left | q.right;
    minus[n_minus++] = q.given;
  }
  Canonicalizer* canon = ctx.canonicalizer();
  auto value = [&](TermSet t) -> std::optional<double> {
    if (t.empty()) return 0.0;
    auto it = hint.find(canon ? (*canon)(t) : t);
    if (it == hint.end()) return std::nullopt;
    return it->second;
  };
  double total = 0;
  for (int k = 0; k < n_plus; ++k) {
    auto v = value(plus[k]);
    if (!v) return std::nullopt;
    total += *v;
  }
  for (int k = 0; k < n_minus; ++k) {
    auto v = value(minus[k]);
    if (!v) return std::nullopt;
    total -= *v;
  }
  return total;
}

void admit(SearchContext& ctx, SearchState& state, const InequalitySpec& q) {
  if (state.candidates.size() >= ctx.config().max_candidates) return;
  if (!state.known.insert(q).second) return;
  if (ctx.passes_filter(q)) state.candidates.push_back(q);
}

}  // namespace

EpisodeResult run_episode(SearchContext& ctx, int episode, SearchState& state) {
  const auto start = std::chrono::steady_clock::now();
  const SearchConfig& config = ctx.config();
  Evidence& evidence = state.evidence;

  GrowthOptions growth;
  growth.rounds = config.growth_rounds;
  growth.max_pool = config.max_pool;
  growth.pairs_per_round = config.pairs_per_round;
  growth.symmetry = config.canonical_pool ? ctx.group() : nullptr;
  if (config.reseed_each_episode && episode > 1) state.pool = ctx.seed_pool(evidence);
  for (const auto& q : grow_pool(state.pool, growth, state.rng)) admit(ctx, state, q);

  std::vector<InequalitySpec> selected;
  for (const auto& [q, s] : evidence.specs) selected.push_back(q);

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < state.candidates.size(); ++i)
    if (!evidence.specs.count(state.candidates[i])) open.push_back(i);
  std::size_t quota = std::min(state.kappa, open.size());

  // Guided share: the candidates most violated by the previous optimum.
  if (!state.hint.empty() && config.guided_fraction > 0) {
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t k = 0; k < open.size(); ++k) {
      auto s = hinted_slack(state.candidates[open[k]], ctx, state.hint);
      if (s && *s < -1e-9) violated.emplace_back(*s, k);
    }
    std::sort(violated.begin(), violated.end());
    const auto guided = std::min(violated.size(), static_cast<std::size_t>(std::floor(config.guided_fraction * state.kappa)));
    std::vector<bool> taken(open.size(), false);
    for (std::size_t k = 0; k < guided; ++k) {
      taken[violated[k].second] = true;
      selected.push_back(state.candidates[open[violated[k].second]]);
    }
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < open.size(); ++k)
      if (!taken[k]) rest.push_back(open[k]);
    open = std::move(rest);
    quota -= guided;
  }
  for (std::size_t k = 0; k < quota && k < open.size(); ++k) {
    std::swap(open[k], open[k + uniform_index(state.rng, open.size() - k)]);
    selected.push_back(state.candidates[open[k]]);
  }

  EpisodeResult out;
  const AssembledLP lp = assemble(selected, ctx.problem(), ctx.eta(), ctx.group());
  out.solution = solve(lp);
  if (out.solution.status != LpStatus::optimal)
    throw std::runtime_error("episode LP is infeasible: the problem constraints contradict each other");
  out.value = out.solution.value;

  for (std::size_t k = 0; k < lp.first_baseline(); ++k) {
    const auto& row = lp.rows()[k];
    const Rational& w = out.solution.duals[k];
    if (row.origin.kind != RowOrigin::Kind::shannon || w == 0) continue;
    EvidenceStats& s = evidence.specs[row.origin.spec];
    s.last_effective = episode;
    ++s.episodes_used;
    if (abs(w) > s.max_weight) s.max_weight = abs(w);
  }
  out.effective = effective_set(out.solution, lp);
  for (auto it = evidence.specs.begin(); it != evidence.specs.end();) {
    if (episode - it->second.last_effective >= config.stagnation_window) {
      // Evicted specs stay in the candidate reservoir and remain sampleable.
      it = evidence.specs.erase(it);
    } else {
      ++it;
    }
  }

  state.hint.clear();
  for (int c = 2; c < lp.num_columns(); ++c) state.hint[lp.term(c)] = to_double(out.solution.primal[c]);

  if (!evidence.best_bound || out.value > *evidence.best_bound) {
    try {
      ProofCertificate cert = make_certificate(out.solution, lp);
      evidence.best_bound = out.value;
      evidence.best_certificate = std::move(cert);
      out.improved = true;
    } catch (const std::runtime_error&) {
      // Uncertifiable: keep searching with the previous best.
    }
  }

  out.stats.episode = episode;
  out.stats.value = out.value;
  out.stats.selected = selected.size();
  out.stats.effective = out.effective.size();
  out.stats.kappa = state.kappa;
  out.stats.pool = state.pool.size();
  out.stats.candidates = state.candidates.size();
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SearchResult run_search(const Problem& problem, const Rational& eta, const SearchConfig& config, const Evidence* warm_start,
                        const EpisodeCallback& on_episode) {
  SearchContext ctx(problem, eta, config);
  SearchState state;
  state.rng.seed(config.seed);
  state.kappa = config.kappa_init;
  if (warm_start)
    for (const auto& [q, s] : warm_start->specs)
      if (ctx.passes_filter(q)) state.evidence.specs.emplace(q, EvidenceStats{});
  state.pool = ctx.seed_pool(state.evidence);
  for (const auto& [q, s] : state.evidence.specs) admit(ctx, state, q);
  int stagnant = 0;
  SearchResult result;
  Evidence& evidence = state.evidence;

  const auto started = std::chrono::steady_clock::now();
  for (int episode = 1; episode <= config.max_episodes; ++episode) {
    if (config.time_limit_seconds > 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >= config.time_limit_seconds)
      break;
    const std::optional<Rational> before = evidence.best_bound;
    EpisodeResult ep = run_episode(ctx, episode, state);
    if (before && !(*evidence.best_bound >= *before)) throw std::logic_error("best bound decreased");
    result.stats.push_back(ep.stats);
    if (on_episode) on_episode(ep.stats);
    stagnant = ep.improved ? 0 : stagnant + 1;
    if (config.stop_at && evidence.best_bound && *evidence.best_bound >= *config.stop_at) break;
    if (stagnant >= config.stagnation_window) {
      const std::size_t grown = std::min(std::max<std::size_t>(state.kappa * 2, 1), config.kappa_max);
      if (grown != state.kappa) {
        state.kappa = grown;
        state.pool = ctx.seed_pool(evidence);
      }
      stagnant = 0;
    }
  }

  if (evidence.best_certificate) {
    // Final gate: the returned certificate must pass the independent check.
    const AssembledLP empty = assemble({}, ctx.problem(), eta, ctx.group());
    const auto report = verify_certificate(write_certificate(*evidence.best_certificate), empty.problem_text());
    if (!report.ok) throw std::logic_error("certificate failed verification: " + report.diagnostic);
    result.certified = true;
    result.bound = *evidence.best_bound;
    result.certificate = *evidence.best_certificate;
    result.problem_text = empty.problem_text();
  }
  result.evidence = std::move(evidence);
  return result;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<SweepPoint> sweep_eta(const Problem& problem, const std::vector<Rational>& etas, const SearchConfig& config,
                                  bool warm_start, unsigned threads) {
  if (etas.empty()) throw std::invalid_argument("empty eta list");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (etas[i] < 0) throw std::invalid_argument("eta must be nonnegative");
    for (std::size_t j = 0; j < i; ++j)
      if (etas[i] == etas[j]) throw std::invalid_argument("eta values must be distinct");
  }
  std::vector<SweepPoint> points(etas.size());
  auto run_one = [&](std::size_t i, const Evidence* warm) {
    SearchConfig c = config;
    c.seed = derive_seed(config.seed, i);
    points[i].eta = etas[i];
    try {
      points[i].result = run_search(problem, etas[i], c, warm);
      points[i].ok = points[i].result.certified;
      if (!points[i].ok) points[i].error = "no certifiable bound found";
    } catch (const std::exception& e) {
      points[i].error = e.what();
    }
  };
  if (warm_start || threads <= 1) {
    for (std::size_t i = 0; i < etas.size(); ++i) {
      const Evidence* warm = warm_start && i > 0 && points[i - 1].ok ? &points[i - 1].result.evidence : nullptr;
      run_one(i, warm);
    }
    return points;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, etas.size()); ++t)
    workers.emplace_back([&] {
      for (std::size_t i; (i = next++) < etas.size();) run_one(i, nullptr);
    });
  for (auto& w : workers) w.join();
  return points;
}

std::string stats_csv(const std::vector<EpisodeStats>& stats) {
  std::ostringstream out;
  out << "episode,value,value_decimal,selected,effective,kappa,pool,candidates\n";
  out.precision(12);
  for (const auto& s : stats)
    out << s.episode << ',' << to_string(s.value) << ',' << to_double(s.value) << ',' << s.selected << ',' << s.effective << ','
        << s.kappa << ',' << s.pool << ',' << s.candidates << '\n';
  return out.str();
}

}  // namespace itbound
