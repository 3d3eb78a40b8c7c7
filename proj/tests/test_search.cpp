#include <doctest.h>

#include "itbound/certificate.hpp"
#include "itbound/regen.hpp"
#include "itbound/search.hpp"
#include "itbound/verify.hpp"

using namespace itbound;
using regen::Representation;

namespace {

Problem regen_problem(int n, bool symmetric = true) {
  return regen::build_regen(n, Representation::reduced).to_problem(symmetric);
}

Rational full_value(int n, const Rational& eta) {
  const auto problem = regen_problem(n);
  const auto g = problem.symmetry_group();
  return solve(assemble(materialize_elemental(n * (n - 1)), problem, eta, &g)).value;
}

SearchConfig small_config(std::uint64_t seed) {
  SearchConfig c;
  c.seed = seed;
  c.max_episodes = 50;
  c.symmetry = true;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SearchConfig c;
  c.kappa_init = 100;
  c.kappa_max = 10;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SearchConfig{};
  c.guided_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SearchConfig{};
  c.stagnation_window = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_NOTHROW(SearchConfig{}.validate());

  SearchConfig sym;
  sym.symmetry = true;
  CHECK_THROWS_AS(SearchContext(regen_problem(3, false), 1, sym), std::invalid_argument);
}

TEST_CASE("an episode with nothing sampled gives the constraints-only value") {
  const auto problem = regen_problem(3);
  SearchConfig c = small_config(1);
  SearchContext ctx(problem, 1, c);
  SearchState state;
  state.rng.seed(1);
  state.kappa = 0;
  state.pool = ctx.seed_pool(state.evidence);
  const auto ep = run_episode(ctx, 1, state);
  CHECK(ep.stats.selected == 0);
  CHECK(ep.value == solve(assemble({}, problem, 1)).value);
}

TEST_CASE("(3,2,2) search reaches the full LP value and never exceeds it") {
  for (const char* e : {"0", "1/2", "1", "2"}) {
    const Rational eta = parse_rational(e);
    const Rational full = full_value(3, eta);
    Rational best = -1;
    const auto result = run_search(regen_problem(3), eta, small_config(1), nullptr, [&](const EpisodeStats& s) {
      CHECK(s.value <= full);
      best = std::max(best, s.value);
    });
    REQUIRE(result.certified);
    CHECK(result.bound == full);
    CHECK(result.bound == best);
    CHECK(verify_certificate(write_certificate(result.certificate), result.problem_text).ok);
  }
}

TEST_CASE("search works without symmetry") {
  SearchConfig c = small_config(3);
  c.symmetry = false;
  const auto result = run_search(regen_problem(3, false), 1, c);
  REQUIRE(result.certified);
  CHECK(result.bound == 1);
  CHECK(verify_certificate(write_certificate(result.certificate), result.problem_text).ok);
}

TEST_CASE("filtered search keeps only tight inequalities") {
  SearchConfig c = small_config(2);
  c.filters = {regen::LayeredOracle(3, 2).as_oracle(), regen::LayeredOracle(3, 3).as_oracle()};
  const auto problem = regen_problem(3);
  const auto result = run_search(problem, 1, c);
  REQUIRE(result.certified);
  CHECK(result.bound == 1);
  int shannon = 0;
  for (const auto& line : result.certificate.lines) {
    if (line.origin != "shannon") continue;
    ++shannon;
    const auto q = parse_inequality(line.constraint, problem.universe);
    for (const auto& f : c.filters) CHECK(slack(q, f) == 0);
  }
  CHECK(shannon > 0);
}

TEST_CASE("early stop at the target value") {
  SearchConfig c = small_config(4);
  c.max_episodes = 500;
  c.stop_at = Rational(1);
  const auto result = run_search(regen_problem(3), 1, c);
  CHECK(result.bound == 1);
  CHECK(result.stats.size() < 500);
}

TEST_CASE("same seed, same certificate bytes") {
  auto once = [] {
    const auto r = run_search(regen_problem(3), Rational(1, 2), small_config(7));
    std::vector<std::string> values;
    for (const auto& s : r.stats) values.push_back(to_string(s.value));
    return std::make_pair(write_certificate(r.certificate), values);
  };
  CHECK(once() == once());
}

TEST_CASE("evidence merge is a union with maximum statistics") {
  const auto q1 = InequalitySpec::cmi(TermSet::of({0}), TermSet::of({1}), TermSet());
  const auto q2 = InequalitySpec::cmi(TermSet::of({0}), TermSet::of({2}), TermSet());
  Evidence a, b;
  a.specs[q1] = {3, 10, Rational(1, 2)};
  b.specs[q1] = {5, 8, Rational(1, 3)};
  b.specs[q2] = {1, 1, Rational(2)};
  a.best_bound = Rational(1, 4);
  b.best_bound = Rational(1, 3);
  Evidence ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  REQUIRE(ab.specs.size() == 2);
  for (const Evidence* e : {&ab, &ba}) {
    CHECK(e->specs.at(q1).episodes_used == 5);
    CHECK(e->specs.at(q1).last_effective == 10);
    CHECK(e->specs.at(q1).max_weight == Rational(1, 2));
    CHECK(*e->best_bound == Rational(1, 3));
  }
}

TEST_CASE("sweep") {
  const auto problem = regen_problem(3);
  SearchConfig c = small_config(1);
  const auto points = sweep_eta(problem, {0, Rational(1, 2), 1}, c);
  REQUIRE(points.size() == 3);
  for (const auto& p : points) {
    REQUIRE(p.ok);
    CHECK(p.result.bound == full_value(3, p.eta));
  }
  // eta = 0 is min alpha alone.
  CHECK(points[0].result.bound == Rational(1, 2));

  const auto parallel = sweep_eta(problem, {0, Rational(1, 2), 1}, c, false, 2);
  for (std::size_t i = 0; i < parallel.size(); ++i) CHECK(parallel[i].result.bound == points[i].result.bound);

  CHECK_THROWS_AS(sweep_eta(problem, {}, c), std::invalid_argument);
  CHECK_THROWS_AS(sweep_eta(problem, {1, 1}, c), std::invalid_argument);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("stats csv") {
  const auto r = run_search(regen_problem(3), 1, small_config(1));
  const auto csv = stats_csv(r.stats);
  CHECK(csv.rfind("episode,value,value_decimal,selected,effective,kappa,pool,candidates\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.stats.size() + 1);
}
