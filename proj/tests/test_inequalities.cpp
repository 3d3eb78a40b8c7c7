#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "itbound/inequality.hpp"
#include "itbound/oracle.hpp"
#include "itbound/regen.hpp"
#include "itbound/term_pool.hpp"

using namespace itbound;

namespace {

/// Elemental pieces whose sum is expand(q), by the chain rule. Used as an
/// exact proof that q is implied by the elemental set.
std::vector<InequalitySpec> decompose(const InequalitySpec& q, int n) {
  std::vector<InequalitySpec> out;
  auto cmi_parts = [&](TermSet b, TermSet c, TermSet a) {
    // I(B;C|A) = sum_i sum_j I(b_i ; c_j | A, b_<i, c_<j)
    TermSet before_b;
    for (int i : b.members()) {
      TermSet before_c;
      for (int j : c.members()) {
        out.push_back(InequalitySpec::cmi(TermSet::singleton(i), TermSet::singleton(j), a | before_b | before_c));
        before_c = before_c | TermSet::singleton(j);
      }
      before_b = before_b | TermSet::singleton(i);
    }
  };
  if (q.kind == InequalitySpec::Kind::cmi) {
    cmi_parts(q.left, q.right, q.given);
  } else {
    // H(i|A) = H(i|rest) + I(i ; rest - A | A)
    const TermSet all(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    const TermSet i = TermSet::singleton(q.variable);
    out.push_back(InequalitySpec::monotonicity(q.variable, all - i));
    const TermSet rest = all - i - q.given;
    if (!rest.empty()) cmi_parts(i, rest, q.given);
  }
  return out;
}

bool implied_by_elemental(const InequalitySpec& q, int n) {
  LinearForm sum;
  for (const auto& part : decompose(q, n)) {
    if (!is_elemental(part, n)) return false;
    sum.add_scaled(expand(part), 1);
  }
  LinearForm target = expand(q);
  target.set_relation(sum.relation());
  return sum == target;
}

/// Joint entropies (bits) of a random distribution on n binary variables.
std::vector<double> random_entropic_vector(int n, std::mt19937_64& rng) {
  std::vector<double> p(std::size_t{1} << n);
  std::exponential_distribution<double> e(1.0);
  double total = 0;
  for (auto& v : p) total += (v = e(rng) * (rng() % 3 == 0 ? 0.0 : 1.0));
  if (total == 0) p[0] = total = 1;
  std::vector<double> h(std::size_t{1} << n, 0.0);
  for (std::uint64_t mask = 1; mask < h.size(); ++mask) {
    std::vector<double> marginal(std::size_t{1} << n, 0.0);
    for (std::uint64_t x = 0; x < p.size(); ++x) marginal[x & mask] += p[x] / total;
    for (double m : marginal)
      if (m > 0) h[mask] -= m * std::log2(m);
  }
  return h;
}

}  // namespace

TEST_CASE("expand") {
  const TermSet x1 = TermSet::singleton(1), x2 = TermSet::singleton(2), x3 = TermSet::singleton(3);
  const auto a = expand(InequalitySpec::cmi(x1, x2, TermSet()));
  CHECK(a.entropy().size() == 3);
  CHECK(a.coefficient(x1) == 1);
  CHECK(a.coefficient(x2) == 1);
  CHECK(a.coefficient(x1 | x2) == -1);

  const auto b = expand(InequalitySpec::cmi(x1, x2, x3));
  CHECK(b.entropy().size() == 4);
  CHECK(b.coefficient(x1 | x3) == 1);
  CHECK(b.coefficient(x2 | x3) == 1);
  CHECK(b.coefficient(x1 | x2 | x3) == -1);
  CHECK(b.coefficient(x3) == -1);

  const auto c = expand(InequalitySpec::monotonicity(1, x2 | x3));
  CHECK(c.entropy().size() == 2);
  CHECK(c.coefficient(x1 | x2 | x3) == 1);
  CHECK(c.coefficient(x2 | x3) == -1);

  CHECK_THROWS_AS(validate(InequalitySpec::cmi(x1, x1 | x2, TermSet()), 4), std::invalid_argument);
  CHECK_THROWS_AS(validate(InequalitySpec::monotonicity(1, x1), 4), std::invalid_argument);
  CHECK_THROWS_AS(validate(InequalitySpec::cmi(x1, TermSet(), x2), 4), std::invalid_argument);
  CHECK_THROWS_AS(validate(InequalitySpec::cmi(x1, TermSet::singleton(9), x2), 4), std::invalid_argument);
}

TEST_CASE("I(B;C|A) and I(C;B|A) are the same spec") {
  const TermSet b = TermSet::of({0, 4}), c = TermSet::of({2}), a = TermSet::of({1});
  CHECK(InequalitySpec::cmi(b, c, a) == InequalitySpec::cmi(c, b, a));
}

TEST_CASE("count_elemental") {
  CHECK(count_elemental(2) == 3);
  CHECK(count_elemental(6) == 246);
  CHECK(count_elemental(30) == BigInt("116769423390"));
}

TEST_CASE("enumeration matches the count for N = 1..10, without duplicates") {
  for (int n = 1; n <= 10; ++n) {
    ElementalEnumerator e(n);
    std::unordered_set<InequalitySpec, InequalitySpecHash> seen;
    long total = 0;
    while (auto q = e.next()) {
      REQUIRE(is_elemental(*q, n));
      REQUIRE(seen.insert(*q).second);
      ++total;
    }
    CHECK(BigInt(total) == count_elemental(n));
  }
  const auto two = materialize_elemental(2);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == InequalitySpec::monotonicity(0, TermSet::singleton(1)));
  CHECK(two[1] == InequalitySpec::monotonicity(1, TermSet::singleton(0)));
  CHECK(two[2] == InequalitySpec::cmi(TermSet::singleton(0), TermSet::singleton(1), TermSet()));
  CHECK(materialize_elemental(3).size() == 9);
}

TEST_CASE("materialization refuses large universes and cites the count") {
  try {
    materialize_elemental(30);
    FAIL("materialized 30 variables");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("116769423390") != std::string::npos);
  }
  CHECK_THROWS(materialize_elemental(5, 4));
  CHECK(materialize_elemental(5, 5).size() == 85);
}

TEST_CASE("expansions have unit coefficients and at most four terms") {
  for (const auto& q : materialize_elemental(8)) {
    const auto f = expand(q);
    REQUIRE(f.entropy().size() <= 4);
    for (const auto& [t, v] : f.entropy()) REQUIRE((v == 1 || v == -1));
  }
}

TEST_CASE("inequality encoding is bit exact and round-trips") {
  const auto spec = regen::build_regen(3, regen::Representation::reduced);
  const auto& u = spec.universe;
  const TermSet s12 = TermSet::singleton(spec.message(1, 2)), s21 = TermSet::singleton(spec.message(2, 1));
  const auto mono = InequalitySpec::monotonicity(spec.message(1, 2), s21);
  CHECK(encode(mono, u) == "MONO S_1_2 | {S_2_1}");
  const auto cmi = InequalitySpec::cmi(s12, s21, TermSet());
  CHECK(encode(cmi, u) == "CMI {S_1_2} ; {S_2_1} | {}");
  for (const auto& q : materialize_elemental(u.size())) REQUIRE(parse_inequality(encode(q, u), u) == q);
  CHECK_THROWS(parse_inequality("CMI {S_1_2} ; {S_1_2} | {}", u));
  CHECK_THROWS(parse_inequality("MONO S_7_1 | {}", u));
}

TEST_CASE("grow_pool on a two-term pool") {
  TermPool pool;
  const TermSet p = TermSet::of({1, 2}), q = TermSet::of({2, 3});
  pool.insert(p, Provenance::bootstrap);
  pool.insert(q, Provenance::bootstrap);
  GrowthOptions opt;
  opt.rounds = 1;
  opt.monotonicity_candidates = false;
  Rng rng(1);
  const auto out = grow_pool(pool, opt, rng);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == InequalitySpec::cmi(TermSet::of({1}), TermSet::of({3}), TermSet::of({2})));
  CHECK(pool.contains(TermSet::of({1, 2, 3})));
  CHECK(pool.contains(TermSet::of({2})));
  const auto touched = touched_terms(out[0]);
  CHECK(std::set<TermSet>(touched.begin(), touched.end()) == std::set<TermSet>{p, q, p | q, p & q});
}

TEST_CASE("nested pairs yield no candidates") {
  TermPool pool;
  pool.insert(TermSet::of({1}), Provenance::bootstrap);
  pool.insert(TermSet::of({1, 2}), Provenance::bootstrap);
  pool.insert(TermSet::of({1, 2, 3}), Provenance::bootstrap);
  GrowthOptions opt;
  opt.rounds = 2;
  opt.monotonicity_candidates = false;
  Rng rng(5);
  CHECK(grow_pool(pool, opt, rng).empty());
  CHECK(pool.size() == 3);
}

TEST_CASE("grow_pool is deterministic for a seed and respects max_pool") {
  const auto spec = regen::build_regen(4, regen::Representation::reduced);
  const auto problem = spec.to_problem(false);
  auto run = [&](std::uint64_t seed) {
    TermPool pool;
    for (const auto& c : problem.constraints)
      for (const auto& [t, v] : c.form.entropy()) pool.insert(t, Provenance::bootstrap);
    GrowthOptions opt;
    opt.rounds = 4;
    opt.max_pool = 50;
    Rng rng(seed);
    auto out = grow_pool(pool, opt, rng);
    CHECK(pool.size() <= 50);
    std::unordered_set<InequalitySpec, InequalitySpecHash> unique(out.begin(), out.end());
    CHECK(unique.size() == out.size());
    return std::make_pair(out, pool.terms());
  };
  CHECK(run(11) == run(11));
}

TEST_CASE("grown specs are Shannon-type") {
  for (int n : {3, 4}) {
    const auto spec = regen::build_regen(n, regen::Representation::reduced);
    const auto problem = spec.to_problem(false);
    const int size = spec.universe.size();
    TermPool pool;
    for (const auto& c : problem.constraints)
      for (const auto& [t, v] : c.form.entropy()) pool.insert(t, Provenance::bootstrap);
    GrowthOptions opt;
    opt.rounds = 3;
    opt.max_pool = (std::size_t{1} << size) - 1;
    Rng rng(2);
    const auto specs = grow_pool(pool, opt, rng);
    REQUIRE(!specs.empty());
    for (const auto& q : specs) REQUIRE(implied_by_elemental(q, size));

    if (n != 3) continue;
    // Nonnegative slack on the layered codes and on random entropic vectors.
    std::vector<regen::LayeredOracle> codes;
    for (int r = 2; r <= n; ++r) codes.emplace_back(n, r);
    std::mt19937_64 vrng(9);
    for (int k = 0; k < 1000; ++k) {
      const auto h = random_entropic_vector(size, vrng);
      const auto& code = codes[k % codes.size()];
      for (const auto& q : specs) {
        const auto f = expand(q);
        double s = 0;
        Rational exact = 0;
        for (const auto& [t, v] : f.entropy()) {
          s += to_double(v) * h[t.bits()];
          exact += v * code(t);
        }
        REQUIRE(s >= -1e-9);
        REQUIRE(exact >= 0);
      }
    }
  }
}

TEST_CASE("filter_by_oracle") {
  const auto u = make_universe({"X1", "X2"});
  const TermSet x1 = TermSet::singleton(0), x2 = TermSet::singleton(1);
  const auto q = InequalitySpec::cmi(x1, x2, TermSet());
  const auto tight = table_oracle(u, {{x1, 1}, {x2, 1}, {x1 | x2, 2}});
  const auto loose = table_oracle(u, {{x1, 1}, {x2, 1}, {x1 | x2, 1}});
  CHECK(filter_by_oracle({q}, tight).size() == 1);
  CHECK(filter_by_oracle({q}, loose).empty());
  CHECK(slack(q, loose) == 1);

  const auto spec = regen::build_regen(5, regen::Representation::reduced);
  const regen::LayeredOracle code(5, 3);
  const auto s = InequalitySpec::cmi(TermSet::singleton(spec.message(1, 2)), TermSet::singleton(spec.message(2, 1)), TermSet());
  CHECK(filter_by_oracle({s}, code.as_oracle()).size() == 1);
}

TEST_CASE("filtering is a pure, idempotent subset operation") {
  const auto all = materialize_elemental(12);
  const auto oracle = regen::LayeredOracle(4, 3).as_oracle();
  const auto kept = filter_by_oracle(all, oracle);
  CHECK(kept.size() < all.size());
  CHECK(filter_by_oracle(kept, oracle) == kept);
  // Order preserved: kept is a subsequence of all.
  std::size_t j = 0;
  for (const auto& q : all)
    if (j < kept.size() && kept[j] == q) ++j;
  CHECK(j == kept.size());
}
