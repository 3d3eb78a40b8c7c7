#include "itbound/regen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace itbound::regen {

Representation parse_representation(std::string_view text) {
  if (text == "reduced") return Representation::reduced;
  if (text == "full") return Representation::full;
  throw std::invalid_argument("representation must be 'reduced' or 'full', got '" + std::string(text) + "'");
}

const char* to_string(Representation r) { return r == Representation::reduced ? "reduced" : "full"; }

namespace {

std::string s_label(int i, int j) { return "S_" + std::to_string(i) + "_" + std::to_string(j); }

int message_index(int n, Representation repr, int from, int to) {
  const int offset = repr == Representation::full ? n : 0;
  const int within = (from - 1) * (n - 1) + (to < from ? to - 1 : to - 2);
  return offset + within;
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

std::string node_list(const std::vector<int>& nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? "," : "") + std::to_string(nodes[i]);
  return s;
}

}  // namespace

int RegenSpec::message(int from, int to) const { return message_index(n, representation, from, to); }

int RegenSpec::storage(int node) const {
  if (representation != Representation::full) throw std::logic_error("storage variables exist only in the full representation");
  return node - 1;
}

TermSet RegenSpec::outgoing(int node) const {
  TermSet t;
  for (int k = 1; k <= n; ++k)
    if (k != node) t = t | TermSet::singleton(message(node, k));
  return t;
}

TermSet RegenSpec::incoming(int node) const {
  TermSet t;
  for (int k = 1; k <= n; ++k)
    if (k != node) t = t | TermSet::singleton(message(k, node));
  return t;
}

RegenSpec build_regen(int n, Representation representation) {
  if (n < 3) throw std::invalid_argument("regenerating code problem needs n >= 3, got " + std::to_string(n));
  if (n > 8) throw std::invalid_argument("regenerating code problem supports n <= 8 (64 variables)");
  RegenSpec spec;
  spec.n = n;
  spec.representation = representation;
  std::vector<std::string> labels;
  if (representation == Representation::full)
    for (int i = 1; i <= n; ++i) labels.push_back("W_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) labels.push_back(s_label(i, j));
  spec.universe = make_universe(labels);

  auto& out = spec.constraints;
  const auto groups = subsets_of_size(n, n - 1);
  if (representation == Representation::full) {
    for (int i = 1; i <= n; ++i) {
      const TermSet w = TermSet::singleton(spec.storage(i));
      LinearForm f(Relation::equal);
      f.add_entropy(w, 1).add_entropy(w | spec.outgoing(i), -1);
      out.push_back({"encode[" + std::to_string(i) + "]", f});
    }
    for (int j = 1; j <= n; ++j) {
      const TermSet w = TermSet::singleton(spec.storage(j));
      LinearForm f(Relation::equal);
      f.add_entropy(spec.incoming(j), 1).add_entropy(w | spec.incoming(j), -1);
      out.push_back({"repair[" + std::to_string(j) + "]", f});
    }
    for (int i = 1; i <= n; ++i) {
      LinearForm f(Relation::greater_equal);
      f.add_alpha(1).add_entropy(TermSet::singleton(spec.storage(i)), -1);
      out.push_back({"storage[" + std::to_string(i) + "]", f});
    }
  } else {
    for (int j = 1; j <= n; ++j) {
      LinearForm f(Relation::equal);
      f.add_entropy(spec.outgoing(j) | spec.incoming(j), 1).add_entropy(spec.incoming(j), -1);
      out.push_back({"repair[" + std::to_string(j) + "]", f});
    }
  }
  for (const auto& g : groups) {
    TermSet t;
    for (int i : g)
      t = t | (representation == Representation::full ? TermSet::singleton(spec.storage(i)) : spec.outgoing(i));
    LinearForm f(Relation::greater_equal);
    f.add_entropy(t, 1).add_constant(-1);
    out.push_back({"reconstruct[" + node_list(g) + "]", f});
  }
  if (representation == Representation::reduced) {
    for (int i = 1; i <= n; ++i) {
      LinearForm f(Relation::greater_equal);
      f.add_alpha(1).add_entropy(spec.outgoing(i), -1);
      out.push_back({"storage[" + std::to_string(i) + "]", f});
    }
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      LinearForm f(Relation::greater_equal);
      f.add_beta(1).add_entropy(TermSet::singleton(spec.message(i, j)), -1);
      out.push_back({"download[" + std::to_string(i) + "," + std::to_string(j) + "]", f});
    }
  return spec;
}

namespace {

Permutation node_action(int n, Representation repr, const std::vector<int>& node_image) {
  const int size = repr == Representation::full ? n * n : n * (n - 1);
  std::vector<int> image(size);
  if (repr == Representation::full)
    for (int i = 1; i <= n; ++i) image[i - 1] = node_image[i] - 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) image[message_index(n, repr, i, j)] = message_index(n, repr, node_image[i], node_image[j]);
  return Permutation(std::move(image));
}

}  // namespace

std::vector<Permutation> regen_symmetry_generators(int n, Representation representation) {
  std::vector<int> swap(n + 1), cycle(n + 1);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[1], swap[2]);
  for (int i = 1; i <= n; ++i) cycle[i] = i % n + 1;
  return {node_action(n, representation, swap), node_action(n, representation, cycle)};
}

SymmetryGroup regen_symmetry(int n, Representation representation) {
  if (n < 3) throw std::invalid_argument("regen_symmetry needs n >= 3");
  const int size = representation == Representation::full ? n * n : n * (n - 1);
  return SymmetryGroup::generate(size, regen_symmetry_generators(n, representation));
}

Problem RegenSpec::to_problem(bool with_symmetry) const {
  Problem p;
  p.name = "regen-n" + std::to_string(n) + "-" + regen::to_string(representation);
  p.universe = universe;
  p.constraints = constraints;
  if (with_symmetry) p.symmetry_generators = regen_symmetry_generators(n, representation);
  return p;
}

LayeredOracle::LayeredOracle(int n, int r) : n_(n), r_(r) {
  if (n < 2 || r < 2 || r > n) throw std::invalid_argument("layered code needs 2 <= r <= n");
  if (n * (n - 1) > 64) throw std::invalid_argument("layered code supports n <= 8");
  BigInt groups;
  mpz_bin_uiui(groups.get_mpz_t(), n, r);
  normalizer_ = groups * (r - 1);
  universe_bits_ = n * (n - 1) == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n * (n - 1))) - 1);
  for (const auto& g : subsets_of_size(n, r)) {
    std::vector<std::uint64_t> masks;
    for (int i : g) {
      std::uint64_t m = 0;
      for (int j : g)
        if (j != i) m |= std::uint64_t{1} << message_index(n, Representation::reduced, i, j);
      masks.push_back(m);
    }
    symbol_masks_.push_back(std::move(masks));
  }
}

long LayeredOracle::count(TermSet t) const {
  if ((t.bits() & ~universe_bits_) != 0) throw std::invalid_argument("term lies outside the reduced regenerating-code universe");
  long total = 0;
  for (const auto& masks : symbol_masks_) {
    int covered = 0;
    for (std::uint64_t m : masks) covered += (t.bits() & m) != 0;
    total += std::min(covered, r_ - 1);
  }
  return total;
}

Rational LayeredOracle::operator()(TermSet t) const { return ratio(BigInt(count(t)), normalizer_); }

EntropyOracle LayeredOracle::as_oracle() const {
  EntropyOracle o;
  o.universe = build_regen(std::max(n_, 3), Representation::reduced).universe;
  o.eval = [copy = *this](TermSet t) { return copy(t); };
  return o;
}

Rational layered_entropy(const LayeredOracle& o, TermSet t) { return o(t); }

std::vector<TradeoffPoint> inner_bound_points(int n) {
  if (n < 2) throw std::invalid_argument("inner_bound_points needs n >= 2");
  std::vector<TradeoffPoint> out;
  for (int r = 2; r <= n; ++r) out.push_back({ratio(r, n * (r - 1)), ratio(r, n * (n - 1))});
  for (auto& p : out) {
    p.alpha.canonicalize();
    p.beta.canonicalize();
  }
  return out;
}

}  // namespace itbound::regen
