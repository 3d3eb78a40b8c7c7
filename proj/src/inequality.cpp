#include "itbound/inequality.hpp"

#include <stdexcept>

namespace itbound {

InequalitySpec InequalitySpec::monotonicity(int variable, TermSet given) {
  InequalitySpec q;
  q.kind = Kind::monotonicity;
  q.variable = variable;
  q.given = given;
  return q;
}

InequalitySpec InequalitySpec::cmi(TermSet left, TermSet right, TermSet given) {
  InequalitySpec q;
  q.kind = Kind::cmi;
  if (right < left) std::swap(left, right);
  q.left = left;
  q.right = right;
  q.given = given;
  return q;
}

std::size_t InequalitySpecHash::operator()(const InequalitySpec& q) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(q.kind) * 0x9E3779B97F4A7C15ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(q.variable + 1));
  mix(q.left.bits());
  mix(q.right.bits());
  mix(q.given.bits());
  return static_cast<std::size_t>(h);
}

void validate(const InequalitySpec& q, int universe_size) {
  const TermSet universe(universe_size >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe_size) - 1));
  if (!q.given.subset_of(universe)) throw std::invalid_argument("inequality references a variable outside the universe");
  if (q.kind == InequalitySpec::Kind::monotonicity) {
    if (q.variable < 0 || q.variable >= universe_size)
      throw std::invalid_argument("monotonicity variable outside the universe");
    if (q.given.contains(q.variable)) throw std::invalid_argument("monotonicity variable must not be in the conditioning set");
    return;
  }
  if (!q.left.subset_of(universe) || !q.right.subset_of(universe))
    throw std::invalid_argument("inequality references a variable outside the universe");
  if (q.left.empty() || q.right.empty()) throw std::invalid_argument("mutual information sides must be non-empty");
  if (!q.left.disjoint(q.right) || !q.left.disjoint(q.given) || !q.right.disjoint(q.given))
    throw std::invalid_argument("mutual information sets must be pairwise disjoint");
}

bool is_elemental(const InequalitySpec& q, int universe_size) {
  if (q.kind == InequalitySpec::Kind::monotonicity) {
    const TermSet universe(universe_size >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe_size) - 1));
    return q.given == universe - TermSet::singleton(q.variable);
  }
  return q.left.size() == 1 && q.right.size() == 1;
}

std::vector<TermSet> touched_terms(const InequalitySpec& q) {
  if (q.kind == InequalitySpec::Kind::monotonicity) return {q.given | TermSet::singleton(q.variable), q.given};
  return {q.given | q.left, q.given | q.right, q.given | q.left | q.right, q.given};
}

LinearForm expand(const InequalitySpec& q) {
  LinearForm f(Relation::greater_equal);
  if (q.kind == InequalitySpec::Kind::monotonicity) {
    f.add_entropy(q.given | TermSet::singleton(q.variable), 1);
    f.add_entropy(q.given, -1);
    return f;
  }
  f.add_entropy(q.given | q.left, 1);
  f.add_entropy(q.given | q.right, 1);
  f.add_entropy(q.given | q.left | q.right, -1);
  f.add_entropy(q.given, -1);
  return f;
}

BigInt count_elemental(int n) {
  if (n < 1) throw std::invalid_argument("count_elemental requires n >= 1");
  BigInt pairs = BigInt(n) * (n - 1) / 2;
  BigInt subsets = 0;
  if (n >= 2) mpz_ui_pow_ui(subsets.get_mpz_t(), 2, static_cast<unsigned long>(n - 2));
  return BigInt(n) + pairs * subsets;
}

ElementalEnumerator::ElementalEnumerator(int n) : n_(n) {
  if (n < 1 || n > kMaxVariables) throw std::invalid_argument("elemental enumeration needs 1 <= n <= 64");
  if (n >= 2) load_pair();
}

void ElementalEnumerator::load_pair() {
  rest_.clear();
  for (int k = 0; k < n_; ++k)
    if (k != i_ && k != j_) rest_.push_back(k);
  subset_ = 0;
  subset_count_ = rest_.size() >= 64 ? 0 : (std::uint64_t{1} << rest_.size());
}

std::optional<InequalitySpec> ElementalEnumerator::next() {
  if (mono_ < n_) {
    const TermSet all(n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1));
    const int i = mono_++;
    return InequalitySpec::monotonicity(i, all - TermSet::singleton(i));
  }
  if (n_ < 2 || i_ >= n_ - 1) return std::nullopt;
  std::uint64_t given = 0;
  for (std::size_t k = 0; k < rest_.size(); ++k)
    if ((subset_ >> k) & 1U) given |= std::uint64_t{1} << rest_[k];
  InequalitySpec q = InequalitySpec::cmi(TermSet::singleton(i_), TermSet::singleton(j_), TermSet(given));
  if (++subset_ == subset_count_) {
    if (++j_ == n_) {
      ++i_;
      j_ = i_ + 1;
    }
    if (i_ < n_ - 1) load_pair();
  }
  return q;
}

std::vector<InequalitySpec> materialize_elemental(int n, int cap) {
  if (n > cap)
    throw std::length_error("refusing to materialize " + count_elemental(n).get_str() + " elemental inequalities for " +
                            std::to_string(n) + " variables (cap is " + std::to_string(cap) + " variables)");
  std::vector<InequalitySpec> out;
  out.reserve(count_elemental(n).get_ui());
  ElementalEnumerator e(n);
  while (auto q = e.next()) out.push_back(*q);
  return out;
}

std::string encode(const InequalitySpec& q, const VariableUniverse& u) {
  if (q.kind == InequalitySpec::Kind::monotonicity) return "MONO " + u.name(q.variable) + " | " + encode(q.given, u);
  return "CMI " + encode(q.left, u) + " ; " + encode(q.right, u) + " | " + encode(q.given, u);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

InequalitySpec parse_inequality(std::string_view text, const VariableUniverse& u) {
  std::string_view s = trim(text);
  const auto bar = s.rfind('|');
  if (bar == std::string_view::npos) throw std::invalid_argument("inequality lacks '|': '" + std::string(text) + "'");
  const TermSet given = parse_term_set(s.substr(bar + 1), u);
  std::string_view head = trim(s.substr(0, bar));
  InequalitySpec q;
  if (head.starts_with("MONO ")) {
    std::string_view label = trim(head.substr(5));
    const int idx = u.index_of(label);
    if (idx < 0) throw std::invalid_argument("unknown variable '" + std::string(label) + "'");
    q = InequalitySpec::monotonicity(idx, given);
  } else if (head.starts_with("CMI ")) {
    std::string_view sides = trim(head.substr(4));
    const auto semi = sides.find(';');
    if (semi == std::string_view::npos) throw std::invalid_argument("CMI lacks ';': '" + std::string(text) + "'");
    q = InequalitySpec::cmi(parse_term_set(sides.substr(0, semi), u), parse_term_set(sides.substr(semi + 1), u), given);
  } else {
    throw std::invalid_argument("unknown inequality kind: '" + std::string(text) + "'");
  }
  validate(q, u.size());
  return q;
}

}  // namespace itbound
