#include "itbound/term_set.hpp"

#include <stdexcept>

namespace itbound {

TermSet TermSet::of(std::initializer_list<int> indices) {
  std::uint64_t bits = 0;
  for (int i : indices) bits |= std::uint64_t{1} << i;
  return TermSet(bits);
}

std::vector<int> TermSet::members() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

bool lex_less(TermSet a, TermSet b) {
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  const int d = std::countr_zero(diff);
  // Both lists agree below d. The list that holds d continues with d; the
  // other one either has ended (it is a prefix, hence smaller) or continues
  // with something larger than d.
  const std::uint64_t above = d == 63 ? 0 : (~std::uint64_t{0} << (d + 1));
  if (a.contains(d)) return (b.bits() & above) != 0;
  return (a.bits() & above) == 0;
}

int VariableUniverse::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? -1 : it->second;
}

TermSet VariableUniverse::all() const {
  const int n = size();
  return TermSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

VariableUniverse make_universe(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("variable universe must not be empty");
  if (labels.size() > static_cast<std::size_t>(kMaxVariables))
    throw std::invalid_argument("at most 64 variables are supported, got " + std::to_string(labels.size()));
  VariableUniverse u;
  for (const auto& label : labels) {
    if (label.empty() || label.find_first_of("{},;| \t\n") != std::string::npos)
      throw std::invalid_argument("invalid variable label '" + label + "'");
    if (!u.index_.emplace(label, static_cast<int>(u.names_.size())).second)
      throw std::invalid_argument("duplicate variable label '" + label + "'");
    u.names_.push_back(label);
  }
  return u;
}

std::string encode(TermSet t, const VariableUniverse& u) {
  std::string out = "{";
  bool first = true;
  for (int i : t.members()) {
    if (!first) out += ',';
    out += u.name(i);
    first = false;
  }
  out += '}';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

TermSet parse_term_set(std::string_view text, const VariableUniverse& u) {
  std::string_view s = trim(text);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw std::invalid_argument("term set must be enclosed in braces: '" + std::string(text) + "'");
  s = trim(s.substr(1, s.size() - 2));
  std::uint64_t bits = 0;
  if (s.empty()) return TermSet();
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view label = trim(s.substr(start, comma - start));
    const int idx = u.index_of(label);
    if (idx < 0) throw std::invalid_argument("unknown variable '" + std::string(label) + "'");
    bits |= std::uint64_t{1} << idx;
    start = comma + 1;
  }
  return TermSet(bits);
}

}  // namespace itbound
