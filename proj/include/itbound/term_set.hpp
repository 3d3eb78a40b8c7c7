#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace itbound {

inline constexpr int kMaxVariables = 64;

/// A subset of ground variables, i.e. the index set A of a joint entropy
/// H(X_A). Bit i set means variable i of the universe is a member.
class TermSet {
 public:
  constexpr TermSet() = default;
  constexpr explicit TermSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr TermSet singleton(int index) { return TermSet(std::uint64_t{1} << index); }
  static TermSet of(std::initializer_list<int> indices);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int index) const { return (bits_ >> index) & 1U; }
  constexpr bool subset_of(TermSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(TermSet other) const { return (bits_ & other.bits_) == 0; }

  std::vector<int> members() const;

  friend constexpr TermSet operator|(TermSet a, TermSet b) { return TermSet(a.bits_ | b.bits_); }
  friend constexpr TermSet operator&(TermSet a, TermSet b) { return TermSet(a.bits_ & b.bits_); }
  friend constexpr TermSet operator-(TermSet a, TermSet b) { return TermSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(TermSet a, TermSet b) = default;
  // Storage order (by bit pattern). Not the lexicographic order used for
  // orbit representatives; see lex_less.
  friend constexpr auto operator<=>(TermSet a, TermSet b) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic comparison of the sorted member lists, so {0} < {0,3} < {0,5} < {1}.
bool lex_less(TermSet a, TermSet b);

/// Ordered, duplicate-free list of variable labels. The order is fixed for
/// the lifetime of a problem and defines variable indices.
class VariableUniverse {
 public:
  VariableUniverse() = default;

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  /// Returns -1 for an unknown label.
  int index_of(std::string_view label) const;
  TermSet all() const;
  bool contains(TermSet t) const { return t.subset_of(all()); }

  friend bool operator==(const VariableUniverse& a, const VariableUniverse& b) { return a.names_ == b.names_; }

 private:
  friend VariableUniverse make_universe(const std::vector<std::string>& labels);
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

/// Throws std::invalid_argument on an empty list, a duplicate label (named in
/// the message), a label with reserved characters, or more than 64 labels.
VariableUniverse make_universe(const std::vector<std::string>& labels);

/// "{S_1_2,S_2_1}": labels in universe order, comma separated, no spaces.
std::string encode(TermSet t, const VariableUniverse& u);
/// Inverse of encode. Whitespace around labels is tolerated; unknown labels throw.
TermSet parse_term_set(std::string_view text, const VariableUniverse& u);

struct TermSetHash {
  std::size_t operator()(TermSet t) const noexcept { return std::hash<std::uint64_t>{}(t.bits() * 0x9E3779B97F4A7C15ULL); }
};

}  // namespace itbound
