#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "itbound/term_set.hpp"

namespace itbound {

/// A bijection on variable indices: image[i] is where variable i goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int size);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i]; }
  std::span<const int> image() const { return image_; }
  bool is_identity() const;

  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

TermSet apply_permutation(TermSet t, const Permutation& p);

/// An explicitly listed permutation group. Elements are stored sorted, which
/// fixes the scan order used by canonicalize.
class SymmetryGroup {
 public:
  /// Closes the generators under composition. An empty generator list yields
  /// the trivial group.
  static SymmetryGroup generate(int size, const std::vector<Permutation>& generators);
  /// Validates that `elements` is a closed group of bijections; throws
  /// std::invalid_argument otherwise.
  static SymmetryGroup from_elements(int size, std::vector<Permutation> elements);
  static SymmetryGroup trivial(int size) { return generate(size, {}); }

  int degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  bool is_trivial() const { return elements_.size() == 1; }

 private:
  int degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<Permutation> generators_;
};

/// Lexicographically smallest element (see lex_less) of the orbit of t.
TermSet canonicalize(TermSet t, const SymmetryGroup& g);

std::vector<TermSet> orbit(TermSet t, const SymmetryGroup& g);

/// Table-driven orbit representative lookup with a memo. Not thread-safe;
/// each LP assembly owns one.
class Canonicalizer {
 public:
  explicit Canonicalizer(const SymmetryGroup& g);

  TermSet operator()(TermSet t);
  bool trivial() const { return trivial_; }

 private:
  TermSet apply(std::size_t element, TermSet t) const;

  bool trivial_ = true;
  int chunks_ = 0;
  // tables_[element * chunks_ + chunk][byte] = image bits of that byte.
  std::vector<std::array<std::uint64_t, 256>> tables_;
  std::size_t order_ = 1;
  std::unordered_map<TermSet, TermSet, TermSetHash> memo_;
};

}  // namespace itbound
