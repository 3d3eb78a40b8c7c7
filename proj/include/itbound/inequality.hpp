#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itbound/linear_form.hpp"
#include "itbound/rational.hpp"
#include "itbound/term_set.hpp"

namespace itbound {

/// A Shannon-type inequality in one of two shapes:
///   monotonicity   H(X_i | X_A) >= 0          (i not in A)
///   cmi            I(X_B ; X_C | X_A) >= 0    (A, B, C pairwise disjoint, B and C non-empty)
/// A cmi spec is stored with B before C in storage order so that I(B;C|A)
/// and I(C;B|A) compare equal.
struct InequalitySpec {
  enum class Kind : std::uint8_t { monotonicity, cmi };

  Kind kind = Kind::cmi;
  int variable = -1;  // monotonicity only
  TermSet left;       // B (cmi only)
  TermSet right;      // C (cmi only)
  TermSet given;      // A

  static InequalitySpec monotonicity(int variable, TermSet given);
  static InequalitySpec cmi(TermSet left, TermSet right, TermSet given);

  friend bool operator==(const InequalitySpec&, const InequalitySpec&) = default;
  friend auto operator<=>(const InequalitySpec&, const InequalitySpec&) = default;
};

struct InequalitySpecHash {
  std::size_t operator()(const InequalitySpec& q) const noexcept;
};

/// Throws std::invalid_argument when the spec violates its disjointness rules
/// or references a variable outside [0, universe_size).
void validate(const InequalitySpec& q, int universe_size);
bool is_elemental(const InequalitySpec& q, int universe_size);

/// The terms touched by the expansion, including the empty set if A is empty.
std::vector<TermSet> touched_terms(const InequalitySpec& q);

/// Monotonicity(i, A)  ->  H(A+i) - H(A) >= 0
/// Cmi(B, C, A)        ->  H(A+B) + H(A+C) - H(A+B+C) - H(A) >= 0
LinearForm expand(const InequalitySpec& q);

/// N + C(N,2) * 2^(N-2).
BigInt count_elemental(int n);

/// Streams the elemental inequalities of an n-variable universe: the n
/// monotonicity specs H(X_i | rest) first, then for every pair i < j the
/// 2^(n-2) conditional mutual informations I(X_i; X_j | X_A).
class ElementalEnumerator {
 public:
  explicit ElementalEnumerator(int n);
  std::optional<InequalitySpec> next();

 private:
  int n_;
  int mono_ = 0;
  int i_ = 0, j_ = 1;
  std::uint64_t subset_ = 0;
  std::uint64_t subset_count_ = 0;
  std::vector<int> rest_;
  void load_pair();
};

inline constexpr int kDefaultMaterializationCap = 16;

/// Collects the full elemental set. Refuses when n exceeds `cap`, citing the
/// number of inequalities that would have been produced.
std::vector<InequalitySpec> materialize_elemental(int n, int cap = kDefaultMaterializationCap);

/// "MONO S_1_2 | {S_2_1}" and "CMI {S_1_2} ; {S_2_1} | {}".
std::string encode(const InequalitySpec& q, const VariableUniverse& u);
InequalitySpec parse_inequality(std::string_view text, const VariableUniverse& u);

}  // namespace itbound
