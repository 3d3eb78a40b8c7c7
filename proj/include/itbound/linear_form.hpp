#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "itbound/rational.hpp"
#include "itbound/symmetry.hpp"
#include "itbound/term_set.hpp"

namespace itbound {

enum class Relation { greater_equal, equal, objective };

/// The two rate scalars of the problem family.
struct Rates {
  Rational alpha;
  Rational beta;
};

/// Sum of coeff * H(T) + alpha_coeff * alpha + beta_coeff * beta + constant,
/// related to zero by `relation`. Stored sparse: no zero coefficients and no
/// H(empty set), which is identically 0.
class LinearForm {
 public:
  using Terms = std::map<TermSet, Rational>;

  LinearForm() = default;
  explicit LinearForm(Relation relation) : relation_(relation) {}

  Relation relation() const { return relation_; }
  void set_relation(Relation r) { relation_ = r; }

  const Terms& entropy() const { return entropy_; }
  const Rational& alpha() const { return alpha_; }
  const Rational& beta() const { return beta_; }
  const Rational& constant() const { return constant_; }
  Rational coefficient(TermSet t) const;

  LinearForm& add_entropy(TermSet t, const Rational& coeff);
  LinearForm& add_alpha(const Rational& coeff) { alpha_ += coeff; return *this; }
  LinearForm& add_beta(const Rational& coeff) { beta_ += coeff; return *this; }
  LinearForm& add_constant(const Rational& c) { constant_ += c; return *this; }

  /// this += scale * other (relation unchanged).
  LinearForm& add_scaled(const LinearForm& other, const Rational& scale);

  bool is_zero() const { return entropy_.empty() && alpha_ == 0 && beta_ == 0 && constant_ == 0; }

  /// Maps every term through `f` and merges coefficients.
  LinearForm map_terms(const std::function<TermSet(TermSet)>& f) const;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;

 private:
  Terms entropy_;
  Rational alpha_ = 0;
  Rational beta_ = 0;
  Rational constant_ = 0;
  Relation relation_ = Relation::greater_equal;
};

bool operator<(const LinearForm& a, const LinearForm& b);

LinearForm canonicalize(const LinearForm& f, Canonicalizer& canon);

using Assignment = std::map<TermSet, Rational>;

/// Exact value of the left-hand side. H(empty) is 0 even when absent from the
/// assignment; any other missing term throws std::out_of_range naming it.
Rational evaluate(const LinearForm& f, const VariableUniverse& u, const Assignment& assignment, const Rates& rates = {});
Rational evaluate(const LinearForm& f, const std::function<Rational(TermSet)>& entropy, const Rates& rates = {});

/// Textual form, e.g. "H{S_1_2} + H{S_2_1} - H{S_1_2,S_2_1} >= 0" or
/// "alpha - 3/2*H{S_1_2} = 0". Objectives print with no relation suffix.
std::string encode(const LinearForm& f, const VariableUniverse& u);
LinearForm parse_linear_form(std::string_view text, const VariableUniverse& u);

}  // namespace itbound
