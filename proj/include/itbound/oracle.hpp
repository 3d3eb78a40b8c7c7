#pragma once

#include <functional>
#include <vector>

#include "itbound/inequality.hpp"
#include "itbound/rational.hpp"
#include "itbound/term_set.hpp"

namespace itbound {

/// Exact joint-entropy values induced by some code construction.
struct EntropyOracle {
  VariableUniverse universe;
  std::function<Rational(TermSet)> eval;

  Rational operator()(TermSet t) const { return t.empty() ? Rational(0) : eval(t); }
};

/// Builds an oracle from explicit values; terms not listed throw std::out_of_range.
EntropyOracle table_oracle(VariableUniverse u, Assignment values);

/// Exact slack of the expanded inequality under the oracle.
Rational slack(const InequalitySpec& q, const EntropyOracle& oracle);

/// Keeps the specs whose slack is exactly zero, in input order.
std::vector<InequalitySpec> filter_by_oracle(const std::vector<InequalitySpec>& specs, const EntropyOracle& oracle);

}  // namespace itbound
