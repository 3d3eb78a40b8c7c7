#include "itbound/oracle.hpp"

#include <memory>
#include <stdexcept>

namespace itbound {

EntropyOracle table_oracle(VariableUniverse u, Assignment values) {
  auto table = std::make_shared<const Assignment>(std::move(values));
  EntropyOracle o{std::move(u), {}};
  o.eval = [table, universe = o.universe](TermSet t) -> Rational {
    auto it = table->find(t);
    if (it == table->end()) throw std::out_of_range("oracle has no value for H" + encode(t, universe));
    return it->second;
  };
  return o;
}

Rational slack(const InequalitySpec& q, const EntropyOracle& oracle) {
  return evaluate(expand(q), [&](TermSet t) { return oracle(t); });
}

std::vector<InequalitySpec> filter_by_oracle(const std::vector<InequalitySpec>& specs, const EntropyOracle& oracle) {
  std::vector<InequalitySpec> kept;
  for (const auto& q : specs)
    if (slack(q, oracle) == 0) kept.push_back(q);
  return kept;
}

}  // namespace itbound
