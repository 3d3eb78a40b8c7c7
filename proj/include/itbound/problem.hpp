#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "itbound/linear_form.hpp"
#include "itbound/symmetry.hpp"
#include "itbound/term_set.hpp"

namespace itbound {

struct NamedConstraint {
  std::string name;
  LinearForm form;  // relation is >= 0 or = 0
};

/// A bound-computation problem: ground variables, problem-specific
/// constraints, and optionally generators of a symmetry group that maps the
/// constraint set onto itself. The objective is always alpha + eta * beta.
struct Problem {
  std::string name;
  VariableUniverse universe;
  std::vector<NamedConstraint> constraints;
  std::vector<Permutation> symmetry_generators;

  SymmetryGroup symmetry_group() const { return SymmetryGroup::generate(universe.size(), symmetry_generators); }
  const NamedConstraint* find(std::string_view constraint_name) const;
};

/// Line-oriented problem file:
///
///   itbound-problem 1
///   name regen-n3-reduced
///   variables S_1_2 S_1_3 ...
///   objective alpha + eta*beta
///   symmetry S_2_1 S_2_3 ...          (image of each variable, in order)
///   constraint repair[1]: H{...} - H{...} = 0
///
/// '#' starts a comment line. Emission is deterministic.
std::string emit_problem(const Problem& p);
Problem parse_problem(std::string_view text);

/// Checks that every generator maps the constraint set onto itself and
/// throws std::invalid_argument naming the first constraint that breaks it.
void check_symmetry(const Problem& p);

}  // namespace itbound
