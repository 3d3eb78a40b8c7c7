#pragma once

#include <utility>
#include <vector>

#include "itbound/oracle.hpp"
#include "itbound/problem.hpp"
#include "itbound/rational.hpp"
#include "itbound/symmetry.hpp"

namespace itbound::regen {

/// reduced: only the repair messages S_i_j; the content of node i is
/// represented by its outgoing messages. full: stored contents W_i as well.
enum class Representation { reduced, full };

Representation parse_representation(std::string_view text);
const char* to_string(Representation r);

/// The (n, k = n-1, d = n-1) exact-repair regenerating code problem with a
/// unit message.
struct RegenSpec {
  int n = 0;
  Representation representation = Representation::reduced;
  VariableUniverse universe;
  std::vector<NamedConstraint> constraints;

  /// Variable index of S_i_j, nodes numbered from 1.
  int message(int from, int to) const;
  /// Variable index of W_i (full representation only).
  int storage(int node) const;
  /// {S_i_k : k != i}
  TermSet outgoing(int node) const;
  /// {S_k_j : k != j}
  TermSet incoming(int node) const;

  Problem to_problem(bool with_symmetry) const;
};

/// Throws std::invalid_argument for n < 3 (or n > 8, where the universe
/// exceeds 64 variables).
RegenSpec build_regen(int n, Representation representation);

/// A transposition and an n-cycle on the nodes, acting on variable indices.
std::vector<Permutation> regen_symmetry_generators(int n, Representation representation);
/// All n! node permutations, acting by S_i_j -> S_p(i)_p(j) and W_i -> W_p(i).
SymmetryGroup regen_symmetry(int n, Representation representation);

/// Entropy of the canonical layered code with parity-group size r, by
/// counting: each size-r node group G contributes min(covered(G), r - 1),
/// where covered(G) counts the symbols (G, i) reached by the messages in the
/// term, and the total is normalized by M = C(n, r) (r - 1).
class LayeredOracle {
 public:
  LayeredOracle(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }
  const BigInt& normalizer() const { return normalizer_; }
  /// Unnormalized symbol count; layered_entropy(t) * M.
  long count(TermSet t) const;
  /// Throws std::invalid_argument for a term outside the reduced universe.
  Rational operator()(TermSet t) const;
  EntropyOracle as_oracle() const;

 private:
  int n_, r_;
  BigInt normalizer_;
  std::uint64_t universe_bits_;
  // For every group, the message masks that reach symbol (G, i) for each i in G.
  std::vector<std::vector<std::uint64_t>> symbol_masks_;
};

Rational layered_entropy(const LayeredOracle& o, TermSet t);

struct TradeoffPoint {
  Rational alpha;
  Rational beta;
};

/// (r / (n (r - 1)), r / (n (n - 1))) for r = 2..n.
std::vector<TradeoffPoint> inner_bound_points(int n);

}  // namespace itbound::regen
