#include "itbound/symmetry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace itbound {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= size() || seen[v]) throw std::invalid_argument("permutation is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int size) {
  std::vector<int> image(size);
  for (int i = 0; i < size; ++i) image[i] = i;
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation degree mismatch");
  std::vector<int> image(a.size());
  for (int i = 0; i < a.size(); ++i) image[i] = a(b(i));
  Permutation out;
  out.image_ = std::move(image);
  return out;
}

TermSet apply_permutation(TermSet t, const Permutation& p) {
  std::uint64_t bits = 0;
  for (std::uint64_t b = t.bits(); b != 0; b &= b - 1) bits |= std::uint64_t{1} << p(std::countr_zero(b));
  return TermSet(bits);
}

SymmetryGroup SymmetryGroup::generate(int size, const std::vector<Permutation>& generators) {
  for (const auto& g : generators)
    if (g.size() != size) throw std::invalid_argument("generator degree does not match universe size");
  std::set<Permutation> elements{Permutation::identity(size)};
  std::vector<Permutation> frontier{Permutation::identity(size)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& e : frontier)
      for (const auto& g : generators) {
        Permutation p = g * e;
        if (elements.insert(p).second) next.push_back(std::move(p));
      }
    frontier = std::move(next);
  }
  SymmetryGroup group;
  group.degree_ = size;
  group.elements_.assign(elements.begin(), elements.end());
  for (const auto& g : generators)
    if (!g.is_identity()) group.generators_.push_back(g);
  return group;
}

SymmetryGroup SymmetryGroup::from_elements(int size, std::vector<Permutation> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  bool has_identity = false;
  for (const auto& e : elements) {
    if (e.size() != size) throw std::invalid_argument("group element degree does not match universe size");
    has_identity |= e.is_identity();
  }
  if (!has_identity) throw std::invalid_argument("group must contain the identity");
  for (const auto& a : elements)
    for (const auto& b : elements)
      if (!std::binary_search(elements.begin(), elements.end(), a * b))
        throw std::invalid_argument("permutation list is not closed under composition");
  SymmetryGroup group;
  group.degree_ = size;
  group.elements_ = std::move(elements);
  for (const auto& e : group.elements_)
    if (!e.is_identity()) group.generators_.push_back(e);
  return group;
}

TermSet canonicalize(TermSet t, const SymmetryGroup& g) {
  TermSet best = t;
  for (const auto& p : g.elements()) {
    TermSet image = apply_permutation(t, p);
    if (lex_less(image, best)) best = image;
  }
  return best;
}

std::vector<TermSet> orbit(TermSet t, const SymmetryGroup& g) {
  std::set<TermSet> seen;
  for (const auto& p : g.elements()) seen.insert(apply_permutation(t, p));
  return {seen.begin(), seen.end()};
}

Canonicalizer::Canonicalizer(const SymmetryGroup& g) : trivial_(g.is_trivial()), order_(g.order()) {
  if (trivial_) return;
  chunks_ = (g.degree() + 7) / 8;
  tables_.resize(order_ * chunks_);
  for (std::size_t e = 0; e < order_; ++e) {
    const Permutation& p = g.elements()[e];
    for (int c = 0; c < chunks_; ++c) {
      auto& table = tables_[e * chunks_ + c];
      for (int byte = 0; byte < 256; ++byte) {
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) {
          const int var = c * 8 + k;
          if (((byte >> k) & 1) && var < g.degree()) bits |= std::uint64_t{1} << p(var);
        }
        table[byte] = bits;
      }
    }
  }
}

TermSet Canonicalizer::apply(std::size_t element, TermSet t) const {
  std::uint64_t bits = 0;
  const auto* table = &tables_[element * chunks_];
  std::uint64_t src = t.bits();
  for (int c = 0; c < chunks_; ++c, src >>= 8) bits |= table[c][src & 0xFF];
  return TermSet(bits);
}

TermSet Canonicalizer::operator()(TermSet t) {
  if (trivial_ || t.empty()) return t;
  auto it = memo_.find(t);
  if (it != memo_.end()) return it->second;
  TermSet best = t;
  for (std::size_t e = 0; e < order_; ++e) {
    TermSet image = apply(e, t);
    if (lex_less(image, best)) best = image;
  }
  memo_.emplace(t, best);
  return best;
}

}  // namespace itbound
