#include "itbound/linear_form.hpp"

#include <cctype>
#include <stdexcept>
#include <tuple>

namespace itbound {

Rational LinearForm::coefficient(TermSet t) const {
  auto it = entropy_.find(t);
  return it == entropy_.end() ? Rational(0) : it->second;
}

LinearForm& LinearForm::add_entropy(TermSet t, const Rational& coeff) {
  if (t.empty() || coeff == 0) return *this;
  auto [it, inserted] = entropy_.try_emplace(t, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) entropy_.erase(it);
  }
  return *this;
}

LinearForm& LinearForm::add_scaled(const LinearForm& other, const Rational& scale) {
  if (scale == 0) return *this;
  for (const auto& [t, c] : other.entropy_) add_entropy(t, c * scale);
  alpha_ += other.alpha_ * scale;
  beta_ += other.beta_ * scale;
  constant_ += other.constant_ * scale;
  return *this;
}

LinearForm LinearForm::map_terms(const std::function<TermSet(TermSet)>& f) const {
  LinearForm out(relation_);
  for (const auto& [t, c] : entropy_) out.add_entropy(f(t), c);
  out.alpha_ = alpha_;
  out.beta_ = beta_;
  out.constant_ = constant_;
  return out;
}

bool operator<(const LinearForm& a, const LinearForm& b) {
  if (a.relation() != b.relation()) return a.relation() < b.relation();
  if (a.alpha() != b.alpha()) return a.alpha() < b.alpha();
  if (a.beta() != b.beta()) return a.beta() < b.beta();
  if (a.constant() != b.constant()) return a.constant() < b.constant();
  auto ia = a.entropy().begin();
  auto ib = b.entropy().begin();
  for (; ia != a.entropy().end() && ib != b.entropy().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.entropy().end() && ib != b.entropy().end();
}

LinearForm canonicalize(const LinearForm& f, Canonicalizer& canon) {
  if (canon.trivial()) return f;
  return f.map_terms([&](TermSet t) { return canon(t); });
}

Rational evaluate(const LinearForm& f, const VariableUniverse& u, const Assignment& assignment, const Rates& rates) {
  return evaluate(
      f,
      [&](TermSet t) -> Rational {
        auto it = assignment.find(t);
        if (it == assignment.end()) throw std::out_of_range("no value assigned to H" + encode(t, u));
        return it->second;
      },
      rates);
}

Rational evaluate(const LinearForm& f, const std::function<Rational(TermSet)>& entropy, const Rates& rates) {
  Rational sum = f.constant() + f.alpha() * rates.alpha + f.beta() * rates.beta;
  for (const auto& [t, c] : f.entropy()) sum += c * entropy(t);
  return sum;
}

namespace {

void append_term(std::string& out, const Rational& coeff, const std::string& atom, bool first) {
  Rational mag = abs(coeff);
  if (first) {
    if (coeff < 0) out += "-";
  } else {
    out += coeff < 0 ? " - " : " + ";
  }
  if (atom.empty()) {
    out += to_string(mag);
    return;
  }
  if (mag != 1) out += to_string(mag) + "*";
  out += atom;
}

}  // namespace

std::string encode(const LinearForm& f, const VariableUniverse& u) {
  std::string out;
  bool first = true;
  for (const auto& [t, c] : f.entropy()) {
    append_term(out, c, "H" + encode(t, u), first);
    first = false;
  }
  if (f.alpha() != 0) { append_term(out, f.alpha(), "alpha", first); first = false; }
  if (f.beta() != 0) { append_term(out, f.beta(), "beta", first); first = false; }
  if (f.constant() != 0 || first) { append_term(out, f.constant(), "", first); }
  switch (f.relation()) {
    case Relation::greater_equal: out += " >= 0"; break;
    case Relation::equal: out += " = 0"; break;
    case Relation::objective: break;
  }
  return out;
}

namespace {

class FormParser {
 public:
  FormParser(std::string_view text, const VariableUniverse& u) : text_(text), u_(u) {}

  LinearForm parse() {
    LinearForm f(Relation::objective);
    skip_ws();
    bool first = true;
    while (!at_end() && !at_relation()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      parse_term(f, sign);
      first = false;
      skip_ws();
    }
    if (first) fail("empty linear form");
    if (!at_end()) {
      if (text_.substr(pos_, 2) == ">=") {
        f.set_relation(Relation::greater_equal);
        pos_ += 2;
      } else {
        f.set_relation(Relation::equal);
        pos_ += 1;
      }
      skip_ws();
      if (at_end() || peek() != '0') fail("right-hand side must be 0");
      ++pos_;
      skip_ws();
      if (!at_end()) fail("trailing characters");
    }
    return f;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool at_relation() const { return peek() == '=' || text_.substr(pos_, 2) == ">="; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("linear form: " + what + " at offset " + std::to_string(pos_) + " in '" +
                                std::string(text_) + "'");
  }

  std::optional<Rational> parse_number() {
    std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
    if (start == pos_) return std::nullopt;
    return parse_rational(text_.substr(start, pos_ - start));
  }

  void parse_atom(LinearForm& f, const Rational& coeff) {
    if (text_.substr(pos_, 5) == "alpha") {
      pos_ += 5;
      f.add_alpha(coeff);
    } else if (text_.substr(pos_, 4) == "beta") {
      pos_ += 4;
      f.add_beta(coeff);
    } else if (!at_end() && peek() == 'H') {
      ++pos_;
      const auto close = text_.find('}', pos_);
      if (close == std::string_view::npos) fail("unterminated term set");
      f.add_entropy(parse_term_set(text_.substr(pos_, close + 1 - pos_), u_), coeff);
      pos_ = close + 1;
    } else {
      fail("expected H{...}, alpha or beta");
    }
  }

  void parse_term(LinearForm& f, const Rational& sign) {
    if (auto number = parse_number()) {
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        parse_atom(f, sign * *number);
      } else {
        f.add_constant(sign * *number);
      }
      return;
    }
    parse_atom(f, sign);
  }

  std::string_view text_;
  const VariableUniverse& u_;
  std::size_t pos_ = 0;
};

}  // namespace

LinearForm parse_linear_form(std::string_view text, const VariableUniverse& u) {
  return FormParser(text, u).parse();
}

}  // namespace itbound
