#include "itbound/problem.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace itbound {

const NamedConstraint* Problem::find(std::string_view constraint_name) const {
  for (const auto& c : constraints)
    if (c.name == constraint_name) return &c;
  return nullptr;
}

std::string emit_problem(const Problem& p) {
  std::ostringstream out;
  out << "itbound-problem 1\n";
  out << "name " << p.name << "\n";
  out << "variables";
  for (const auto& label : p.universe.names()) out << ' ' << label;
  out << "\n";
  out << "objective alpha + eta*beta\n";
  for (const auto& g : p.symmetry_generators) {
    out << "symmetry";
    for (int image : g.image()) out << ' ' << p.universe.name(image);
    out << "\n";
  }
  for (const auto& c : p.constraints) out << "constraint " << c.name << ": " << encode(c.form, p.universe) << "\n";
  return out.str();
}

namespace {

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

Problem parse_problem(std::string_view text) {
  Problem p;
  bool header = false, have_vars = false, have_objective = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::set<std::string> names;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("problem file line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find(' ');
    const std::string keyword = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    if (!header) {
      if (line != "itbound-problem 1") fail("expected header 'itbound-problem 1'");
      header = true;
    } else if (keyword == "name") {
      p.name = rest;
    } else if (keyword == "variables") {
      if (have_vars) fail("duplicate variables line");
      p.universe = make_universe(split_words(rest));
      have_vars = true;
    } else if (keyword == "objective") {
      if (rest != "alpha + eta*beta") fail("only the objective 'alpha + eta*beta' is supported");
      have_objective = true;
    } else if (keyword == "symmetry") {
      if (!have_vars) fail("symmetry before variables");
      std::vector<int> image;
      for (const auto& label : split_words(rest)) {
        const int idx = p.universe.index_of(label);
        if (idx < 0) fail("unknown variable '" + label + "'");
        image.push_back(idx);
      }
      if (static_cast<int>(image.size()) != p.universe.size()) fail("symmetry generator has wrong length");
      try {
        p.symmetry_generators.emplace_back(std::move(image));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    } else if (keyword == "constraint") {
      if (!have_vars) fail("constraint before variables");
      const auto colon = rest.find(':');
      if (colon == std::string::npos) fail("constraint lacks ':'");
      NamedConstraint c{rest.substr(0, colon), {}};
      if (c.name.empty() || !names.insert(c.name).second) fail("empty or duplicate constraint name");
      try {
        c.form = parse_linear_form(rest.substr(colon + 1), p.universe);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (c.form.relation() == Relation::objective) fail("constraint needs '>= 0' or '= 0'");
      p.constraints.push_back(std::move(c));
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!header || !have_vars) throw std::invalid_argument("problem file lacks header or variables");
  if (!have_objective) throw std::invalid_argument("problem file lacks objective line");
  return p;
}

void check_symmetry(const Problem& p) {
  std::set<LinearForm> forms;
  for (const auto& c : p.constraints) forms.insert(c.form);
  for (const auto& g : p.symmetry_generators)
    for (const auto& c : p.constraints) {
      LinearForm image = c.form.map_terms([&](TermSet t) { return apply_permutation(t, g); });
      if (!forms.count(image))
        throw std::invalid_argument("symmetry generator does not preserve constraint '" + c.name + "'");
    }
}

}  // namespace itbound
