#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "wildknot/knot_algebra.hpp"

namespace wildknot {

GroupWord free_reduce(const GroupWord& w) {
  GroupWord out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

GroupWord cyclic_reduce(const GroupWord& w) {
  GroupWord r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return GroupWord(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

GroupWord inverse(const GroupWord& w) {
  GroupWord out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

Presentation::Presentation(std::vector<std::string> generators, std::vector<GroupWord> relators, GroupWord meridian)
    : generators_(std::move(generators)), meridian_(free_reduce(meridian)) {
  std::set<std::string> seen;
  for (const auto& g : generators_) {
    if (g.empty() || std::any_of(g.begin(), g.end(), [](unsigned char c) { return std::isspace(c) || c == '^'; }))
      throw PresentationError("bad generator name '" + g + "'");
    if (!seen.insert(g).second) throw PresentationError("duplicate generator '" + g + "'");
  }
  const int n = static_cast<int>(generators_.size());
  auto check = [n](const GroupWord& w) {
    for (int l : w)
      if (l == 0 || l > n || l < -n) throw PresentationError("word uses an undeclared generator");
  };
  for (auto& r : relators) {
    check(r);
    GroupWord c = cyclic_reduce(r);
    if (!c.empty()) relators_.push_back(std::move(c));
  }
  check(meridian_);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

GroupWord parse_word(const std::string& text, const std::vector<std::string>& gens) {
  GroupWord w;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    std::string name = tok;
    int exp = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        std::size_t used = 0;
        exp = std::stoi(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw PresentationError("bad exponent in '" + tok + "'");
      }
    }
    auto it = std::find(gens.begin(), gens.end(), name);
    if (it == gens.end()) throw PresentationError("undeclared generator '" + name + "'");
    const int idx = static_cast<int>(it - gens.begin()) + 1;
    for (int i = 0; i < std::abs(exp); ++i) w.push_back(exp > 0 ? idx : -idx);
  }
  return w;
}

}  // namespace

Presentation Presentation::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::vector<std::string>> gens;
  std::vector<std::string> relator_lines;
  std::optional<std::string> meridian_line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw PresentationError("expected 'key: value' line, got '" + line + "'");
    const std::string key = trim(line.substr(0, colon));
    const std::string val = trim(line.substr(colon + 1));
    if (key == "generators") {
      if (gens) throw PresentationError("generators declared twice");
      std::istringstream ss(val);
      std::vector<std::string> g;
      for (std::string t; ss >> t;) g.push_back(t);
      gens = std::move(g);
    } else if (key == "relator") {
      relator_lines.push_back(val);
    } else if (key == "meridian") {
      if (meridian_line) throw PresentationError("meridian declared twice");
      meridian_line = val;
    } else {
      throw PresentationError("unknown key '" + key + "'");
    }
  }
  if (!gens) throw PresentationError("missing generators line");
  if (!meridian_line) throw PresentationError("missing meridian line");
  std::vector<GroupWord> rels;
  for (const auto& r : relator_lines) rels.push_back(parse_word(r, *gens));
  GroupWord mer = parse_word(*meridian_line, *gens);
  return Presentation(*gens, std::move(rels), std::move(mer));
}

std::string Presentation::format_word(const GroupWord& w) const {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += generators_[static_cast<std::size_t>(std::abs(w[i]) - 1)];
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

std::string Presentation::format() const {
  std::string s = "generators:";
  for (const auto& g : generators_) s += " " + g;
  s += '\n';
  for (const auto& r : relators_) s += "relator: " + format_word(r) + '\n';
  s += "meridian: " + format_word(meridian_) + '\n';
  return s;
}

Presentation Presentation::trefoil() {
  // aba = bab
  return Presentation({"a", "b"}, {{1, 2, 1, -2, -1, -2}}, {1});
}

Presentation Presentation::figure_eight() {
  // y x y^-1 x y = x y x^-1 y x
  return Presentation({"x", "y"}, {{2, 1, -2, 1, 2, -1, -2, 1, -2, -1}}, {1});
}

Presentation Presentation::infinite_cyclic() { return Presentation({"t"}, {}, {1}); }

Presentation amalgamated_sum(const Presentation& g, int copies) {
  if (copies < 1) throw PresentationError("amalgamated sum needs at least one copy");
  if (g.meridian().empty()) throw PresentationError("amalgamated sum needs a nonempty meridian");
  const int n = static_cast<int>(g.generators().size());
  std::vector<std::string> names;
  std::vector<GroupWord> rels;
  auto shift = [n](const GroupWord& w, int copy) {
    GroupWord out;
    for (int l : w) out.push_back(l > 0 ? l + copy * n : l - copy * n);
    return out;
  };
  for (int c = 0; c < copies; ++c) {
    for (const auto& name : g.generators()) names.push_back(copies == 1 ? name : name + "_" + std::to_string(c + 1));
    for (const auto& r : g.relators()) rels.push_back(shift(r, c));
  }
  for (int c = 0; c + 1 < copies; ++c) {
    GroupWord r = shift(g.meridian(), c);
    const GroupWord next = inverse(shift(g.meridian(), c + 1));
    r.insert(r.end(), next.begin(), next.end());
    rels.push_back(std::move(r));
  }
  return Presentation(std::move(names), std::move(rels), g.meridian());
}

}  // namespace wildknot
