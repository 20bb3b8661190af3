#include "plp/ast.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace plp {

namespace {

bool is_plain_name(const std::string& s) {
  if (s.empty()) return false;
  if (std::islower(static_cast<unsigned char>(s[0]))) {
    for (char c : s) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
  }
  // Numbers print unquoted as well.
  bool digits = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = true;
    } else if (!(c == '.' && i > 0) && !(c == '-' && i == 0)) {
      return false;
    }
  }
  return digits && s.back() != '.';
}

std::string quote(const std::string& s) {
  if (is_plain_name(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

void append_args(std::string& out, const std::vector<Term>& args) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].to_string();
  }
  out += ')';
}

std::string body_to_string(const std::vector<Literal>& body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].to_string();
  }
  return out;
}

}  // namespace

Term Term::variable(std::string name) {
  return Term{Kind::Variable, std::move(name), {}};
}

Term Term::constant(std::string name) {
  return Term{Kind::Constant, std::move(name), {}};
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  return Term{Kind::Compound, std::move(functor), std::move(args)};
}

bool Term::is_ground() const {
  if (kind == Kind::Variable) return false;
  for (const auto& a : args) {
    if (!a.is_ground()) return false;
  }
  return true;
}

std::string Term::to_string() const {
  if (kind == Kind::Variable) return name;
  std::string out = quote(name);
  if (kind == Kind::Compound) append_args(out, args);
  return out;
}

bool Atom::is_ground() const {
  for (const auto& a : args) {
    if (!a.is_ground()) return false;
  }
  return true;
}

std::string Atom::signature() const {
  return predicate + "/" + std::to_string(args.size());
}

std::string Atom::to_string() const {
  std::string out = quote(predicate);
  if (!args.empty()) append_args(out, args);
  return out;
}

std::string Literal::to_string() const {
  return positive ? atom.to_string() : "\\+" + atom.to_string();
}

std::string Rule::to_string() const {
  if (body.empty()) return head.to_string() + ".";
  return head.to_string() + " :- " + body_to_string(body) + ".";
}

std::string ProbabilisticFact::to_string() const {
  std::string out = learnable() ? "t(_)" : format_real(probability);
  out += "::" + atom.to_string();
  if (!domain_body.empty()) out += " :- " + body_to_string(domain_body);
  return out + ".";
}

bool operator==(const ProbabilisticFact& a, const ProbabilisticFact& b) {
  bool same_prob = a.probability == b.probability ||
                   (std::isnan(a.probability) && std::isnan(b.probability));
  return same_prob && a.parameter == b.parameter && a.atom == b.atom &&
         a.domain_body == b.domain_body;
}

bool PartialInterpretation::assign(const Atom& atom, bool value) {
  auto key = atom.to_string();
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second.value == value;
  entries_.emplace(std::move(key), Entry{atom, value});
  return true;
}

std::optional<bool> PartialInterpretation::value_of(const Atom& atom) const {
  return value_of(atom.to_string());
}

std::optional<bool> PartialInterpretation::value_of(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string PartialInterpretation::to_string() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    out += "evidence(" + key + "," + (entry.value ? "true" : "false") + ").\n";
  }
  return out;
}

bool operator==(const PartialInterpretation& a, const PartialInterpretation& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto it = b.entries_.begin();
  for (const auto& [key, entry] : a.entries_) {
    if (key != it->first || entry.value != it->second.value) return false;
    ++it;
  }
  return true;
}

int Program::num_parameters() const {
  int n = 0;
  for (const auto& f : prob_facts) {
    if (f.learnable()) ++n;
  }
  return n;
}

namespace {

bool bind(const Term& pattern, const Term& ground, std::map<std::string, Term>& s) {
  if (pattern.is_variable()) {
    auto [it, inserted] = s.emplace(pattern.name, ground);
    return inserted || it->second == ground;
  }
  if (pattern.kind != ground.kind || pattern.name != ground.name ||
      pattern.args.size() != ground.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!bind(pattern.args[i], ground.args[i], s)) return false;
  }
  return true;
}

}  // namespace

bool instance_of(const Atom& ground, const Atom& pattern) {
  if (ground.predicate != pattern.predicate || ground.args.size() != pattern.args.size()) {
    return false;
  }
  std::map<std::string, Term> s;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!bind(pattern.args[i], ground.args[i], s)) return false;
  }
  return true;
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  std::string out(buf, end);
  // Keep the decimal point so that the text reads as a probability literal.
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

}  // namespace plp
