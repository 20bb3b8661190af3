#include "plp/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include "plp/error.hpp"

namespace plp {

namespace {

enum class Tok { Name, Var, Number, LParen, RParen, Comma, Period, Annot, Neck, Not, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t{Tok::End, "", line_, col_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Number;
      t.text = lex_number();
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        advance();
      }
      t.text = std::string(text_.substr(start, pos_ - start));
      t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var : Tok::Name;
      return t;
    }
    if (c == '\'') {
      t.kind = Tok::Name;
      t.text = lex_quoted();
      return t;
    }
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '.': t.kind = Tok::Period; return t;
      case ':':
        if (peek() == ':') { advance(); t.kind = Tok::Annot; return t; }
        if (peek() == '-') { advance(); t.kind = Tok::Neck; return t; }
        break;
      case '\\':
        if (peek() == '+') { advance(); t.kind = Tok::Not; return t; }
        break;
      default:
        break;
    }
    fail(t.line, t.col, std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] static void fail(int line, int col, const std::string& msg) {
    throw Error(ErrorKind::Semantic,
                std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool digit_at(std::size_t i) const {
    return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
  }

  std::string lex_number() {
    std::size_t start = pos_;
    while (digit_at(pos_)) advance();
    if (peek() == '.' && digit_at(pos_ + 1)) {
      advance();
      while (digit_at(pos_)) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (digit_at(pos_)) {
        while (digit_at(pos_)) advance();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string lex_quoted() {
    int line = line_, col = col_;
    advance();
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(line, col, "unterminated quoted atom");
      char c = text_[pos_];
      advance();
      if (c == '\'') break;
      if (c == '\\' && pos_ < text_.size()) {
        c = text_[pos_];
        advance();
      }
      out += c;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) collect_vars(t, out);
}

struct Statement {
  enum class Kind { Rule, Fact, Query, Evidence };
  Kind kind;
  Rule rule;
  ProbabilisticFact fact;
  bool evidence_value = true;
  int line;
  int col;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  bool at_end() const { return tok_.kind == Tok::End; }

  Statement statement() {
    anon_counter_ = 0;
    Statement st;
    st.line = tok_.line;
    st.col = tok_.col;
    Term first = term();
    if (tok_.kind == Tok::Annot) {
      shift();
      st.kind = Statement::Kind::Fact;
      st.fact = annotation(first, st.line, st.col);
      st.fact.atom = atom();
      if (tok_.kind == Tok::Neck) {
        shift();
        st.fact.domain_body = body();
      }
      expect(Tok::Period, "'.'");
      return st;
    }
    Atom head = to_atom(first, st.line, st.col);
    if (tok_.kind == Tok::Neck) {
      shift();
      st.kind = Statement::Kind::Rule;
      st.rule = Rule{std::move(head), body()};
      expect(Tok::Period, "'.'");
      return st;
    }
    expect(Tok::Period, "'.'");
    if (head.predicate == "query" && head.args.size() == 1) {
      st.kind = Statement::Kind::Query;
      st.rule.head = to_atom(head.args[0], st.line, st.col);
    } else if (head.predicate == "evidence" &&
               (head.args.size() == 1 || head.args.size() == 2)) {
      st.kind = Statement::Kind::Evidence;
      st.rule.head = to_atom(head.args[0], st.line, st.col);
      if (head.args.size() == 2) {
        const Term& v = head.args[1];
        if (v.kind != Term::Kind::Constant || (v.name != "true" && v.name != "false")) {
          Lexer::fail(st.line, st.col, "evidence value must be true or false");
        }
        st.evidence_value = v.name == "true";
      }
    } else {
      st.kind = Statement::Kind::Rule;
      st.rule = Rule{std::move(head), {}};
    }
    return st;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void unexpected(const std::string& wanted) {
    std::string got = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
    if (tok_.kind == Tok::Period) got = "'.'";
    Lexer::fail(tok_.line, tok_.col, "expected " + wanted + ", found " + got);
  }

  void expect(Tok kind, const std::string& wanted) {
    if (tok_.kind != kind) unexpected(wanted);
    shift();
  }

  Term term() {
    switch (tok_.kind) {
      case Tok::Var: {
        std::string name = tok_.text;
        if (name == "_") name = "_G" + std::to_string(++anon_counter_);
        shift();
        return Term::variable(std::move(name));
      }
      case Tok::Number: {
        std::string text = tok_.text;
        shift();
        return Term::constant(std::move(text));
      }
      case Tok::Name: {
        std::string name = tok_.text;
        shift();
        if (tok_.kind != Tok::LParen) return Term::constant(std::move(name));
        shift();
        std::vector<Term> args;
        args.push_back(term());
        while (tok_.kind == Tok::Comma) {
          shift();
          args.push_back(term());
        }
        expect(Tok::RParen, "')'");
        return Term::compound(std::move(name), std::move(args));
      }
      default:
        unexpected("a term");
    }
  }

  Atom to_atom(const Term& t, int line, int col) {
    if (t.kind == Term::Kind::Variable) Lexer::fail(line, col, "a variable cannot be used as an atom");
    if (!t.name.empty() && std::isdigit(static_cast<unsigned char>(t.name[0])) && t.args.empty()) {
      Lexer::fail(line, col, "a number cannot be used as an atom");
    }
    return Atom(t.name, t.args);
  }

  Atom atom() {
    int line = tok_.line, col = tok_.col;
    return to_atom(term(), line, col);
  }

  std::vector<Literal> body() {
    std::vector<Literal> out;
    do {
      if (!out.empty()) shift();
      bool positive = true;
      if (tok_.kind == Tok::Not) {
        positive = false;
        shift();
      }
      out.push_back(Literal{atom(), positive});
    } while (tok_.kind == Tok::Comma);
    return out;
  }

  ProbabilisticFact annotation(const Term& t, int line, int col) {
    ProbabilisticFact f;
    if (t.kind == Term::Kind::Constant && !t.name.empty() &&
        std::isdigit(static_cast<unsigned char>(t.name[0]))) {
      double p = 0;
      auto [ptr, ec] = std::from_chars(t.name.data(), t.name.data() + t.name.size(), p);
      if (ec != std::errc() || ptr != t.name.data() + t.name.size()) {
        Lexer::fail(line, col, "malformed probability '" + t.name + "'");
      }
      if (!(p >= 0.0 && p <= 1.0)) {
        Lexer::fail(line, col, "probability " + t.name + " outside [0,1]");
      }
      f.probability = p;
      return f;
    }
    if (t.kind == Term::Kind::Compound && t.name == "t" && t.args.size() == 1 &&
        t.args[0].is_variable()) {
      f.parameter = next_parameter_++;
      return f;
    }
    Lexer::fail(line, col, "expected a probability or t(_) before '::'");
  }

  Lexer lexer_;
  Token tok_{Tok::End, "", 1, 1};
  int anon_counter_ = 0;
  int next_parameter_ = 0;
};

[[noreturn]] void semantic(const Statement& st, const std::string& msg) {
  Lexer::fail(st.line, st.col, msg);
}

void check_safety(const Statement& st, const Atom& head, const std::vector<Literal>& body,
                  const char* what) {
  std::set<std::string> bound;
  for (const auto& l : body) {
    if (l.positive) collect_vars(l.atom, bound);
  }
  std::set<std::string> needed;
  collect_vars(head, needed);
  for (const auto& l : body) {
    if (!l.positive) collect_vars(l.atom, needed);
  }
  for (const auto& v : needed) {
    if (!bound.count(v)) {
      semantic(st, std::string(what) + " is not range-restricted: variable " + v +
                       " does not occur in a positive body literal");
    }
  }
}

std::vector<Statement> parse_statements(std::string_view text) {
  Parser parser(text);
  std::vector<Statement> out;
  while (!parser.at_end()) out.push_back(parser.statement());
  return out;
}

}  // namespace

Program parse_program(std::string_view text) {
  Program program;
  std::set<std::string> prob_sigs;
  std::set<std::string> derived_sigs;
  std::set<std::string> query_keys;
  auto statements = parse_statements(text);

  for (const auto& st : statements) {
    switch (st.kind) {
      case Statement::Kind::Rule:
        check_safety(st, st.rule.head, st.rule.body, "rule");
        derived_sigs.insert(st.rule.head.signature());
        program.rules.push_back(st.rule);
        break;
      case Statement::Kind::Fact:
        check_safety(st, st.fact.atom, st.fact.domain_body, "probabilistic fact");
        prob_sigs.insert(st.fact.atom.signature());
        program.prob_facts.push_back(st.fact);
        break;
      case Statement::Kind::Query:
        if (query_keys.insert(st.rule.head.to_string()).second) {
          program.queries.push_back(st.rule.head);
        }
        break;
      case Statement::Kind::Evidence:
        if (!st.rule.head.is_ground()) semantic(st, "evidence atom must be ground");
        if (!program.evidence.assign(st.rule.head, st.evidence_value)) {
          semantic(st, "conflicting evidence for " + st.rule.head.to_string());
        }
        break;
    }
  }

  for (const auto& st : statements) {
    if (st.kind == Statement::Kind::Rule && prob_sigs.count(st.rule.head.signature())) {
      semantic(st, "predicate " + st.rule.head.signature() +
                       " is both probabilistic and derived");
    }
    if (st.kind == Statement::Kind::Fact) {
      for (const auto& l : st.fact.domain_body) {
        if (prob_sigs.count(l.atom.signature())) {
          semantic(st, "domain of a probabilistic fact refers to probabilistic predicate " +
                           l.atom.signature());
        }
      }
    }
  }
  return program;
}

PartialInterpretation parse_evidence(std::string_view text) {
  PartialInterpretation out;
  for (const auto& st : parse_statements(text)) {
    if (st.kind != Statement::Kind::Evidence) {
      semantic(st, "expected evidence(atom,true|false).");
    }
    if (!st.rule.head.is_ground()) semantic(st, "evidence atom must be ground");
    if (!out.assign(st.rule.head, st.evidence_value)) {
      semantic(st, "conflicting evidence for " + st.rule.head.to_string());
    }
  }
  return out;
}

std::vector<Atom> parse_queries(std::string_view text) {
  std::vector<Atom> out;
  std::set<std::string> seen;
  for (const auto& st : parse_statements(text)) {
    if (st.kind != Statement::Kind::Query) semantic(st, "expected query(atom).");
    if (seen.insert(st.rule.head.to_string()).second) out.push_back(st.rule.head);
  }
  return out;
}

std::string pretty_print(const Program& program) {
  std::string out;
  for (const auto& f : program.prob_facts) out += f.to_string() + "\n";
  for (const auto& r : program.rules) out += r.to_string() + "\n";
  for (const auto& q : program.queries) out += "query(" + q.to_string() + ").\n";
  out += program.evidence.to_string();
  return out;
}

}  // namespace plp
