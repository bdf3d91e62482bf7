// Relational languages, terms, first-order formulas with a text grammar,
// structures, Gaifman graphs and a brute-force evaluation oracle.
//
// Function symbols all have arity one, so a term is a chain of function
// applications over a variable. Formula trees are immutable and shared.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sparsefo/graph.hpp"

namespace sparsefo {

struct parse_error : input_error {
  parse_error(const std::string& msg, int position)
      : input_error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  int pos;
};

class Language {
public:
  int add_relation(const std::string& name, int arity) {
    if (arity < 0) throw input_error("relation arity must be >= 0");
    check_fresh(name);
    rel_ids_[name] = static_cast<int>(rels_.size());
    rels_.push_back({name, arity});
    return rel_ids_[name];
  }

  int add_function(const std::string& name) {
    check_fresh(name);
    fn_ids_[name] = static_cast<int>(fns_.size());
    fns_.push_back(name);
    return fn_ids_[name];
  }

  int relation_count() const { return static_cast<int>(rels_.size()); }
  int function_count() const { return static_cast<int>(fns_.size()); }

  const std::string& relation_name(int id) const { return rels_[id].first; }
  int arity(int id) const { return rels_[id].second; }
  const std::string& function_name(int id) const { return fns_[id]; }

  std::optional<int> relation_id(const std::string& name) const {
    auto it = rel_ids_.find(name);
    if (it == rel_ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> function_id(const std::string& name) const {
    auto it = fn_ids_.find(name);
    if (it == fn_ids_.end()) return std::nullopt;
    return it->second;
  }

  bool has_symbol(const std::string& name) const {
    return rel_ids_.count(name) || fn_ids_.count(name);
  }

  // True when every symbol of `base` appears here with the same kind/arity.
  bool extends(const Language& base) const {
    for (int r = 0; r < base.relation_count(); ++r) {
      auto id = relation_id(base.relation_name(r));
      if (!id || arity(*id) != base.arity(r)) return false;
    }
    for (int f = 0; f < base.function_count(); ++f)
      if (!function_id(base.function_name(f))) return false;
    return true;
  }

private:
  void check_fresh(const std::string& name) {
    if (name.empty()) throw input_error("empty symbol name");
    if (has_symbol(name)) throw input_error("duplicate symbol: " + name);
  }

  std::vector<std::pair<std::string, int>> rels_;
  std::vector<std::string> fns_;
  std::map<std::string, int> rel_ids_;
  std::map<std::string, int> fn_ids_;
};

// fns applied innermost-first: fns = {f, g} encodes g(f(var)).
struct Term {
  std::string var;
  std::vector<int> fns;

  bool is_variable() const { return fns.empty(); }
  bool is_simple() const { return fns.size() <= 1; }

  // this(t) with `t` substituted for the variable.
  Term composed_over(const Term& t) const {
    Term r = t;
    r.fns.insert(r.fns.end(), fns.begin(), fns.end());
    return r;
  }

  auto operator<=>(const Term&) const = default;
};

inline std::string print_term(const Term& t, const Language& lang) {
  std::string s = t.var;
  for (int f : t.fns) s = lang.function_name(f) + "(" + s + ")";
  return s;
}

enum class FormulaKind { Top, Bottom, Atom, Eq, Not, And, Or, Exists, Forall };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  FormulaKind kind;
  int rel = -1;             // Atom
  std::vector<Term> terms;  // Atom (arity many), Eq (two)
  std::string var;          // Exists/Forall
  FormulaPtr left, right;   // children; unary nodes use left

  static FormulaPtr top() { return make(FormulaKind::Top); }
  static FormulaPtr bottom() { return make(FormulaKind::Bottom); }

  static FormulaPtr atom(int rel, std::vector<Term> ts) {
    auto f = make(FormulaKind::Atom);
    f->rel = rel;
    f->terms = std::move(ts);
    return f;
  }

  static FormulaPtr eq(Term a, Term b) {
    auto f = make(FormulaKind::Eq);
    f->terms = {std::move(a), std::move(b)};
    return f;
  }

  static FormulaPtr neg(FormulaPtr a) {
    auto f = make(FormulaKind::Not);
    f->left = std::move(a);
    return f;
  }

  static FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    auto f = make(FormulaKind::And);
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
  }

  static FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    auto f = make(FormulaKind::Or);
    f->left = std::move(a);
    f->right = std::move(b);
    return f;
  }

  static FormulaPtr exists(std::string v, FormulaPtr a) {
    auto f = make(FormulaKind::Exists);
    f->var = std::move(v);
    f->left = std::move(a);
    return f;
  }

  static FormulaPtr forall(std::string v, FormulaPtr a) {
    auto f = make(FormulaKind::Forall);
    f->var = std::move(v);
    f->left = std::move(a);
    return f;
  }

private:
  static std::shared_ptr<Formula> make(FormulaKind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
  }
};

inline int formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->left) + formula_size(f->right);
}

inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->rel != b->rel || a->terms != b->terms ||
      a->var != b->var)
    return false;
  return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
}

inline void collect_free_vars(const FormulaPtr& f, std::set<std::string>& bound,
                              std::set<std::string>& out) {
  if (!f) return;
  switch (f->kind) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Atom:
    case FormulaKind::Eq:
      for (const auto& t : f->terms)
        if (!bound.count(t.var)) out.insert(t.var);
      return;
    case FormulaKind::Not:
      collect_free_vars(f->left, bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_free_vars(f->left, bound, out);
      collect_free_vars(f->right, bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool was = bound.count(f->var) > 0;
      bound.insert(f->var);
      collect_free_vars(f->left, bound, out);
      if (!was) bound.erase(f->var);
      return;
    }
  }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

inline void collect_terms(const FormulaPtr& f, std::set<Term>& out) {
  if (!f) return;
  for (const auto& t : f->terms) out.insert(t);
  collect_terms(f->left, out);
  collect_terms(f->right, out);
}

inline bool is_simple(const FormulaPtr& f) {
  if (!f) return true;
  for (const auto& t : f->terms)
    if (!t.is_simple()) return false;
  return is_simple(f->left) && is_simple(f->right);
}

inline bool is_quantifier_free(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall)
    return false;
  return is_quantifier_free(f->left) && is_quantifier_free(f->right);
}

// Substitutes `t` for every free occurrence of variable `x`.
inline FormulaPtr substitute(const FormulaPtr& f, const std::string& x,
                             const Term& t) {
  if (!f) return f;
  switch (f->kind) {
    case FormulaKind::Top:
    case FormulaKind::Bottom:
      return f;
    case FormulaKind::Atom:
    case FormulaKind::Eq: {
      std::vector<Term> ts;
      ts.reserve(f->terms.size());
      bool changed = false;
      for (const auto& tm : f->terms) {
        if (tm.var == x) {
          ts.push_back(tm.composed_over(t));
          changed = true;
        } else {
          ts.push_back(tm);
        }
      }
      if (!changed) return f;
      if (f->kind == FormulaKind::Atom) return Formula::atom(f->rel, std::move(ts));
      return Formula::eq(std::move(ts[0]), std::move(ts[1]));
    }
    case FormulaKind::Not:
      return Formula::neg(substitute(f->left, x, t));
    case FormulaKind::And:
      return Formula::conj(substitute(f->left, x, t), substitute(f->right, x, t));
    case FormulaKind::Or:
      return Formula::disj(substitute(f->left, x, t), substitute(f->right, x, t));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (f->var == x) return f;
      auto body = substitute(f->left, x, t);
      return f->kind == FormulaKind::Exists ? Formula::exists(f->var, body)
                                            : Formula::forall(f->var, body);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Printing. `!` binds tighter than `&`, which binds tighter than `|`;
// quantifier scope extends maximally to the right.

inline std::string print_formula(const FormulaPtr& f, const Language& lang);

namespace detail {

inline void print_rec(const FormulaPtr& f, const Language& lang, int parent_prec,
                      std::string& out) {
  // precedence: quantifier 0, | 1, & 2, ! 3, atoms 4
  switch (f->kind) {
    case FormulaKind::Top:
      out += "T";
      return;
    case FormulaKind::Bottom:
      out += "F";
      return;
    case FormulaKind::Atom: {
      out += lang.relation_name(f->rel);
      out += "(";
      for (size_t i = 0; i < f->terms.size(); ++i) {
        if (i) out += ",";
        out += print_term(f->terms[i], lang);
      }
      out += ")";
      return;
    }
    case FormulaKind::Eq:
      out += print_term(f->terms[0], lang);
      out += " = ";
      out += print_term(f->terms[1], lang);
      return;
    case FormulaKind::Not:
      // ¬(t1 = t2) prints as t1 != t2
      if (f->left->kind == FormulaKind::Eq) {
        out += print_term(f->left->terms[0], lang);
        out += " != ";
        out += print_term(f->left->terms[1], lang);
        return;
      }
      out += "!";
      if (f->left->kind == FormulaKind::Atom || f->left->kind == FormulaKind::Top ||
          f->left->kind == FormulaKind::Bottom || f->left->kind == FormulaKind::Not) {
        print_rec(f->left, lang, 3, out);
      } else {
        out += "(";
        print_rec(f->left, lang, 0, out);
        out += ")";
      }
      return;
    case FormulaKind::And: {
      bool paren = parent_prec > 2;
      if (paren) out += "(";
      print_rec(f->left, lang, 2, out);
      out += " & ";
      print_rec(f->right, lang, 2, out);
      if (paren) out += ")";
      return;
    }
    case FormulaKind::Or: {
      bool paren = parent_prec > 1;
      if (paren) out += "(";
      print_rec(f->left, lang, 1, out);
      out += " | ";
      print_rec(f->right, lang, 1, out);
      if (paren) out += ")";
      return;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool paren = parent_prec > 0;
      if (paren) out += "(";
      out += (f->kind == FormulaKind::Exists) ? "E " : "A ";
      out += f->var;
      out += ". ";
      print_rec(f->left, lang, 0, out);
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f, const Language& lang) {
  std::string out;
  detail::print_rec(f, lang, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

struct Parser {
  const std::string& src;
  const Language& lang;
  size_t at = 0;

  Parser(const std::string& s, const Language& l) : src(s), lang(l) {}

  void skip_ws() {
    while (at < src.size() && isspace(static_cast<unsigned char>(src[at]))) ++at;
  }

  bool eat(char c) {
    skip_ws();
    if (at < src.size() && src[at] == c) {
      ++at;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw parse_error(std::string("expected `") + c + "`", static_cast<int>(at));
  }

  static bool ident_start(char c) {
    return isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::optional<std::string> peek_ident() {
    skip_ws();
    if (at >= src.size() || !ident_start(src[at])) return std::nullopt;
    size_t e = at;
    while (e < src.size() && ident_char(src[e])) ++e;
    return src.substr(at, e - at);
  }

  std::string take_ident() {
    auto id = peek_ident();
    if (!id) throw parse_error("expected identifier", static_cast<int>(at));
    at += id->size();
    return *id;
  }

  // quantifier keyword `E x.` / `A x.` needs two-token lookahead because E
  // and A are legal relation names
  bool at_quantifier() {
    skip_ws();
    size_t save = at;
    auto kw = peek_ident();
    if (!kw || (*kw != "E" && *kw != "A")) return false;
    at += kw->size();
    auto v = peek_ident();
    bool yes = false;
    if (v) {
      size_t after = at + v->size();
      while (after < src.size() && isspace(static_cast<unsigned char>(src[after])))
        ++after;
      yes = after < src.size() && src[after] == '.';
    }
    at = save;
    return yes;
  }

  Term parse_term() {
    int start = static_cast<int>(at);
    std::string id = take_ident();
    std::vector<int> chain;
    std::string base = id;
    // f(g(...(x)...)) — collect function applications outermost first
    std::vector<int> outer;
    while (true) {
      skip_ws();
      if (at < src.size() && src[at] == '(') {
        auto fid = lang.function_id(base);
        if (!fid) {
          if (lang.relation_id(base))
            throw parse_error("relation symbol `" + base + "` used as a function",
                              start);
          throw parse_error("unknown function symbol `" + base + "`", start);
        }
        outer.push_back(*fid);
        expect('(');
        start = static_cast<int>(at);
        base = take_ident();
        continue;
      }
      break;
    }
    for (size_t i = 0; i < outer.size(); ++i) expect(')');
    if (lang.has_symbol(base))
      throw parse_error("symbol `" + base + "` used as a variable", start);
    Term t;
    t.var = base;
    t.fns.assign(outer.rbegin(), outer.rend());
    return t;
  }

  FormulaPtr parse_atom_or_eq() {
    skip_ws();
    int start = static_cast<int>(at);
    if (eat('(')) {
      auto f = parse_or();
      expect(')');
      return f;
    }
    auto id = peek_ident();
    if (!id) throw parse_error("expected formula", start);
    if (*id == "T" && !lang.has_symbol("T")) {
      at += 1;
      return Formula::top();
    }
    if (*id == "F" && !lang.has_symbol("F")) {
      at += 1;
      return Formula::bottom();
    }
    // relation atom?
    auto rid = lang.relation_id(*id);
    if (rid) {
      size_t save = at;
      at += id->size();
      skip_ws();
      if (at < src.size() && src[at] == '(') {
        expect('(');
        std::vector<Term> ts;
        skip_ws();
        if (!eat(')')) {
          ts.push_back(parse_term());
          while (eat(',')) ts.push_back(parse_term());
          expect(')');
        }
        if (static_cast<int>(ts.size()) != lang.arity(*rid))
          throw parse_error("relation " + *id + " expects " +
                                std::to_string(lang.arity(*rid)) + " arguments, got " +
                                std::to_string(ts.size()),
                            start);
        return Formula::atom(*rid, std::move(ts));
      }
      at = save;  // bare relation name: fall through as term (likely an error)
    }
    // term (= | != term)
    Term t1 = parse_term();
    skip_ws();
    if (at + 1 < src.size() && src[at] == '!' && src[at + 1] == '=') {
      at += 2;
      Term t2 = parse_term();
      return Formula::neg(Formula::eq(std::move(t1), std::move(t2)));
    }
    if (eat('=')) {
      Term t2 = parse_term();
      return Formula::eq(std::move(t1), std::move(t2));
    }
    throw parse_error("expected `=` or `!=` after term", static_cast<int>(at));
  }

  FormulaPtr parse_not() {
    skip_ws();
    if (at_quantifier()) return parse_quantifier();
    if (eat('!')) return Formula::neg(parse_not());
    return parse_atom_or_eq();
  }

  FormulaPtr parse_and() {
    auto f = parse_not();
    while (true) {
      skip_ws();
      if (at < src.size() && src[at] == '&') {
        ++at;
        f = Formula::conj(f, parse_not());
      } else {
        return f;
      }
    }
  }

  FormulaPtr parse_or() {
    auto f = parse_and();
    while (true) {
      skip_ws();
      if (at < src.size() && src[at] == '|') {
        ++at;
        f = Formula::disj(f, parse_and());
      } else {
        return f;
      }
    }
  }

  FormulaPtr parse_quantifier() {
    std::string kw = take_ident();
    int start = static_cast<int>(at);
    std::string v = take_ident();
    if (lang.has_symbol(v))
      throw parse_error("symbol `" + v + "` used as a variable", start);
    expect('.');
    auto body = parse_or();  // scope extends maximally right
    return kw == "E" ? Formula::exists(std::move(v), std::move(body))
                     : Formula::forall(std::move(v), std::move(body));
  }
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text, const Language& lang) {
  detail::Parser p(text, lang);
  auto f = p.parse_or();
  p.skip_ws();
  if (p.at != text.size())
    throw parse_error("trailing input", static_cast<int>(p.at));
  return f;
}

// ---------------------------------------------------------------------------
// Structures.

class Structure {
public:
  Structure() = default;
  Structure(Language lang, int n)
      : lang_(std::move(lang)), n_(n), rels_(lang_.relation_count()) {
    if (n < 0) throw input_error("structure: negative universe size");
    // functions default to the identity, which keeps them total
    std::vector<int> ident(n);
    for (int v = 0; v < n; ++v) ident[v] = v;
    funcs_.assign(lang_.function_count(), ident);
  }

  const Language& language() const { return lang_; }
  int n() const { return n_; }

  const std::set<std::vector<int>>& tuples(int rel) const { return rels_[rel]; }

  bool has_tuple(int rel, const std::vector<int>& t) const {
    return rels_[rel].count(t) > 0;
  }

  void add_tuple(int rel, std::vector<int> t) {
    check_tuple(rel, t);
    rels_[rel].insert(std::move(t));
  }

  bool remove_tuple(int rel, const std::vector<int>& t) {
    return rels_[rel].erase(t) > 0;
  }

  void set_function(int fn, int v, int image) {
    if (v < 0 || v >= n_ || image < 0 || image >= n_)
      throw input_error("function pair out of universe");
    funcs_[fn][v] = image;
  }

  int apply(int fn, int v) const { return funcs_[fn][v]; }

  const std::vector<int>& function_table(int fn) const { return funcs_[fn]; }

  int eval_term(const Term& t, int value_of_var) const {
    int v = value_of_var;
    for (int f : t.fns) v = funcs_[f][v];
    return v;
  }

  // |V| + sum of relation sizes + |L^f|*|V|
  long long size() const {
    long long s = n_ + static_cast<long long>(lang_.function_count()) * n_;
    for (const auto& r : rels_) s += static_cast<long long>(r.size());
    return s;
  }

  // Extends the language in place; existing interpretations are kept.
  int add_relation(const std::string& name, int arity) {
    int id = lang_.add_relation(name, arity);
    rels_.emplace_back();
    return id;
  }

  int add_function(const std::string& name) {
    int id = lang_.add_function(name);
    std::vector<int> ident(n_);
    for (int v = 0; v < n_; ++v) ident[v] = v;
    funcs_.push_back(std::move(ident));
    return id;
  }

  bool operator==(const Structure& o) const {
    return n_ == o.n_ && rels_ == o.rels_ && funcs_ == o.funcs_;
  }

private:
  void check_tuple(int rel, const std::vector<int>& t) const {
    if (static_cast<int>(t.size()) != lang_.arity(rel))
      throw input_error("tuple arity mismatch for " + lang_.relation_name(rel));
    for (int v : t)
      if (v < 0 || v >= n_)
        throw input_error("tuple element " + std::to_string(v) + " out of universe");
  }

  Language lang_;
  int n_ = 0;
  std::vector<std::set<std::vector<int>>> rels_;
  std::vector<std::vector<int>> funcs_;
};

// Edge between distinct a,b iff they co-occur in some tuple or f(a)=b or
// f(b)=a for some function f.
inline Graph gaifman_graph(const Structure& s) {
  Graph g(s.n());
  const Language& lang = s.language();
  for (int r = 0; r < lang.relation_count(); ++r)
    for (const auto& t : s.tuples(r))
      for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
          if (t[i] != t[j]) g.add_edge_unsorted(t[i], t[j]);
  for (int f = 0; f < lang.function_count(); ++f)
    for (int v = 0; v < s.n(); ++v)
      if (s.apply(f, v) != v) g.add_edge_unsorted(v, s.apply(f, v));
  g.finish();
  return g;
}

inline bool is_guarded(const Structure& s, const Graph& g) {
  if (s.n() != g.n())
    throw input_error("guard graph and structure universe sizes differ");
  const Language& lang = s.language();
  for (int r = 0; r < lang.relation_count(); ++r)
    for (const auto& t : s.tuples(r))
      for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
          if (t[i] != t[j] && !g.has_edge(t[i], t[j])) return false;
  for (int f = 0; f < lang.function_count(); ++f)
    for (int v = 0; v < s.n(); ++v)
      if (s.apply(f, v) != v && !g.has_edge(v, s.apply(f, v))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Reference semantics: exhaustive quantifier expansion, O(n^q * |phi|).
// Over the empty universe E is false and A is true.

using Bindings = std::map<std::string, int>;

inline bool eval_oracle(const Structure& s, const FormulaPtr& f, Bindings& env) {
  switch (f->kind) {
    case FormulaKind::Top:
      return true;
    case FormulaKind::Bottom:
      return false;
    case FormulaKind::Atom: {
      std::vector<int> vals(f->terms.size());
      for (size_t i = 0; i < f->terms.size(); ++i) {
        auto it = env.find(f->terms[i].var);
        if (it == env.end())
          throw input_error("unbound variable " + f->terms[i].var);
        vals[i] = s.eval_term(f->terms[i], it->second);
      }
      return s.has_tuple(f->rel, vals);
    }
    case FormulaKind::Eq: {
      auto a = env.find(f->terms[0].var);
      auto b = env.find(f->terms[1].var);
      if (a == env.end()) throw input_error("unbound variable " + f->terms[0].var);
      if (b == env.end()) throw input_error("unbound variable " + f->terms[1].var);
      return s.eval_term(f->terms[0], a->second) ==
             s.eval_term(f->terms[1], b->second);
    }
    case FormulaKind::Not:
      return !eval_oracle(s, f->left, env);
    case FormulaKind::And:
      return eval_oracle(s, f->left, env) && eval_oracle(s, f->right, env);
    case FormulaKind::Or:
      return eval_oracle(s, f->left, env) || eval_oracle(s, f->right, env);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool exists = f->kind == FormulaKind::Exists;
      auto it = env.find(f->var);
      std::optional<int> saved;
      if (it != env.end()) saved = it->second;
      for (int v = 0; v < s.n(); ++v) {
        env[f->var] = v;
        bool r = eval_oracle(s, f->left, env);
        if (exists && r) {
          if (saved) env[f->var] = *saved; else env.erase(f->var);
          return true;
        }
        if (!exists && !r) {
          if (saved) env[f->var] = *saved; else env.erase(f->var);
          return false;
        }
      }
      if (saved) env[f->var] = *saved; else env.erase(f->var);
      return !exists;
    }
  }
  return false;
}

inline bool eval_oracle(const Structure& s, const FormulaPtr& f,
                        const Bindings& bindings = {}) {
  auto fv = free_vars(f);
  for (const auto& v : fv)
    if (!bindings.count(v)) throw input_error("unbound free variable " + v);
  Bindings env = bindings;
  return eval_oracle(s, f, env);
}

// ---------------------------------------------------------------------------
// Structure text format:
//   universe <n>
//   rel <Name>/<arity>   followed by one whitespace-separated tuple per line;
//                        a nullary fact is written as `()`
//   fun <name>           followed by `v w` pairs meaning f(v)=w
//   # comment
// Unlisted function values default to the identity.

inline Structure read_structure(std::istream& is) {
  std::string line;
  int lineno = 0;
  long long n = -1;
  // two passes folded into one: collect symbol sections, then build
  struct RelSec { std::string name; int arity; std::vector<std::vector<int>> tuples; };
  struct FunSec { std::string name; std::vector<std::pair<int, int>> pairs; };
  std::vector<RelSec> rels;
  std::vector<FunSec> funs;
  int mode = 0;  // 0 none, 1 rel, 2 fun

  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    auto fail = [&](const std::string& m) -> input_error {
      return input_error("line " + std::to_string(lineno) + ": " + m);
    };
    if (first == "universe") {
      if (n >= 0) throw fail("duplicate universe line");
      if (!(ls >> n) || n < 0) throw fail("bad universe size");
      continue;
    }
    if (n < 0) throw fail("expected `universe <n>` first");
    if (first == "rel") {
      std::string decl;
      if (!(ls >> decl)) throw fail("expected `rel <Name>/<arity>`");
      auto slash = decl.find('/');
      if (slash == std::string::npos) throw fail("expected <Name>/<arity>");
      RelSec sec;
      sec.name = decl.substr(0, slash);
      try {
        sec.arity = std::stoi(decl.substr(slash + 1));
      } catch (...) {
        throw fail("bad arity");
      }
      if (sec.arity < 0) throw fail("bad arity");
      rels.push_back(std::move(sec));
      mode = 1;
      continue;
    }
    if (first == "fun") {
      FunSec sec;
      if (!(ls >> sec.name)) throw fail("expected `fun <name>`");
      funs.push_back(std::move(sec));
      mode = 2;
      continue;
    }
    if (mode == 1) {
      std::vector<int> tuple;
      if (first == "()") {
        if (rels.back().arity != 0) throw fail("`()` in a relation of arity > 0");
      } else {
        std::istringstream ts(line);
        int x;
        while (ts >> x) tuple.push_back(x);
        if (static_cast<int>(tuple.size()) != rels.back().arity)
          throw fail("tuple arity mismatch for " + rels.back().name);
      }
      rels.back().tuples.push_back(std::move(tuple));
      continue;
    }
    if (mode == 2) {
      std::istringstream ts(line);
      int v, w;
      if (!(ts >> v >> w)) throw fail("expected `v w` pair");
      funs.back().pairs.emplace_back(v, w);
      continue;
    }
    throw fail("unexpected content before any rel/fun section");
  }
  if (n < 0) throw input_error("missing `universe <n>` line");

  Language lang;
  for (const auto& r : rels) lang.add_relation(r.name, r.arity);
  for (const auto& f : funs) lang.add_function(f.name);
  Structure s(lang, static_cast<int>(n));
  for (const auto& r : rels) {
    int id = *s.language().relation_id(r.name);
    for (const auto& t : r.tuples) s.add_tuple(id, t);
  }
  for (const auto& f : funs) {
    int id = *s.language().function_id(f.name);
    for (auto [v, w] : f.pairs) s.set_function(id, v, w);
  }
  return s;
}

inline void write_structure(std::ostream& os, const Structure& s) {
  os << "universe " << s.n() << "\n";
  const Language& lang = s.language();
  for (int r = 0; r < lang.relation_count(); ++r) {
    os << "rel " << lang.relation_name(r) << "/" << lang.arity(r) << "\n";
    for (const auto& t : s.tuples(r)) {
      if (t.empty()) {
        os << "()\n";
        continue;
      }
      for (size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
      os << "\n";
    }
  }
  for (int f = 0; f < lang.function_count(); ++f) {
    os << "fun " << lang.function_name(f) << "\n";
    for (int v = 0; v < s.n(); ++v)
      if (s.apply(f, v) != v) os << v << " " << s.apply(f, v) << "\n";
  }
}

}  // namespace sparsefo
