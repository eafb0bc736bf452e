#pragma once

// Terms from s-expressions, against a declared-symbol table.  Accepts the
// SMT-LIB2 operator spelling used throughout (select/store, =>, ite, mod only
// as the (= (mod t k) r) divisibility shape).

#include <map>
#include <string>

#include "quic3/sexpr.hpp"
#include "quic3/term.hpp"

namespace quic3 {

struct SymbolTable {
  std::map<std::string, TermRef> consts;

  void declare(const std::string &name, TermRef c) { consts[name] = c; }
  TermRef lookup(const std::string &name) const {
    auto it = consts.find(name);
    return it == consts.end() ? nullptr : it->second;
  }
};

inline Sort parse_sort(const SExpr &e) {
  if (!e.is_list) {
    if (e.atom == "Int") return Sort::Int;
    if (e.atom == "Bool") return Sort::Bool;
    throw ParseError("unknown sort '" + e.atom + "'", e.line, e.col);
  }
  if (e.size() == 3 && e[0].is_atom("Array") && e[1].is_atom("Int") && e[2].is_atom("Int"))
    return Sort::Array;
  throw ParseError("unknown sort " + e.str(), e.line, e.col);
}

inline bool is_integer_token(const std::string &s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!isdigit((unsigned char)s[i])) return false;
  return true;
}

class TermParser {
 public:
  explicit TermParser(const SymbolTable &syms) : syms_(syms) {}

  TermRef parse(const SExpr &e) const {
    try {
      return go(e);
    } catch (const SortError &err) {
      throw ParseError(err.what(), e.line, e.col);
    }
  }

 private:
  TermRef go(const SExpr &e) const {
    if (!e.is_list) {
      if (e.atom == "true") return mk_true();
      if (e.atom == "false") return mk_false();
      if (is_integer_token(e.atom)) return mk_num(std::stoll(e.atom));
      if (TermRef c = syms_.lookup(e.atom)) return c;
      throw ParseError("unknown symbol '" + e.atom + "'", e.line, e.col);
    }
    if (e.size() == 0) throw ParseError("empty application", e.line, e.col);
    const std::string &head = e[0].atom;
    if (e[0].is_list) throw ParseError("head must be a symbol", e.line, e.col);
    if (head == "forall" || head == "exists")
      throw ParseError("quantifiers are not allowed here", e.line, e.col);
    auto arity = [&](size_t n) {
      if (e.size() != n + 1)
        throw ParseError("'" + head + "' expects " + std::to_string(n) + " arguments",
                         e.line, e.col);
    };
    auto arg = [&](size_t i) { return go(e[i + 1]); };

    if (head == "+") {
      std::vector<TermRef> as;
      for (size_t i = 1; i < e.size(); ++i) as.push_back(go(e[i]));
      if (as.empty()) throw ParseError("+ expects arguments", e.line, e.col);
      return mk_add(as);
    }
    if (head == "-") {
      if (e.size() == 2) return mk_neg(arg(0));
      arity(2);
      return mk_sub(arg(0), arg(1));
    }
    if (head == "*") {
      arity(2);
      TermRef a = arg(0), b = arg(1);
      if (a->is_num()) return mk_mul(a->num, b);
      if (b->is_num()) return mk_mul(b->num, a);
      throw ParseError("nonlinear multiplication", e.line, e.col);
    }
    if (head == "<") { arity(2); return mk_lt(arg(0), arg(1)); }
    if (head == "<=") { arity(2); return mk_le(arg(0), arg(1)); }
    if (head == ">") { arity(2); return mk_gt(arg(0), arg(1)); }
    if (head == ">=") { arity(2); return mk_ge(arg(0), arg(1)); }
    if (head == "=") {
      arity(2);
      // divisibility sugar: (= (mod t k) r) with numeral k, r
      const SExpr &l = e[1], &r = e[2];
      auto try_mod = [&](const SExpr &m, const SExpr &rest) -> TermRef {
        if (m.is_list && m.size() == 3 && m[0].is_atom("mod")) {
          TermRef t = go(m[1]);
          TermRef k = go(m[2]);
          TermRef rr = go(rest);
          if (!k->is_num() || !rr->is_num())
            throw ParseError("mod needs numeral modulus and remainder", m.line, m.col);
          return mk_mod_eq(t, k->num, rr->num);
        }
        return nullptr;
      };
      if (TermRef t = try_mod(l, r)) return t;
      if (TermRef t = try_mod(r, l)) return t;
      return mk_eq(arg(0), arg(1));
    }
    if (head == "distinct") { arity(2); return mk_not(mk_eq(arg(0), arg(1))); }
    if (head == "select") { arity(2); return mk_select(arg(0), arg(1)); }
    if (head == "store") { arity(3); return mk_store(arg(0), arg(1), arg(2)); }
    if (head == "and") {
      std::vector<TermRef> as;
      for (size_t i = 1; i < e.size(); ++i) as.push_back(go(e[i]));
      return mk_and(as);
    }
    if (head == "or") {
      std::vector<TermRef> as;
      for (size_t i = 1; i < e.size(); ++i) as.push_back(go(e[i]));
      return mk_or(as);
    }
    if (head == "not") { arity(1); return mk_not(arg(0)); }
    if (head == "=>") {
      if (e.size() < 3) throw ParseError("=> expects 2+ arguments", e.line, e.col);
      TermRef out = go(e[e.size() - 1]);
      for (size_t i = e.size() - 2; i >= 1; --i) out = mk_implies(go(e[i]), out);
      return out;
    }
    if (head == "ite") { arity(3); return mk_ite(arg(0), arg(1), arg(2)); }
    if (head == "mod")
      throw ParseError("mod is only supported as (= (mod t k) r)", e.line, e.col);
    throw ParseError("unknown operator '" + head + "'", e.line, e.col);
  }

  const SymbolTable &syms_;
};

}  // namespace quic3
