#pragma once

// SMT-LIB2-compatible s-expression printing.  sel prints as select; primed
// constants print with a trailing '!'; free variables print as v<i> (they
// only appear in output inside forall binders or debug dumps).

#include <sstream>
#include <string>

#include "quic3/logic.hpp"
#include "quic3/term.hpp"

namespace quic3 {

inline std::string const_display_name(TermRef c) {
  switch (c->cls) {
    case ConstClass::State: return c->name;
    case ConstClass::Primed: return c->name + "!";
    case ConstClass::Skolem: return c->name;  // "sk!i"
  }
  return c->name;
}

inline void print_term(std::ostream &os, TermRef t) {
  switch (t->kind) {
    case Kind::Num:
      if (t->num < 0)
        os << "(- " << -t->num << ")";
      else
        os << t->num;
      return;
    case Kind::BoolLit:
      os << (t->num ? "true" : "false");
      return;
    case Kind::Const:
      os << const_display_name(t);
      return;
    case Kind::Var:
      os << "v" << t->index;
      return;
    case Kind::App: {
      const char *head = nullptr;
      switch (t->op) {
        case Op::Add: head = "+"; break;
        case Op::Sub: head = "-"; break;
        case Op::Mul: head = "*"; break;
        case Op::Lt: head = "<"; break;
        case Op::Le: head = "<="; break;
        case Op::Eq: head = "="; break;
        case Op::Select: head = "select"; break;
        case Op::Store: head = "store"; break;
        case Op::And: head = "and"; break;
        case Op::Or: head = "or"; break;
        case Op::Not: head = "not"; break;
        case Op::Implies: head = "=>"; break;
        case Op::Ite: head = "ite"; break;
        case Op::ModEq: {
          os << "(= (mod ";
          print_term(os, t->args[0]);
          os << " " << t->args[1]->num << ") " << t->args[2]->num << ")";
          return;
        }
        case Op::None: break;
      }
      os << "(" << head;
      for (TermRef a : t->args) {
        os << " ";
        print_term(os, a);
      }
      os << ")";
      return;
    }
  }
}

inline std::string to_smt2(TermRef t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

// clause pretty form: guards => conclusion when the clause mixes polarities
inline TermRef clause_display_term(const Clause &cl) {
  std::vector<TermRef> neg, pos;
  for (TermRef l : cl.lits) {
    if (l->is_app(Op::Not))
      neg.push_back(l->args[0]);
    else
      pos.push_back(l);
  }
  if (!neg.empty() && !pos.empty()) return mk_implies(mk_and(neg), mk_or(pos));
  return cl.to_term();
}

// closed universal form of a lemma body for invariant output
inline std::string to_smt2_closed(TermRef body) {
  std::ostringstream os;
  if (body->fvars.empty()) {
    print_term(os, body);
    return os.str();
  }
  os << "(forall (";
  bool first = true;
  for (uint32_t v : body->fvars) {
    if (!first) os << " ";
    os << "(v" << v << " Int)";
    first = false;
  }
  os << ") ";
  print_term(os, body);
  os << ")";
  return os.str();
}

}  // namespace quic3
