#pragma once

// First-order models over the problem signature: total int/bool values per
// constant, arrays as default value + finite exception map.  eval implements
// standard LIA/array semantics and is the ground truth for every soundness
// check in the artifact.

#include <map>
#include <sstream>
#include <string>
#include <variant>

#include "quic3/logic.hpp"
#include "quic3/printer.hpp"
#include "quic3/term.hpp"

namespace quic3 {

struct ArrayVal {
  int64_t def = 0;
  std::map<int64_t, int64_t> exc;

  int64_t read(int64_t i) const {
    auto it = exc.find(i);
    return it == exc.end() ? def : it->second;
  }
  ArrayVal write(int64_t i, int64_t v) const {
    ArrayVal out = *this;
    if (v == def)
      out.exc.erase(i);
    else
      out.exc[i] = v;
    return out;
  }
  bool operator==(const ArrayVal &o) const { return def == o.def && exc == o.exc; }
};

using Value = std::variant<int64_t, bool, ArrayVal>;

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string &m) : std::runtime_error(m) {}
};

struct Model {
  std::map<std::string, int64_t> ints;    // keyed by display name
  std::map<std::string, bool> bools;
  std::map<std::string, ArrayVal> arrays;

  bool assigns(TermRef c) const {
    const std::string n = const_display_name(c);
    switch (c->sort) {
      case Sort::Int: return ints.count(n) != 0;
      case Sort::Bool: return bools.count(n) != 0;
      case Sort::Array: return arrays.count(n) != 0;
    }
    return false;
  }

  void set(TermRef c, Value v) {
    const std::string n = const_display_name(c);
    switch (c->sort) {
      case Sort::Int: ints[n] = std::get<int64_t>(v); break;
      case Sort::Bool: bools[n] = std::get<bool>(v); break;
      case Sort::Array: arrays[n] = std::get<ArrayVal>(v); break;
    }
  }

  std::string str() const {
    std::ostringstream os;
    for (auto &[n, v] : ints) os << n << "=" << v << " ";
    for (auto &[n, v] : bools) os << n << "=" << (v ? "true" : "false") << " ";
    for (auto &[n, a] : arrays) {
      os << n << "=[default " << a.def;
      for (auto &[i, v] : a.exc) os << ", " << i << ":" << v;
      os << "] ";
    }
    return os.str();
  }
};

inline Value eval(const Model &m, TermRef t);

inline int64_t eval_int(const Model &m, TermRef t) {
  Value v = eval(m, t);
  if (!std::holds_alternative<int64_t>(v)) throw EvalError("expected Int value");
  return std::get<int64_t>(v);
}
inline bool eval_bool(const Model &m, TermRef t) {
  Value v = eval(m, t);
  if (!std::holds_alternative<bool>(v)) throw EvalError("expected Bool value");
  return std::get<bool>(v);
}
inline ArrayVal eval_array(const Model &m, TermRef t) {
  Value v = eval(m, t);
  if (!std::holds_alternative<ArrayVal>(v)) throw EvalError("expected Array value");
  return std::get<ArrayVal>(v);
}

inline Value eval(const Model &m, TermRef t) {
  switch (t->kind) {
    case Kind::Num: return t->num;
    case Kind::BoolLit: return t->num != 0;
    case Kind::Var: throw EvalError("eval of non-ground term");
    case Kind::Const: {
      const std::string n = const_display_name(t);
      switch (t->sort) {
        case Sort::Int: {
          auto it = m.ints.find(n);
          if (it == m.ints.end()) throw EvalError("unassigned constant " + n);
          return it->second;
        }
        case Sort::Bool: {
          auto it = m.bools.find(n);
          if (it == m.bools.end()) throw EvalError("unassigned constant " + n);
          return it->second;
        }
        case Sort::Array: {
          auto it = m.arrays.find(n);
          if (it == m.arrays.end()) throw EvalError("unassigned constant " + n);
          return it->second;
        }
      }
      throw EvalError("bad constant");
    }
    case Kind::App:
      switch (t->op) {
        case Op::Add: {
          int64_t s = 0;
          for (TermRef a : t->args) s += eval_int(m, a);
          return s;
        }
        case Op::Sub: return eval_int(m, t->args[0]) - eval_int(m, t->args[1]);
        case Op::Mul: return t->args[0]->num * eval_int(m, t->args[1]);
        case Op::Lt: return eval_int(m, t->args[0]) < eval_int(m, t->args[1]);
        case Op::Le: return eval_int(m, t->args[0]) <= eval_int(m, t->args[1]);
        case Op::Eq: {
          Value a = eval(m, t->args[0]), b = eval(m, t->args[1]);
          return a == b;
        }
        case Op::Select:
          return eval_array(m, t->args[0]).read(eval_int(m, t->args[1]));
        case Op::Store:
          return eval_array(m, t->args[0])
              .write(eval_int(m, t->args[1]), eval_int(m, t->args[2]));
        case Op::And: {
          for (TermRef a : t->args)
            if (!eval_bool(m, a)) return false;
          return true;
        }
        case Op::Or: {
          for (TermRef a : t->args)
            if (eval_bool(m, a)) return true;
          return false;
        }
        case Op::Not: return !eval_bool(m, t->args[0]);
        case Op::Implies: return !eval_bool(m, t->args[0]) || eval_bool(m, t->args[1]);
        case Op::Ite:
          return eval_bool(m, t->args[0]) ? eval(m, t->args[1]) : eval(m, t->args[2]);
        case Op::ModEq: {
          int64_t v = eval_int(m, t->args[0]);
          int64_t k = t->args[1]->num;
          return ((v % k) + k) % k == t->args[2]->num;
        }
        case Op::None: break;
      }
      throw EvalError("bad application");
  }
  throw EvalError("bad term");
}

// Model-guided implicant: a cube of literals true in M that implies phi.
// Disjunctions pick the first M-true branch; term-level ite splits on the
// M-value of the condition, recording literals that force the chosen branch.
// phi must hold in M.
inline Cube implicant(const Model &m, TermRef phi) {
  std::vector<TermRef> lits;
  std::function<void(TermRef, bool)> go;

  // rewrite int/array ites guided by M, emitting branch guards through go
  std::function<TermRef(TermRef)> strip = [&](TermRef t) -> TermRef {
    if (t->kind != Kind::App) return t;
    if (t->is_app(Op::Ite) && t->sort != Sort::Bool) {
      bool cv = eval_bool(m, t->args[0]);
      go(t->args[0], cv);
      return strip(cv ? t->args[1] : t->args[2]);
    }
    std::vector<TermRef> args;
    args.reserve(t->args.size());
    bool changed = false;
    for (TermRef a : t->args) {
      TermRef r = strip(a);
      changed |= (r != a);
      args.push_back(r);
    }
    if (!changed) return t;
    return normalize(
        intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, std::move(args)));
  };

  go = [&](TermRef t, bool want) {
    if (t->is_bool_lit()) {
      if ((t->num != 0) != want) throw EvalError("implicant: model does not satisfy formula");
      return;
    }
    if (t->is_app(Op::Not)) return go(t->args[0], !want);
    if (t->is_app(Op::Implies)) {
      if (want) {
        if (!eval_bool(m, t->args[0]))
          go(t->args[0], false);
        else
          go(t->args[1], true);
      } else {
        go(t->args[0], true);
        go(t->args[1], false);
      }
      return;
    }
    if (t->is_app(Op::Ite) && t->sort == Sort::Bool) {
      bool cv = eval_bool(m, t->args[0]);
      go(t->args[0], cv);
      go(cv ? t->args[1] : t->args[2], want);
      return;
    }
    if (t->is_app(want ? Op::And : Op::Or)) {
      for (TermRef a : t->args) go(a, want);
      return;
    }
    if (t->is_app(want ? Op::Or : Op::And)) {
      for (TermRef a : t->args) {
        if (eval_bool(m, a) == want) {
          go(a, want);
          return;
        }
      }
      throw EvalError("implicant: model does not satisfy formula");
    }
    // atom
    TermRef lit = strip(want ? t : mk_not(t));
    if (!eval_bool(m, lit)) throw EvalError("implicant: model does not satisfy formula");
    if (lit->is_true()) return;
    require(is_literal(lit), "implicant: non-literal atom");
    lits.push_back(lit);
  };

  go(normalize(phi), true);
  return Cube{std::move(lits)};
}

}  // namespace quic3
