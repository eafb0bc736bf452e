#pragma once

// Cube/clause views over literal vectors.  A literal is an atom or a negated
// atom; literal negation is structural (< and <= swap sides), so cubes and
// clauses stay atomic-literal-only and are exact duals under negation.

#include <vector>

#include "quic3/subst.hpp"
#include "quic3/term.hpp"

namespace quic3 {

inline bool is_atom(TermRef t) {
  if (t->sort != Sort::Bool) return false;
  switch (t->kind) {
    case Kind::BoolLit:
    case Kind::Const:
      return true;
    case Kind::App:
      switch (t->op) {
        case Op::Lt:
        case Op::Le:
        case Op::Eq:
        case Op::ModEq:
          return true;
        default:
          return false;
      }
    default:
      return false;
  }
}

inline bool is_literal(TermRef t) {
  return is_atom(t) || (t->is_app(Op::Not) && is_atom(t->args[0]));
}

inline TermRef negate_literal(TermRef lit) {
  require(is_literal(lit), "negate_literal expects a literal");
  return mk_not(lit);
}

struct Cube;
struct Clause;

namespace detail {
inline std::vector<TermRef> collect_lits(TermRef t, Op junct, const char *what) {
  std::vector<TermRef> lits;
  std::function<void(TermRef)> go = [&](TermRef u) {
    if (u->is_app(junct)) {
      for (TermRef a : u->args) go(a);
    } else {
      require(is_literal(u), std::string(what) + ": not a literal: non-atomic subformula");
      lits.push_back(u);
    }
  };
  go(t);
  std::sort(lits.begin(), lits.end(), TermLess{});
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return lits;
}
}  // namespace detail

// conjunction of literals
struct Cube {
  std::vector<TermRef> lits;  // sorted by the term order, deduped

  Cube() = default;
  explicit Cube(std::vector<TermRef> ls) : lits(std::move(ls)) {
    std::sort(lits.begin(), lits.end(), TermLess{});
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  }

  static Cube of_term(TermRef t) {
    if (t->is_true()) return Cube{};
    return Cube{detail::collect_lits(t, Op::And, "cube")};
  }

  TermRef to_term() const {
    return mk_and(std::vector<TermRef>(lits.begin(), lits.end()));
  }

  bool is_ground() const {
    for (TermRef l : lits)
      if (!l->is_ground()) return false;
    return true;
  }

  Clause negate() const;

  bool operator==(const Cube &o) const { return lits == o.lits; }
};

// disjunction of literals
struct Clause {
  std::vector<TermRef> lits;

  Clause() = default;
  explicit Clause(std::vector<TermRef> ls) : lits(std::move(ls)) {
    std::sort(lits.begin(), lits.end(), TermLess{});
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  }

  static Clause of_term(TermRef t) {
    if (t->is_false()) return Clause{};
    return Clause{detail::collect_lits(t, Op::Or, "clause")};
  }

  TermRef to_term() const {
    return mk_or(std::vector<TermRef>(lits.begin(), lits.end()));
  }

  bool is_ground() const {
    for (TermRef l : lits)
      if (!l->is_ground()) return false;
    return true;
  }

  Cube negate() const;

  bool operator==(const Clause &o) const { return lits == o.lits; }
};

inline Clause Cube::negate() const {
  std::vector<TermRef> out;
  out.reserve(lits.size());
  for (TermRef l : lits) out.push_back(negate_literal(l));
  return Clause{std::move(out)};
}

inline Cube Clause::negate() const {
  std::vector<TermRef> out;
  out.reserve(lits.size());
  for (TermRef l : lits) out.push_back(negate_literal(l));
  return Cube{std::move(out)};
}

// subterm replacement (all occurrences)
inline TermRef replace_by(TermRef t, TermRef target, TermRef repl) {
  if (t == target) return repl;
  if (t->kind != Kind::App) return t;
  std::vector<TermRef> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (TermRef a : t->args) {
    TermRef r = replace_by(a, target, repl);
    changed |= (r != a);
    args.push_back(r);
  }
  if (!changed) return t;
  return intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, std::move(args));
}

// Rewrites int-sorted ite below atoms into boolean structure, then expands to
// disjunctive normal form.  Used to split Bad into candidate POB cubes.
inline TermRef hoist_ite(TermRef t) {
  if (t->kind != Kind::App) return t;
  if (t->sort == Sort::Bool && is_atom(t)) {
    // find an ite strictly below this atom
    TermRef found = nullptr;
    std::function<void(TermRef)> scan = [&](TermRef u) {
      if (found) return;
      if (u->is_app(Op::Ite)) {
        found = u;
        return;
      }
      for (TermRef a : u->args) scan(a);
    };
    for (TermRef a : t->args) scan(a);
    if (!found) return normalize(t);
    TermRef cond = found->args[0];
    auto replaced = [&](TermRef branch) {
      return replace_by(t, found, branch);
    };
    return hoist_ite(mk_or(mk_and(hoist_ite(cond), replaced(found->args[1])),
                           mk_and(mk_not(hoist_ite(cond)), replaced(found->args[2]))));
  }
  std::vector<TermRef> args;
  args.reserve(t->args.size());
  for (TermRef a : t->args) args.push_back(hoist_ite(a));
  if (t->is_app(Op::Ite) && t->sort == Sort::Bool)
    return mk_or(mk_and(args[0], args[1]), mk_and(mk_not(args[0]), args[2]));
  return normalize(intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, args));
}

// DNF cubes of a quantifier-free formula (NNF + distribution), capped.
inline std::vector<Cube> dnf_cubes(TermRef t, size_t cap = 64) {
  TermRef h = hoist_ite(normalize(t));
  std::function<std::vector<Cube>(TermRef, bool)> go = [&](TermRef u,
                                                           bool neg) -> std::vector<Cube> {
    if (u->is_app(Op::Not)) return go(u->args[0], !neg);
    if (u->is_app(Op::Implies)) return go(mk_or(mk_not(u->args[0]), u->args[1]), neg);
    if (u->is_app(Op::Ite) && u->sort == Sort::Bool)
      return go(mk_or(mk_and(u->args[0], u->args[1]), mk_and(mk_not(u->args[0]), u->args[2])),
                neg);
    bool conj = u->is_app(neg ? Op::Or : Op::And);
    bool disj = u->is_app(neg ? Op::And : Op::Or);
    if (disj) {
      std::vector<Cube> out;
      for (TermRef a : u->args) {
        auto sub = go(a, neg);
        out.insert(out.end(), sub.begin(), sub.end());
        if (out.size() > cap) throw std::runtime_error("dnf_cubes: cube cap exceeded");
      }
      return out;
    }
    if (conj) {
      std::vector<Cube> acc{Cube{}};
      for (TermRef a : u->args) {
        auto sub = go(a, neg);
        std::vector<Cube> next;
        for (const Cube &c1 : acc)
          for (const Cube &c2 : sub) {
            std::vector<TermRef> ls = c1.lits;
            ls.insert(ls.end(), c2.lits.begin(), c2.lits.end());
            Cube merged{std::move(ls)};
            if (merged.to_term()->is_false()) continue;
            next.push_back(std::move(merged));
            if (next.size() > cap) throw std::runtime_error("dnf_cubes: cube cap exceeded");
          }
        acc = std::move(next);
      }
      return acc;
    }
    TermRef lit = neg ? mk_not(u) : u;
    if (lit->is_true()) return {Cube{}};
    if (lit->is_false()) return {};
    require(is_literal(lit), "dnf: unsupported subformula");
    return {Cube{{lit}}};
  };
  auto cubes = go(h, false);
  // drop duplicates, keep deterministic order
  std::vector<Cube> out;
  for (auto &c : cubes) {
    bool dup = false;
    for (auto &d : out) dup |= (d == c);
    if (!dup) out.push_back(c);
  }
  return out;
}

}  // namespace quic3
