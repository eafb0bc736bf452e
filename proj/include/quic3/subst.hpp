#pragma once

// Substitutions over variable indices, the fixed skolem map sk(v_i) = sk_i,
// the inverse abstraction abs(U, phi), and state/post-state priming.

#include <functional>
#include <map>
#include <unordered_map>

#include "quic3/term.hpp"

namespace quic3 {

class Subst {
 public:
  Subst() = default;

  static Subst single(uint32_t var, TermRef t) {
    Subst s;
    s.bind(var, t);
    return s;
  }

  void bind(uint32_t var, TermRef t) {
    require(t->sort == Sort::Int, "only Int variables exist");
    map_[var] = t;
  }

  bool has(uint32_t var) const { return map_.count(var) != 0; }
  TermRef at(uint32_t var) const { return map_.at(var); }
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  const std::map<uint32_t, TermRef> &entries() const { return map_; }

  bool operator==(const Subst &o) const { return map_ == o.map_; }

  // (this | other)(x) = this(x) if defined, else other(x)
  Subst compose(const Subst &other) const {
    Subst out = other;
    for (auto &[v, t] : map_) out.map_[v] = t;
    return out;
  }

  Subst restrict_to(const std::vector<uint32_t> &vars) const {
    Subst out;
    for (uint32_t v : vars) {
      auto it = map_.find(v);
      if (it != map_.end()) out.map_[v] = it->second;
    }
    return out;
  }

 private:
  std::map<uint32_t, TermRef> map_;
};

namespace detail {
inline TermRef rewrite(TermRef t, const std::function<TermRef(TermRef)> &leaf,
                       std::unordered_map<TermRef, TermRef> &memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  TermRef out;
  if (t->kind == Kind::App) {
    std::vector<TermRef> args;
    args.reserve(t->args.size());
    bool changed = false;
    for (TermRef a : t->args) {
      TermRef r = rewrite(a, leaf, memo);
      changed |= (r != a);
      args.push_back(r);
    }
    out = changed ? intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0,
                                std::move(args))
                  : t;
  } else {
    out = leaf(t);
  }
  memo[t] = out;
  return out;
}
}  // namespace detail

// Structure-preserving leaf replacement (no simplification: phi sigma must be
// syntactically phi with leaves swapped, so abs round-trips exactly).
inline TermRef replace_leaves(TermRef t, const std::function<TermRef(TermRef)> &leaf) {
  std::unordered_map<TermRef, TermRef> memo;
  return detail::rewrite(t, leaf, memo);
}

inline TermRef apply_subst(TermRef t, const Subst &sigma) {
  if (sigma.empty() || t->fvars.empty()) return t;
  return replace_leaves(t, [&](TermRef leaf) {
    if (leaf->is_var() && sigma.has(leaf->index)) return sigma.at(leaf->index);
    return leaf;
  });
}

// replace constants by terms (used by priming, BMC copies, freshening)
inline TermRef apply_const_map(TermRef t, const std::map<TermRef, TermRef, TermLess> &m) {
  if (m.empty() || t->uconsts.empty()) return t;
  return replace_leaves(t, [&](TermRef leaf) {
    if (leaf->is_const()) {
      auto it = m.find(leaf);
      if (it != m.end()) return it->second;
    }
    return leaf;
  });
}

// v_i -> sk_i.  Pure and deterministic: interning makes repeated calls yield
// the identical TermRef.
inline TermRef skolemize(TermRef t) {
  return replace_leaves(t, [](TermRef leaf) -> TermRef {
    if (leaf->is_var()) return mk_skolem(leaf->index);
    return leaf;
  });
}

struct AbsResult {
  TermRef abstracted;
  Subst inverse;  // maps introduced variables back to the constants
};

// abs(U, phi): replace every constant of U occurring in phi by a variable.
// sk_i always becomes v_i; other constants take the lowest variable indices
// not already in use, assigned in first-occurrence (leftmost depth-first)
// order.  Guarantees abstracted . inverse == phi syntactically.
inline AbsResult abs(const std::set<TermRef, TermLess> &U, TermRef phi) {
  std::set<uint32_t> used(phi->fvars.begin(), phi->fvars.end());
  for (TermRef c : phi->uconsts)
    if (c->cls == ConstClass::Skolem && U.count(c)) used.insert(c->index);

  // first-occurrence order of non-skolem targets
  std::vector<TermRef> order;
  std::set<TermRef, TermLess> seen;
  std::function<void(TermRef)> walk = [&](TermRef t) {
    if (t->is_const() && U.count(t) && !seen.count(t)) {
      seen.insert(t);
      if (t->cls != ConstClass::Skolem) order.push_back(t);
      return;
    }
    for (TermRef a : t->args) walk(a);
  };
  walk(phi);

  std::map<TermRef, TermRef, TermLess> repl;
  Subst inv;
  for (TermRef c : phi->uconsts) {
    if (!U.count(c)) continue;
    if (c->cls == ConstClass::Skolem) {
      repl[c] = mk_var(c->index);
      inv.bind(c->index, c);
    } else if (c->sort != Sort::Int) {
      throw SortError("abs: cannot abstract non-Int constant " + c->name);
    }
  }
  uint32_t next = 0;
  for (TermRef c : order) {
    while (used.count(next)) ++next;
    used.insert(next);
    repl[c] = mk_var(next);
    inv.bind(next, c);
  }
  return {apply_const_map(phi, repl), inv};
}

inline std::set<TermRef, TermLess> skolem_consts_of(TermRef t) {
  std::set<TermRef, TermLess> out;
  for (TermRef c : t->uconsts)
    if (c->cls == ConstClass::Skolem) out.insert(c);
  return out;
}

inline TermRef primed_of(TermRef c) {
  require(c->is_const() && c->cls == ConstClass::State, "prime expects a state constant");
  return mk_const(c->name, c->sort, ConstClass::Primed);
}

inline TermRef unprimed_of(TermRef c) {
  require(c->is_const() && c->cls == ConstClass::Primed, "unprime expects a primed constant");
  return mk_const(c->name, c->sort, ConstClass::State);
}

inline TermRef prime(TermRef t) {
  for (TermRef c : t->uconsts)
    require(c->cls != ConstClass::Primed, "prime: term already mentions primed constants");
  return replace_leaves(t, [](TermRef leaf) {
    if (leaf->is_const() && leaf->cls == ConstClass::State) return primed_of(leaf);
    return leaf;
  });
}

inline TermRef unprime(TermRef t) {
  for (TermRef c : t->uconsts)
    require(c->cls != ConstClass::State, "unprime: term mentions pre-state constants");
  return replace_leaves(t, [](TermRef leaf) {
    if (leaf->is_const() && leaf->cls == ConstClass::Primed) return unprimed_of(leaf);
    return leaf;
  });
}

}  // namespace quic3
