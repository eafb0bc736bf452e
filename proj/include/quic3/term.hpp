#pragma once

// Hash-consed ground/first-order term language over LIA + arrays (int index,
// int data) + booleans.  Terms are immutable and pointer-interned: structural
// equality is pointer equality, and every term carries its free variables and
// uninterpreted constants precomputed.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace quic3 {

enum class Sort : uint8_t { Int, Bool, Array };  // Array is (Array Int Int)

inline const char *sort_name(Sort s) {
  switch (s) {
    case Sort::Int: return "Int";
    case Sort::Bool: return "Bool";
    case Sort::Array: return "(Array Int Int)";
  }
  return "?";
}

enum class Kind : uint8_t { Num, BoolLit, Const, Var, App };

// State constants model program variables, Primed their post-state copies,
// Skolem the fixed indexed family sk_0, sk_1, ... used by deterministic
// skolemization.
enum class ConstClass : uint8_t { State, Primed, Skolem };

enum class Op : uint8_t {
  None,
  Add,      // n-ary
  Sub,      // binary
  Mul,      // binary, first arg is a numeral (linearity)
  Lt,
  Le,
  Eq,
  Select,
  Store,
  And,      // n-ary
  Or,       // n-ary
  Not,
  Implies,
  Ite,
  ModEq,    // ModEq(t, k, r): t == r (mod k); k, r numerals, k >= 2, 0 <= r < k
};

class TermNode;
using TermRef = const TermNode *;

class TermNode {
 public:
  Kind kind;
  Sort sort;
  Op op = Op::None;
  int64_t num = 0;             // Num value / BoolLit 0-1
  std::string name;            // Const
  ConstClass cls = ConstClass::State;
  uint32_t index = 0;          // Var index, Skolem index
  std::vector<TermRef> args;   // App
  uint64_t id = 0;             // creation sequence (unique)

  std::vector<uint32_t> fvars;   // sorted var indices occurring below
  std::vector<TermRef> uconsts;  // sorted (by name) constants occurring below

  bool is_num() const { return kind == Kind::Num; }
  bool is_bool_lit() const { return kind == Kind::BoolLit; }
  bool is_const() const { return kind == Kind::Const; }
  bool is_var() const { return kind == Kind::Var; }
  bool is_app(Op o) const { return kind == Kind::App && op == o; }
  bool is_ground() const { return fvars.empty(); }
  bool is_true() const { return kind == Kind::BoolLit && num == 1; }
  bool is_false() const { return kind == Kind::BoolLit && num == 0; }
};

// Structural total order.  Stable across runs (independent of interning
// order); used to canonicalize literal order in cubes/clauses and to break
// ties deterministically everywhere else.
inline int compare(TermRef a, TermRef b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case Kind::Num:
    case Kind::BoolLit:
      return a->num < b->num ? -1 : a->num > b->num ? 1 : 0;
    case Kind::Const: {
      if (a->cls != b->cls) return a->cls < b->cls ? -1 : 1;
      if (a->cls == ConstClass::Skolem)
        return a->index < b->index ? -1 : a->index > b->index ? 1 : 0;
      int c = a->name.compare(b->name);
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case Kind::Var:
      return a->index < b->index ? -1 : a->index > b->index ? 1 : 0;
    case Kind::App: {
      if (a->op != b->op) return a->op < b->op ? -1 : 1;
      if (a->args.size() != b->args.size())
        return a->args.size() < b->args.size() ? -1 : 1;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (int c = compare(a->args[i], b->args[i])) return c;
      return 0;
    }
  }
  return 0;
}

struct TermLess {
  bool operator()(TermRef a, TermRef b) const { return compare(a, b) < 0; }
};

namespace detail {
struct NodeKey {
  Kind kind;
  Sort sort;
  Op op;
  int64_t num;
  std::string name;
  ConstClass cls;
  uint32_t index;
  std::vector<TermRef> args;
  bool operator==(const NodeKey &o) const {
    return kind == o.kind && sort == o.sort && op == o.op && num == o.num &&
           name == o.name && cls == o.cls && index == o.index && args == o.args;
  }
};
struct NodeKeyHash {
  size_t operator()(const NodeKey &k) const {
    size_t h = std::hash<int>()(int(k.kind) | (int(k.sort) << 4) | (int(k.op) << 8));
    h = h * 1000003u ^ std::hash<int64_t>()(k.num);
    h = h * 1000003u ^ std::hash<std::string>()(k.name);
    h = h * 1000003u ^ std::hash<uint32_t>()(k.index ^ (uint32_t(k.cls) << 28));
    for (TermRef a : k.args) h = h * 1000003u ^ std::hash<const void *>()(a);
    return h;
  }
};
}  // namespace detail

class SortError : public std::runtime_error {
 public:
  explicit SortError(const std::string &m) : std::runtime_error(m) {}
};

// Single-writer/multi-reader interning table.  Nodes live in a deque so
// TermRef pointers stay stable; construction is serialized by a mutex and
// read-only sharing of built terms is safe across threads.
class TermManager {
 public:
  static TermManager &get() {
    static TermManager mgr;
    return mgr;
  }

  TermRef intern(detail::NodeKey key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    nodes_.emplace_back();
    TermNode &n = nodes_.back();
    n.kind = key.kind;
    n.sort = key.sort;
    n.op = key.op;
    n.num = key.num;
    n.name = key.name;
    n.cls = key.cls;
    n.index = key.index;
    n.args = key.args;
    n.id = next_id_++;
    if (n.kind == Kind::Var) {
      n.fvars.push_back(n.index);
    } else if (n.kind == Kind::Const) {
      n.uconsts.push_back(&n);
    } else if (n.kind == Kind::App) {
      for (TermRef a : n.args) {
        merge_sorted(n.fvars, a->fvars);
        merge_consts(n.uconsts, a->uconsts);
      }
    }
    table_.emplace(std::move(key), &n);
    return &n;
  }

 private:
  TermManager() = default;
  static void merge_sorted(std::vector<uint32_t> &dst, const std::vector<uint32_t> &src) {
    for (uint32_t v : src) {
      auto it = std::lower_bound(dst.begin(), dst.end(), v);
      if (it == dst.end() || *it != v) dst.insert(it, v);
    }
  }
  static void merge_consts(std::vector<TermRef> &dst, const std::vector<TermRef> &src) {
    for (TermRef c : src) {
      auto it = std::lower_bound(dst.begin(), dst.end(), c, TermLess{});
      if (it == dst.end() || *it != c) dst.insert(it, c);
    }
  }
  std::mutex mu_;
  std::deque<TermNode> nodes_;
  std::unordered_map<detail::NodeKey, TermRef, detail::NodeKeyHash> table_;
  uint64_t next_id_ = 0;
};

inline TermRef intern_node(Kind kind, Sort sort, Op op, int64_t num,
                           std::string name, ConstClass cls, uint32_t index,
                           std::vector<TermRef> args) {
  detail::NodeKey k{kind, sort, op, num, std::move(name), cls, index, std::move(args)};
  return TermManager::get().intern(std::move(k));
}

// ---------------------------------------------------------------- builders

inline TermRef mk_num(int64_t v) {
  return intern_node(Kind::Num, Sort::Int, Op::None, v, "", ConstClass::State, 0, {});
}
inline TermRef mk_bool(bool b) {
  return intern_node(Kind::BoolLit, Sort::Bool, Op::None, b ? 1 : 0, "", ConstClass::State, 0, {});
}
inline TermRef mk_true() { return mk_bool(true); }
inline TermRef mk_false() { return mk_bool(false); }

inline TermRef mk_const(const std::string &name, Sort sort,
                        ConstClass cls = ConstClass::State) {
  return intern_node(Kind::Const, sort, Op::None, 0, name, cls, 0, {});
}

inline TermRef mk_skolem(uint32_t i) {
  return intern_node(Kind::Const, Sort::Int, Op::None, 0, "sk!" + std::to_string(i),
                     ConstClass::Skolem, i, {});
}

inline TermRef mk_var(uint32_t i) {
  return intern_node(Kind::Var, Sort::Int, Op::None, 0, "", ConstClass::State, i, {});
}

inline void require(bool cond, const std::string &msg) {
  if (!cond) throw SortError(msg);
}

inline TermRef mk_app_raw(Op op, Sort sort, std::vector<TermRef> args) {
  return intern_node(Kind::App, sort, op, 0, "", ConstClass::State, 0, std::move(args));
}

// Linear-combination canonicalizer: every Int term built through mk_add /
// mk_sub / mk_mul / mk_neg is kept in the form c0 + c1*b1 + ... + cn*bn with
// base terms sorted and coefficients folded, so arithmetic-equal sums are
// pointer-equal.
inline void linearize(TermRef t, int64_t scale, std::map<TermRef, int64_t, TermLess> &coeffs,
                      int64_t &constant) {
  if (t->is_num()) {
    constant += scale * t->num;
    return;
  }
  if (t->is_app(Op::Add)) {
    for (TermRef a : t->args) linearize(a, scale, coeffs, constant);
    return;
  }
  if (t->is_app(Op::Sub)) {
    linearize(t->args[0], scale, coeffs, constant);
    linearize(t->args[1], -scale, coeffs, constant);
    return;
  }
  if (t->is_app(Op::Mul)) {
    linearize(t->args[1], scale * t->args[0]->num, coeffs, constant);
    return;
  }
  coeffs[t] += scale;
}

inline TermRef mk_linear(const std::map<TermRef, int64_t, TermLess> &coeffs, int64_t constant) {
  std::vector<TermRef> parts;
  for (auto &[base, c] : coeffs) {
    if (c == 0) continue;
    if (c == 1)
      parts.push_back(base);
    else
      parts.push_back(mk_app_raw(Op::Mul, Sort::Int, {mk_num(c), base}));
  }
  if (constant != 0 || parts.empty()) parts.insert(parts.begin(), mk_num(constant));
  if (parts.size() == 1) return parts[0];
  return mk_app_raw(Op::Add, Sort::Int, std::move(parts));
}

inline TermRef mk_int_sum(std::initializer_list<std::pair<TermRef, int64_t>> items, int64_t k) {
  std::map<TermRef, int64_t, TermLess> coeffs;
  int64_t constant = k;
  for (auto &[t, c] : items) {
    require(t->sort == Sort::Int, "arithmetic over non-Int term");
    linearize(t, c, coeffs, constant);
  }
  return mk_linear(coeffs, constant);
}

inline TermRef mk_add(TermRef a, TermRef b) { return mk_int_sum({{a, 1}, {b, 1}}, 0); }
inline TermRef mk_sub(TermRef a, TermRef b) { return mk_int_sum({{a, 1}, {b, -1}}, 0); }
inline TermRef mk_neg(TermRef a) { return mk_int_sum({{a, -1}}, 0); }
inline TermRef mk_mul(int64_t c, TermRef a) { return mk_int_sum({{a, c}}, 0); }

inline TermRef mk_add(std::vector<TermRef> args) {
  std::map<TermRef, int64_t, TermLess> coeffs;
  int64_t constant = 0;
  for (TermRef a : args) {
    require(a->sort == Sort::Int, "arithmetic over non-Int term");
    linearize(a, 1, coeffs, constant);
  }
  return mk_linear(coeffs, constant);
}

inline TermRef mk_select(TermRef a, TermRef i) {
  require(a->sort == Sort::Array && i->sort == Sort::Int, "select expects (Array, Int)");
  // read-over-write folds only on syntactic index (dis)equality
  if (a->is_app(Op::Store)) {
    TermRef j = a->args[1];
    if (j == i) return a->args[2];
    if (j->is_num() && i->is_num() && j->num != i->num) return mk_select(a->args[0], i);
  }
  return mk_app_raw(Op::Select, Sort::Int, {a, i});
}

inline TermRef mk_store(TermRef a, TermRef i, TermRef v) {
  require(a->sort == Sort::Array && i->sort == Sort::Int && v->sort == Sort::Int,
          "store expects (Array, Int, Int)");
  return mk_app_raw(Op::Store, Sort::Array, {a, i, v});
}

inline TermRef mk_lt(TermRef a, TermRef b) {
  require(a->sort == Sort::Int && b->sort == Sort::Int, "< expects Int");
  if (a->is_num() && b->is_num()) return mk_bool(a->num < b->num);
  return mk_app_raw(Op::Lt, Sort::Bool, {a, b});
}
inline TermRef mk_le(TermRef a, TermRef b) {
  require(a->sort == Sort::Int && b->sort == Sort::Int, "<= expects Int");
  if (a->is_num() && b->is_num()) return mk_bool(a->num <= b->num);
  return mk_app_raw(Op::Le, Sort::Bool, {a, b});
}

inline TermRef mk_eq(TermRef a, TermRef b) {
  require(a->sort == b->sort, "= expects matching sorts");
  if (a == b) return mk_true();
  if (a->is_num() && b->is_num()) return mk_bool(a->num == b->num);
  if (a->is_bool_lit() && b->is_bool_lit()) return mk_bool(a->num == b->num);
  if (compare(a, b) < 0) std::swap(a, b);
  return mk_app_raw(Op::Eq, Sort::Bool, {a, b});
}

inline TermRef mk_mod_eq(TermRef t, int64_t k, int64_t r) {
  require(t->sort == Sort::Int, "mod over non-Int term");
  require(k >= 2, "modulus must be >= 2");
  r = ((r % k) + k) % k;
  if (t->is_num()) return mk_bool(((t->num % k) + k) % k == r);
  return mk_app_raw(Op::ModEq, Sort::Bool, {t, mk_num(k), mk_num(r)});
}

inline TermRef mk_not(TermRef a) {
  require(a->sort == Sort::Bool, "not expects Bool");
  if (a->is_bool_lit()) return mk_bool(a->num == 0);
  if (a->is_app(Op::Not)) return a->args[0];
  if (a->is_app(Op::Lt)) return mk_le(a->args[1], a->args[0]);
  if (a->is_app(Op::Le)) return mk_lt(a->args[1], a->args[0]);
  return mk_app_raw(Op::Not, Sort::Bool, {a});
}

inline TermRef mk_and(std::vector<TermRef> args);
inline TermRef mk_or(std::vector<TermRef> args);

inline TermRef mk_and(std::vector<TermRef> args) {
  std::set<TermRef, TermLess> flat;
  for (TermRef a : args) {
    require(a->sort == Sort::Bool, "and expects Bool");
    if (a->is_true()) continue;
    if (a->is_false()) return mk_false();
    if (a->is_app(Op::And)) {
      for (TermRef c : a->args) flat.insert(c);
    } else {
      flat.insert(a);
    }
  }
  for (TermRef a : flat)
    if (flat.count(mk_not(a))) return mk_false();
  if (flat.empty()) return mk_true();
  if (flat.size() == 1) return *flat.begin();
  return mk_app_raw(Op::And, Sort::Bool, std::vector<TermRef>(flat.begin(), flat.end()));
}

inline TermRef mk_or(std::vector<TermRef> args) {
  std::set<TermRef, TermLess> flat;
  for (TermRef a : args) {
    require(a->sort == Sort::Bool, "or expects Bool");
    if (a->is_false()) continue;
    if (a->is_true()) return mk_true();
    if (a->is_app(Op::Or)) {
      for (TermRef c : a->args) flat.insert(c);
    } else {
      flat.insert(a);
    }
  }
  for (TermRef a : flat)
    if (flat.count(mk_not(a))) return mk_true();
  if (flat.empty()) return mk_false();
  if (flat.size() == 1) return *flat.begin();
  return mk_app_raw(Op::Or, Sort::Bool, std::vector<TermRef>(flat.begin(), flat.end()));
}

inline TermRef mk_and(TermRef a, TermRef b) { return mk_and(std::vector<TermRef>{a, b}); }
inline TermRef mk_or(TermRef a, TermRef b) { return mk_or(std::vector<TermRef>{a, b}); }

inline TermRef mk_implies(TermRef a, TermRef b) {
  require(a->sort == Sort::Bool && b->sort == Sort::Bool, "=> expects Bool");
  if (a->is_true()) return b;
  if (a->is_false()) return mk_true();
  if (b->is_true()) return mk_true();
  if (b->is_false()) return mk_not(a);
  return mk_app_raw(Op::Implies, Sort::Bool, {a, b});
}

inline TermRef mk_ite(TermRef c, TermRef a, TermRef b) {
  require(c->sort == Sort::Bool, "ite condition must be Bool");
  require(a->sort == b->sort, "ite branches must agree");
  if (c->is_true()) return a;
  if (c->is_false()) return b;
  if (a == b) return a;
  return mk_app_raw(Op::Ite, a->sort, {c, a, b});
}

inline TermRef mk_gt(TermRef a, TermRef b) { return mk_lt(b, a); }
inline TermRef mk_ge(TermRef a, TermRef b) { return mk_le(b, a); }

// ------------------------------------------------------------- inspection

inline std::set<uint32_t> free_vars(TermRef t) {
  return std::set<uint32_t>(t->fvars.begin(), t->fvars.end());
}

inline std::set<TermRef, TermLess> consts(TermRef t) {
  return std::set<TermRef, TermLess>(t->uconsts.begin(), t->uconsts.end());
}

inline bool mentions_const(TermRef t, TermRef c) {
  return std::binary_search(t->uconsts.begin(), t->uconsts.end(), c, TermLess{});
}

inline bool mentions_class(TermRef t, ConstClass cls) {
  for (TermRef c : t->uconsts)
    if (c->cls == cls) return true;
  return false;
}

// full bottom-up rebuild through the simplifying builders
inline TermRef normalize(TermRef t) {
  switch (t->kind) {
    case Kind::Num:
    case Kind::BoolLit:
    case Kind::Const:
    case Kind::Var:
      return t;
    case Kind::App: {
      std::vector<TermRef> as;
      as.reserve(t->args.size());
      for (TermRef a : t->args) as.push_back(normalize(a));
      switch (t->op) {
        case Op::Add: return mk_add(as);
        case Op::Sub: return mk_sub(as[0], as[1]);
        case Op::Mul: return mk_mul(as[0]->num, as[1]);
        case Op::Lt: return mk_lt(as[0], as[1]);
        case Op::Le: return mk_le(as[0], as[1]);
        case Op::Eq: return mk_eq(as[0], as[1]);
        case Op::Select: return mk_select(as[0], as[1]);
        case Op::Store: return mk_store(as[0], as[1], as[2]);
        case Op::And: return mk_and(as);
        case Op::Or: return mk_or(as);
        case Op::Not: return mk_not(as[0]);
        case Op::Implies: return mk_implies(as[0], as[1]);
        case Op::Ite: return mk_ite(as[0], as[1], as[2]);
        case Op::ModEq: return mk_mod_eq(as[0], as[1]->num, as[2]->num);
        case Op::None: break;
      }
      return t;
    }
  }
  return t;
}

}  // namespace quic3
