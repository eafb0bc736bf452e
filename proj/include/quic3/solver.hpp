#pragma once

// Quantifier-free satisfiability interface.  Every query in the engine goes
// through here; assertions are checked to be ground and quantifier-free
// before dispatch, and Sat models are re-verified by local evaluation so a
// misbehaving backend can only degrade to Unknown, never to a wrong answer.

#include <memory>
#include <string>
#include <vector>

#include "quic3/model.hpp"
#include "quic3/term.hpp"

namespace quic3 {

enum class SatResult { Sat, Unsat, Unknown };

struct Assertion {
  std::string label;
  TermRef term;
};

struct CheckResult {
  SatResult res = SatResult::Unknown;
  Model model;                     // valid when Sat
  std::vector<std::string> core;   // valid when Unsat
  std::string reason;              // set when Unknown

  bool sat() const { return res == SatResult::Sat; }
  bool unsat() const { return res == SatResult::Unsat; }
  bool unknown() const { return res == SatResult::Unknown; }
};

class SolverSession {
 public:
  virtual ~SolverSession() = default;
  virtual void push() = 0;
  virtual void pop() = 0;
  virtual void add(const Assertion &a) = 0;
  virtual CheckResult check() = 0;

  void add(const std::string &label, TermRef t) { add(Assertion{label, t}); }
};

struct DomainBound {
  int64_t int_lo = -4, int_hi = 4;   // range of every int constant
  int64_t idx_lo = 0, idx_hi = 3;    // array index domain
};

struct BackendConfig {
  enum class Kind { External, Enumeration } kind = Kind::External;
  std::string solver_path;                  // External: binary path
  std::vector<std::string> solver_args;     // extra argv entries
  int64_t query_timeout_ms = 10000;
  DomainBound bound;                        // Enumeration
};

class SolverFactory {
 public:
  explicit SolverFactory(BackendConfig cfg) : cfg_(std::move(cfg)) {}
  std::unique_ptr<SolverSession> make() const;
  const BackendConfig &config() const { return cfg_; }

 private:
  BackendConfig cfg_;
};

inline void check_engine_query_shape(TermRef t) {
  // groundness doubles as quantifier-freedom: the term language has no
  // binders, so a ground term is a quantifier-free ground formula
  if (!t->is_ground())
    throw std::logic_error("solver query is not ground: " + to_smt2(t));
  if (t->sort != Sort::Bool)
    throw std::logic_error("solver query is not a formula");
}

// Divisibility atoms (t mod k = r) expand to linear form for process
// backends: one fresh quotient/remainder pair per distinct (t, k), defined by
// t = k*q + s, 0 <= s < k; the atom becomes s = r.  The definition is
// polarity-independent.
inline TermRef expand_mod_atoms(TermRef t, std::vector<TermRef> &defs, int &counter) {
  if (t->kind != Kind::App) return t;
  if (t->is_app(Op::ModEq)) {
    TermRef body = expand_mod_atoms(t->args[0], defs, counter);
    int64_t k = t->args[1]->num;
    int64_t r = t->args[2]->num;
    TermRef q = mk_const("mod!q" + std::to_string(counter), Sort::Int);
    TermRef s = mk_const("mod!s" + std::to_string(counter), Sort::Int);
    ++counter;
    defs.push_back(mk_eq(body, mk_add(mk_mul(k, q), s)));
    defs.push_back(mk_le(mk_num(0), s));
    defs.push_back(mk_lt(s, mk_num(k)));
    return mk_eq(s, mk_num(r));
  }
  std::vector<TermRef> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (TermRef a : t->args) {
    TermRef r = expand_mod_atoms(a, defs, counter);
    changed |= (r != a);
    args.push_back(r);
  }
  if (!changed) return t;
  return intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, std::move(args));
}

// one-shot convenience
inline CheckResult check_sat(const SolverFactory &f, const std::vector<Assertion> &as) {
  auto s = f.make();
  for (const Assertion &a : as) s->add(a);
  return s->check();
}

inline bool verify_model(const Model &m, const std::vector<Assertion> &as, std::string *why) {
  for (const Assertion &a : as) {
    try {
      if (!eval_bool(m, a.term)) {
        if (why) *why = "model does not satisfy '" + a.label + "'";
        return false;
      }
    } catch (const EvalError &e) {
      if (why) *why = std::string("model evaluation failed: ") + e.what();
      return false;
    }
  }
  return true;
}

}  // namespace quic3
