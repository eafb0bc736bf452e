#pragma once

// Ground QF LIA+arrays decision procedure behind the bundled SMT-LIB2 solver:
//   1. definitional lifting of term-level ite, divisibility expansion,
//      boolean-equality rewriting;
//   2. eager array reduction: one int variable per (array term, index term)
//      cell, read-over-write and congruence constraints, equality proxies
//      with extensionality witnesses;
//   3. Tseitin CNF over the remaining atoms, CDCL enumeration of boolean
//      models, Omega-test check of the implied arithmetic conjunction,
//      conflict-driven blocking clauses.
// Every Sat model is re-verified against the original assertions by eval.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quic3/logic.hpp"
#include "quic3/model.hpp"
#include "quic3/smt/cdcl.hpp"
#include "quic3/smt/lia.hpp"
#include "quic3/solver.hpp"

namespace quic3::smt {

class GroundSolver {
 public:
  enum class Res { Sat, Unsat, Unknown };

  struct Outcome {
    Res res = Res::Unknown;
    Model model;
    std::string reason;
  };

  Outcome solve(const std::vector<Assertion> &input) {
    try {
      return solve_inner(input);
    } catch (const OmegaBudget &) {
      return {Res::Unknown, {}, "arithmetic budget exceeded"};
    } catch (const std::exception &e) {
      return {Res::Unknown, {}, std::string("internal error: ") + e.what()};
    }
  }

 private:
  // ---- reduction state
  std::vector<TermRef> side_;                       // definitional constraints
  std::map<TermRef, TermRef, TermLess> ite_defs_;   // ite term -> fresh const
  int fresh_ = 0;

  TermRef fresh_int(const std::string &stem) {
    return mk_const(stem + std::to_string(fresh_++), Sort::Int);
  }

  // lift non-Bool ite into fresh constants, rewrite Bool = into iff structure
  TermRef lift(TermRef t) {
    if (t->kind != Kind::App) return t;
    std::vector<TermRef> args;
    args.reserve(t->args.size());
    for (TermRef a : t->args) args.push_back(lift(a));
    if (t->op == Op::Ite && t->sort != Sort::Bool) {
      TermRef node = intern_node(Kind::App, t->sort, Op::Ite, 0, "", ConstClass::State, 0, args);
      auto it = ite_defs_.find(node);
      if (it != ite_defs_.end()) return it->second;
      TermRef k = t->sort == Sort::Int
                      ? fresh_int("ite!")
                      : mk_const("ite!" + std::to_string(fresh_++), Sort::Array);
      ite_defs_[node] = k;
      side_.push_back(mk_implies(args[0], mk_eq(k, args[1])));
      side_.push_back(mk_implies(mk_not(args[0]), mk_eq(k, args[2])));
      return k;
    }
    if (t->op == Op::Eq && args[0]->sort == Sort::Bool) {
      TermRef a = args[0], b = args[1];
      return mk_or(mk_and(a, b), mk_and(mk_not(a), mk_not(b)));
    }
    return intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, std::move(args));
  }

  // ---- array reduction state
  std::map<TermRef, int, TermLess> array_ids_;       // array term -> id
  std::vector<TermRef> array_terms_;
  std::map<TermRef, int, TermLess> index_ids_;       // reduced index term -> id
  std::vector<TermRef> index_terms_;
  std::map<std::pair<int, int>, TermRef> cells_;     // (array id, index id) -> int const
  struct EqProxy {
    TermRef lhs, rhs;   // reduced array terms
    TermRef flag;       // bool const
    TermRef witness;    // int const (extensionality index)
  };
  std::vector<EqProxy> eq_proxies_;

  int array_id(TermRef t) {
    auto it = array_ids_.find(t);
    if (it != array_ids_.end()) return it->second;
    int id = int(array_terms_.size());
    array_ids_[t] = id;
    array_terms_.push_back(t);
    return id;
  }
  int index_id(TermRef t) {
    auto it = index_ids_.find(t);
    if (it != index_ids_.end()) return it->second;
    int id = int(index_terms_.size());
    index_ids_[t] = id;
    index_terms_.push_back(t);
    return id;
  }
  TermRef cell(TermRef arr, TermRef idx) {
    auto key = std::make_pair(array_id(arr), index_id(idx));
    auto it = cells_.find(key);
    if (it != cells_.end()) return it->second;
    TermRef c = mk_const("cell!" + std::to_string(key.first) + "!" + std::to_string(key.second),
                         Sort::Int);
    cells_[key] = c;
    return c;
  }

  // replace select by cell constants; register array terms and indices
  TermRef reduce_arrays(TermRef t) {
    if (t->kind != Kind::App) {
      if (t->is_const() && t->sort == Sort::Array) array_id(t);
      return t;
    }
    std::vector<TermRef> args;
    args.reserve(t->args.size());
    for (TermRef a : t->args) args.push_back(reduce_arrays(a));
    if (t->op == Op::Select) {
      index_id(args[1]);
      return cell(args[0], args[1]);
    }
    if (t->op == Op::Store) {
      TermRef node =
          intern_node(Kind::App, Sort::Array, Op::Store, 0, "", ConstClass::State, 0, args);
      array_id(node);
      index_id(args[1]);
      return node;
    }
    if (t->op == Op::Eq && args[0]->sort == Sort::Array) {
      TermRef l = args[0], r = args[1];
      for (auto &p : eq_proxies_)
        if (p.lhs == l && p.rhs == r) return p.flag;
      EqProxy p;
      p.lhs = l;
      p.rhs = r;
      p.flag = mk_const("aeq!" + std::to_string(eq_proxies_.size()), Sort::Bool);
      p.witness = fresh_int("wit!");
      index_id(p.witness);
      eq_proxies_.push_back(p);
      return p.flag;
    }
    return intern_node(Kind::App, t->sort, t->op, 0, "", ConstClass::State, 0, std::move(args));
  }

  // ROW + congruence + extensionality constraints over the collected terms
  std::vector<TermRef> array_axioms() {
    std::vector<TermRef> out;
    // stores: cell(s, i) follows base or written value
    for (TermRef s : array_terms_) {
      if (!s->is_app(Op::Store)) continue;
      TermRef base = s->args[0], j = s->args[1], v = s->args[2];
      for (TermRef i : index_terms_) {
        TermRef same = mk_eq(i, j);
        out.push_back(mk_implies(same, mk_eq(cell(s, i), v)));
        out.push_back(mk_implies(mk_not(same), mk_eq(cell(s, i), cell(base, i))));
      }
    }
    // congruence for array constants
    for (TermRef a : array_terms_) {
      if (!a->is_const()) continue;
      for (size_t i = 0; i < index_terms_.size(); ++i)
        for (size_t j = i + 1; j < index_terms_.size(); ++j) {
          TermRef ti = index_terms_[i], tj = index_terms_[j];
          out.push_back(mk_implies(mk_eq(ti, tj), mk_eq(cell(a, ti), cell(a, tj))));
        }
    }
    // equality proxies
    for (auto &p : eq_proxies_) {
      for (TermRef i : index_terms_)
        out.push_back(mk_implies(p.flag, mk_eq(cell(p.lhs, i), cell(p.rhs, i))));
      out.push_back(
          mk_implies(mk_not(p.flag), mk_not(mk_eq(cell(p.lhs, p.witness), cell(p.rhs, p.witness)))));
    }
    return out;
  }

  // ---- atoms and CNF
  std::map<TermRef, int, TermLess> atom_var_;  // atom term -> cdcl var
  std::vector<TermRef> atoms_;                 // var-1 -> atom (arith or bool const)
  Cdcl sat_;

  int atom(TermRef t) {
    auto it = atom_var_.find(t);
    if (it != atom_var_.end()) return it->second;
    int v = sat_.new_var();
    atom_var_[t] = v;
    atoms_.push_back(t);
    return v;
  }

  int tseitin(TermRef t) {
    switch (t->kind) {
      case Kind::BoolLit: {
        int v = atom(t);
        sat_.add_clause({t->num ? v : -v});
        return v;
      }
      case Kind::Const:
        return atom(t);
      case Kind::App:
        break;
      default:
        throw std::logic_error("tseitin: unexpected term");
    }
    switch (t->op) {
      case Op::Not:
        return -tseitin(t->args[0]);
      case Op::And: {
        int v = atom(t);
        std::vector<int> all{v};
        for (TermRef a : t->args) {
          int la = tseitin(a);
          sat_.add_clause({-v, la});
          all.push_back(-la);
        }
        sat_.add_clause(all);
        return v;
      }
      case Op::Or: {
        int v = atom(t);
        std::vector<int> all{-v};
        for (TermRef a : t->args) {
          int la = tseitin(a);
          sat_.add_clause({v, -la});
          all.push_back(la);
        }
        sat_.add_clause(all);
        return v;
      }
      case Op::Implies:
        return tseitin(mk_or(mk_not(t->args[0]), t->args[1]));
      case Op::Ite: {  // Bool ite
        int v = atom(t);
        int c = tseitin(t->args[0]);
        int a = tseitin(t->args[1]);
        int b = tseitin(t->args[2]);
        sat_.add_clause({-v, -c, a});
        sat_.add_clause({-v, c, b});
        sat_.add_clause({v, -c, -a});
        sat_.add_clause({v, c, -b});
        return v;
      }
      case Op::Lt:
      case Op::Le:
      case Op::Eq:
        return atom(t);
      default:
        throw std::logic_error("tseitin: unsupported operator");
    }
  }

  // ---- linear atom translation
  std::map<TermRef, int, TermLess> int_var_;  // int const -> lia var id
  std::vector<TermRef> int_consts_;

  int int_var(TermRef c) {
    auto it = int_var_.find(c);
    if (it != int_var_.end()) return it->second;
    int id = int(int_consts_.size());
    int_var_[c] = id;
    int_consts_.push_back(c);
    return id;
  }

  void linear_of(TermRef t, Int scale, std::map<int, Int> &coef, Int &c) {
    switch (t->kind) {
      case Kind::Num:
        c += scale * t->num;
        return;
      case Kind::Const:
        coef[int_var(t)] += scale;
        return;
      case Kind::App:
        switch (t->op) {
          case Op::Add:
            for (TermRef a : t->args) linear_of(a, scale, coef, c);
            return;
          case Op::Sub:
            linear_of(t->args[0], scale, coef, c);
            linear_of(t->args[1], -scale, coef, c);
            return;
          case Op::Mul:
            linear_of(t->args[1], scale * t->args[0]->num, coef, c);
            return;
          default:
            break;
        }
        [[fallthrough]];
      default:
        throw std::logic_error("linear_of: non-linear term " + to_smt2(t));
    }
  }

  // atom under polarity -> constraints (appended)
  void constraint_of(TermRef a, bool pos, std::vector<LinCon> &cons, std::vector<LinCon> &diseqs) {
    LinCon con;
    if (a->is_app(Op::Lt) || a->is_app(Op::Le)) {
      TermRef lhs = a->args[0], rhs = a->args[1];
      if (!pos) std::swap(lhs, rhs);
      bool strict = pos ? a->is_app(Op::Lt) : a->is_app(Op::Le);
      // lhs (<|<=) rhs  ==>  lhs - rhs (+1 if strict) <= 0
      linear_of(lhs, 1, con.coef, con.c);
      linear_of(rhs, -1, con.coef, con.c);
      if (strict) con.c += 1;
      con.eq = false;
      cons.push_back(std::move(con));
      return;
    }
    if (a->is_app(Op::Eq)) {
      linear_of(a->args[0], 1, con.coef, con.c);
      linear_of(a->args[1], -1, con.coef, con.c);
      con.eq = true;
      if (pos)
        cons.push_back(std::move(con));
      else
        diseqs.push_back(std::move(con));
      return;
    }
    throw std::logic_error("constraint_of: unexpected atom");
  }

  Outcome solve_inner(const std::vector<Assertion> &input) {
    // register every constant of the input so the model stays total even for
    // constants that simplification erases
    for (const Assertion &a : input)
      for (TermRef c : a.term->uconsts) {
        if (c->sort == Sort::Int) int_var(c);
        if (c->sort == Sort::Bool) atom(c);
        if (c->sort == Sort::Array) array_id(c);
      }
    // reduction
    std::vector<TermRef> reduced;
    for (const Assertion &a : input) {
      TermRef t = lift(normalize(a.term));
      std::vector<TermRef> defs;
      int mc = fresh_;
      t = expand_mod_atoms(t, defs, mc);
      fresh_ = mc;
      for (TermRef d : defs) side_.push_back(d);
      reduced.push_back(t);
    }
    // lift may add side constraints while processing side constraints' terms:
    // side_ entries are already lifted except mod defs (pure arithmetic)
    std::vector<TermRef> all;
    for (TermRef t : reduced) all.push_back(reduce_arrays(t));
    for (size_t i = 0; i < side_.size(); ++i) all.push_back(reduce_arrays(side_[i]));
    for (TermRef ax : array_axioms()) all.push_back(ax);

    for (TermRef t : all) {
      int root = tseitin(normalize(t));
      sat_.add_clause({root});
    }

    while (true) {
      if (sat_.solve() == Cdcl::Res::Unsat) return {Res::Unsat, {}, ""};

      // collect theory literals from the boolean model
      std::vector<std::pair<TermRef, bool>> tlits;
      for (size_t i = 0; i < atoms_.size(); ++i) {
        TermRef a = atoms_[i];
        if (a->kind != Kind::App) continue;
        if (!(a->is_app(Op::Lt) || a->is_app(Op::Le) || a->is_app(Op::Eq))) continue;
        tlits.emplace_back(a, sat_.value(int(i) + 1));
      }
      auto feasible = [&](const std::vector<std::pair<TermRef, bool>> &lits)
          -> std::optional<LiaModel> {
        std::vector<LinCon> cons, diseqs;
        for (auto &[a, pos] : lits) constraint_of(a, pos, cons, diseqs);
        int next = int(int_consts_.size());  // after translation: ids are dense
        return lia_solve(cons, diseqs, next);
      };

      if (auto lm = feasible(tlits)) {
        Model m = build_model(*lm);
        std::string why;
        if (!verify_model(m, input, &why))
          return {Res::Unknown, {}, "model verification failed: " + why};
        return {Res::Sat, m, ""};
      }

      // shrink the conflicting set greedily, then block it
      std::vector<std::pair<TermRef, bool>> core = tlits;
      if (core.size() <= 48) {
        for (size_t i = 0; i < core.size();) {
          auto trial = core;
          trial.erase(trial.begin() + long(i));
          if (!feasible(trial))
            core = std::move(trial);
          else
            ++i;
        }
      }
      std::vector<int> block;
      block.reserve(core.size());
      for (auto &[a, pos] : core) {
        int v = atom_var_.at(a);
        block.push_back(pos ? -v : v);
      }
      sat_.add_clause(std::move(block));
    }
  }

  Model build_model(const LiaModel &lm) {
    Model m;
    auto int_value = [&](TermRef c) -> int64_t {
      auto it = int_var_.find(c);
      if (it == int_var_.end()) return 0;
      auto jt = lm.find(it->second);
      if (jt == lm.end()) return 0;
      return int64_t(jt->second);
    };
    // int constants (original and auxiliary)
    for (TermRef c : int_consts_) m.set(c, int_value(c));
    // bool constants
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i]->is_const() && atoms_[i]->sort == Sort::Bool)
        m.set(atoms_[i], sat_.value(int(i) + 1));
    // arrays from cell values; index terms are pure-int after reduction
    for (TermRef a : array_terms_) {
      if (!a->is_const()) continue;
      ArrayVal av;
      av.def = 0;
      for (TermRef i : index_terms_) {
        auto key = std::make_pair(array_ids_.at(a), index_ids_.at(i));
        auto ct = cells_.find(key);
        if (ct == cells_.end()) continue;
        int64_t idx = eval_int(m, i);
        av.exc[idx] = int_value(ct->second);
      }
      // normalize: drop default-valued entries
      ArrayVal norm;
      norm.def = av.def;
      for (auto &[i, v] : av.exc)
        if (v != norm.def) norm.exc[i] = v;
      m.set(a, norm);
    }
    return m;
  }
};

}  // namespace quic3::smt
