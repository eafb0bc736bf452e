#pragma once

// Exhaustive-enumeration backend over a bounded domain.  Exists for tests and
// oracles only: Sat answers are real models, Unsat means "no model within the
// bound".  Deterministic: constants are enumerated in name order, values
// ascending, so the first model found is a function of the assertion set.

#include <vector>

#include "quic3/solver.hpp"

namespace quic3 {

class EnumSession final : public SolverSession {
 public:
  explicit EnumSession(DomainBound b) : bound_(b) {}

  void push() override { marks_.push_back(asserts_.size()); }
  void pop() override {
    asserts_.resize(marks_.back());
    marks_.pop_back();
  }
  void add(const Assertion &a) override {
    check_engine_query_shape(a.term);
    asserts_.push_back(a);
  }

  CheckResult check() override {
    std::set<TermRef, TermLess> cs;
    for (auto &a : asserts_)
      for (TermRef c : a.term->uconsts) cs.insert(c);
    std::vector<TermRef> order(cs.begin(), cs.end());
    std::sort(order.begin(), order.end(), [](TermRef a, TermRef b) {
      return const_display_name(a) < const_display_name(b);
    });
    Model m;
    CheckResult out;
    if (enumerate(order, 0, m, out)) return out;
    out.res = SatResult::Unsat;
    for (auto &a : asserts_) out.core.push_back(a.label);
    return out;
  }

 private:
  bool enumerate(const std::vector<TermRef> &order, size_t i, Model &m, CheckResult &out) {
    if (i == order.size()) {
      for (auto &a : asserts_)
        if (!eval_bool(m, a.term)) return false;
      out.res = SatResult::Sat;
      out.model = m;
      return true;
    }
    TermRef c = order[i];
    switch (c->sort) {
      case Sort::Bool:
        for (int v = 0; v <= 1; ++v) {
          m.set(c, v != 0);
          if (enumerate(order, i + 1, m, out)) return true;
        }
        m.bools.erase(const_display_name(c));
        return false;
      case Sort::Int:
        for (int64_t v = bound_.int_lo; v <= bound_.int_hi; ++v) {
          m.set(c, v);
          if (enumerate(order, i + 1, m, out)) return true;
        }
        m.ints.erase(const_display_name(c));
        return false;
      case Sort::Array: {
        std::vector<int64_t> cells(size_t(bound_.idx_hi - bound_.idx_lo + 1), bound_.int_lo);
        return enum_array(order, i, m, out, c, cells, 0, /*with_default=*/bound_.int_lo);
      }
    }
    return false;
  }

  bool enum_array(const std::vector<TermRef> &order, size_t i, Model &m, CheckResult &out,
                  TermRef c, std::vector<int64_t> &cells, size_t ci, int64_t def) {
    if (ci == cells.size()) {
      for (int64_t d = def; d <= bound_.int_hi; ++d) {
        ArrayVal av;
        av.def = d;
        for (size_t k = 0; k < cells.size(); ++k) {
          int64_t idx = bound_.idx_lo + int64_t(k);
          if (cells[k] != d) av.exc[idx] = cells[k];
        }
        m.set(c, av);
        if (enumerate(order, i + 1, m, out)) return true;
      }
      m.arrays.erase(const_display_name(c));
      return false;
    }
    for (int64_t v = bound_.int_lo; v <= bound_.int_hi; ++v) {
      cells[ci] = v;
      if (enum_array(order, i, m, out, c, cells, ci + 1, def)) return true;
    }
    return false;
  }

  DomainBound bound_;
  std::vector<Assertion> asserts_;
  std::vector<size_t> marks_;
};

}  // namespace quic3
