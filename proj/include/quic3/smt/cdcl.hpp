#pragma once

// Compact CDCL SAT solver: two-watched literals, first-UIP learning,
// non-chronological backtracking.  Variables are 1-based; literals are signed
// ints DIMACS-style.  solve() restarts from a clean trail, so clauses may be
// added between calls (theory blocking clauses).

#include <cstdlib>
#include <vector>

namespace quic3::smt {

class Cdcl {
 public:
  enum class Res { Sat, Unsat };

  int new_var() {
    int v = ++nvars_;
    assign_.resize(nvars_ + 1, 0);
    reason_.resize(nvars_ + 1, -1);
    level_.resize(nvars_ + 1, 0);
    seen_.resize(nvars_ + 1, 0);
    watches_.resize(2 * nvars_ + 2);
    return v;
  }

  // false on immediate top-level conflict (empty clause)
  bool add_clause(std::vector<int> lits) {
    // dedupe and drop tautologies
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) return true;
    if (lits.empty()) {
      ok_ = false;
      return false;
    }
    clauses_.push_back(std::move(lits));
    int ci = int(clauses_.size()) - 1;
    auto &cl = clauses_[ci];
    if (cl.size() == 1) {
      units_.push_back(cl[0]);
    } else {
      watch(cl[0], ci);
      watch(cl[1], ci);
    }
    return true;
  }

  Res solve() {
    if (!ok_) return Res::Unsat;
    // reset trail
    for (int v = 1; v <= nvars_; ++v) assign_[v] = 0;
    trail_.clear();
    trail_lim_.clear();
    qhead_ = 0;
    for (int u : units_)
      if (!enqueue(u, -1)) {
        ok_ = false;
        return Res::Unsat;
      }
    while (true) {
      int confl = propagate();
      if (confl != -1) {
        if (level() == 0) {
          ok_ = false;
          return Res::Unsat;
        }
        std::vector<int> learnt;
        int back_level = analyze(confl, learnt);
        backtrack(back_level);
        if (learnt.size() == 1) {
          units_.push_back(learnt[0]);
          enqueue(learnt[0], -1);
        } else {
          clauses_.push_back(learnt);
          int ci = int(clauses_.size()) - 1;
          watch(clauses_[ci][0], ci);
          watch(clauses_[ci][1], ci);
          enqueue(clauses_[ci][0], ci);
        }
        continue;
      }
      int v = pick();
      if (v == 0) return Res::Sat;
      trail_lim_.push_back(int(trail_.size()));
      enqueue(-v, -1);  // default phase: false
    }
  }

  bool value(int var) const { return assign_[var] > 0; }
  int num_vars() const { return nvars_; }

 private:
  static int lit_index(int lit) { return lit > 0 ? 2 * lit : -2 * lit + 1; }

  void watch(int lit, int ci) { watches_[lit_index(lit)].push_back(ci); }

  int level() const { return int(trail_lim_.size()); }

  int lit_value(int lit) const {  // +1 true, -1 false, 0 unassigned
    int v = assign_[std::abs(lit)];
    if (v == 0) return 0;
    return (lit > 0) == (v > 0) ? 1 : -1;
  }

  bool enqueue(int lit, int reason) {
    int val = lit_value(lit);
    if (val == 1) return true;
    if (val == -1) return false;
    int v = std::abs(lit);
    assign_[v] = lit > 0 ? 1 : -1;
    reason_[v] = reason;
    level_[v] = level();
    trail_.push_back(lit);
    return true;
  }

  // returns conflicting clause index or -1
  int propagate() {
    while (qhead_ < trail_.size()) {
      int lit = trail_[qhead_++];
      // clauses watching ~lit need attention
      std::vector<int> &ws = watches_[lit_index(-lit)];
      std::vector<int> keep;
      keep.reserve(ws.size());
      for (size_t wi = 0; wi < ws.size(); ++wi) {
        int ci = ws[wi];
        auto &cl = clauses_[ci];
        // ensure watched literal is at position 1
        if (cl[0] == -lit) std::swap(cl[0], cl[1]);
        if (lit_value(cl[0]) == 1) {
          keep.push_back(ci);
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < cl.size(); ++k) {
          if (lit_value(cl[k]) != -1) {
            std::swap(cl[1], cl[k]);
            watch(cl[1], ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        keep.push_back(ci);
        if (!enqueue(cl[0], ci)) {
          // conflict: restore remaining watches and report
          for (size_t k = wi + 1; k < ws.size(); ++k) keep.push_back(ws[k]);
          ws = std::move(keep);
          return ci;
        }
      }
      ws = std::move(keep);
    }
    return -1;
  }

  int analyze(int confl, std::vector<int> &learnt) {
    learnt.clear();
    learnt.push_back(0);  // slot for the asserting literal
    int counter = 0;
    int lit = 0;
    size_t idx = trail_.size();
    int ci = confl;
    do {
      auto &cl = clauses_[ci];
      for (int q : cl) {
        if (q == lit) continue;
        int v = std::abs(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          if (level_[v] >= level())
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      // next literal on trail to resolve
      while (!seen_[std::abs(trail_[--idx])]) {
      }
      lit = -trail_[idx];
      seen_[std::abs(lit)] = 0;
      --counter;
      ci = reason_[std::abs(lit)];
    } while (counter > 0);
    learnt[0] = lit;
    for (size_t i = 1; i < learnt.size(); ++i) seen_[std::abs(learnt[i])] = 0;
    // backjump level: highest level among learnt[1..]
    int back = 0;
    size_t at = 1;
    for (size_t i = 1; i < learnt.size(); ++i)
      if (level_[std::abs(learnt[i])] > back) {
        back = level_[std::abs(learnt[i])];
        at = i;
      }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[at]);
    return back;
  }

  void backtrack(int to_level) {
    while (int(trail_lim_.size()) > to_level) {
      int start = trail_lim_.back();
      trail_lim_.pop_back();
      for (int i = int(trail_.size()) - 1; i >= start; --i)
        assign_[std::abs(trail_[i])] = 0;
      trail_.resize(start);
    }
    if (qhead_ > trail_.size()) qhead_ = trail_.size();
  }

  int pick() const {
    for (int v = 1; v <= nvars_; ++v)
      if (assign_[v] == 0) return v;
    return 0;
  }

  int nvars_ = 0;
  bool ok_ = true;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> units_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> assign_;
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
};

}  // namespace quic3::smt
