#pragma once

// Complete satisfiability for conjunctions of linear integer constraints:
// the Omega test (exact integer equality elimination via the symmetric-mod
// trick, Fourier-Motzkin with dark shadow and splinters for inequalities),
// with model reconstruction.  Exact arithmetic throughout (cpp_int): shadow
// products grow fast.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace quic3::smt {

using Int = boost::multiprecision::cpp_int;

struct LinCon {
  std::map<int, Int> coef;  // var id -> coefficient, no zero entries
  Int c;                    // constant
  bool eq = false;          // true: sum + c == 0, false: sum + c <= 0
};

using LiaModel = std::map<int, Int>;

class OmegaBudget : public std::runtime_error {
 public:
  OmegaBudget() : std::runtime_error("omega: budget exceeded") {}
};

inline Int floor_div(const Int &a, const Int &b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}
inline Int ceil_div(const Int &a, const Int &b) { return -floor_div(-a, b); }

// symmetric residue in (-m/2, m/2]
inline Int mod_hat(const Int &a, const Int &m) {
  Int r = a % m;
  if (r < 0) r += m;
  if (r * 2 > m) r -= m;
  return r;
}

class Omega {
 public:
  // next_var: source of fresh auxiliary variable ids (must exceed all ids in
  // cons).  Returns a model of cons or nullopt.
  static std::optional<LiaModel> solve(std::vector<LinCon> cons, int &next_var) {
    Omega o(next_var);
    auto r = o.go(std::move(cons), 0);
    next_var = o.next_;
    return r;
  }

 private:
  explicit Omega(int next) : next_(next) {}

  int next_;
  long steps_ = 0;

  void tick() {
    if (++steps_ > 2000000) throw OmegaBudget();
  }

  static Int coef_gcd(const LinCon &con) {
    Int g = 0;
    for (auto &[v, a] : con.coef) g = boost::multiprecision::gcd(g, abs(a));
    return g;
  }

  // returns false if the constraint is unsatisfiable on its own
  static bool normalize(LinCon &con, bool &trivially_true) {
    for (auto it = con.coef.begin(); it != con.coef.end();)
      it = (it->second == 0) ? con.coef.erase(it) : std::next(it);
    trivially_true = false;
    if (con.coef.empty()) {
      trivially_true = con.eq ? (con.c == 0) : (con.c <= 0);
      return trivially_true;
    }
    Int g = coef_gcd(con);
    if (g > 1) {
      if (con.eq) {
        if (con.c % g != 0) return false;
        for (auto &[v, a] : con.coef) a /= g;
        con.c /= g;
      } else {
        // sum(a/g) <= floor(-c/g)
        Int rhs = floor_div(-con.c, g);
        for (auto &[v, a] : con.coef) a /= g;
        con.c = -rhs;
      }
    }
    return true;
  }

  static Int eval_expr(const std::map<int, Int> &coef, const Int &c, LiaModel &m) {
    Int out = c;
    for (auto &[v, a] : coef) {
      auto it = m.find(v);
      if (it == m.end()) it = m.emplace(v, 0).first;
      out += a * it->second;
    }
    return out;
  }

  // substitute x := sum(coef)+c into con
  static LinCon substitute(const LinCon &con, int x, const std::map<int, Int> &coef,
                           const Int &c) {
    auto it = con.coef.find(x);
    if (it == con.coef.end()) return con;
    LinCon out = con;
    Int a = it->second;
    out.coef.erase(x);
    for (auto &[v, b] : coef) out.coef[v] += a * b;
    out.c += a * c;
    return out;
  }

  struct Bound {
    std::map<int, Int> expr;  // over the other variables
    Int c;
    Int a;  // positive coefficient of x: lower means expr+c <= a*x, upper a*x <= expr+c
  };

  std::optional<LiaModel> go(std::vector<LinCon> cons, int depth) {
    tick();
    if (depth > 400) throw OmegaBudget();

    // normalization pass
    std::vector<LinCon> work;
    work.reserve(cons.size());
    for (LinCon &con : cons) {
      bool triv;
      if (!normalize(con, triv)) return std::nullopt;
      if (!triv) work.push_back(std::move(con));
      else if (con.coef.empty() && !triv)
        return std::nullopt;
    }

    // equality elimination
    for (size_t ei = 0; ei < work.size(); ++ei) {
      if (!work[ei].eq) continue;
      LinCon e = work[ei];
      // variable with the smallest |coefficient|
      int k = 0;
      Int best = 0;
      for (auto &[v, a] : e.coef)
        if (best == 0 || abs(a) < best) {
          best = abs(a);
          k = v;
        }
      if (best == 1) {
        // x_k = -sign(a_k) * (rest + c)
        Int ak = e.coef.at(k);
        std::map<int, Int> expr;
        Int c0 = -e.c / ak;  // ak is +-1
        for (auto &[v, a] : e.coef)
          if (v != k) expr[v] = -a / ak;
        std::vector<LinCon> rest;
        rest.reserve(work.size() - 1);
        for (size_t j = 0; j < work.size(); ++j)
          if (j != ei) rest.push_back(substitute(work[j], k, expr, c0));
        auto sub = go(std::move(rest), depth + 1);
        if (!sub) return std::nullopt;
        Int xv = eval_expr(expr, c0, *sub);
        (*sub)[k] = xv;
        return sub;
      }
      // mod-reduction: m = |a_k| + 1, fresh sigma,
      // x_k defined from sum(mod_hat(a_i) x_i) + mod_hat(c) = m*sigma
      Int ak = e.coef.at(k);
      Int m = abs(ak) + 1;
      int sigma = next_++;
      Int sgn = ak > 0 ? 1 : -1;
      // for a_k > 0: mod_hat(a_k) = -1, so x_k = rest_hat + c_hat - m*sigma
      // for a_k < 0: mod_hat(a_k) = +1, so x_k = m*sigma - rest_hat - c_hat
      std::map<int, Int> expr;
      for (auto &[v, a] : e.coef)
        if (v != k) expr[v] = sgn * mod_hat(a, m);
      expr[sigma] = -sgn * m;
      Int c0 = sgn * mod_hat(e.c, m);
      std::vector<LinCon> next;
      next.reserve(work.size());
      for (auto &con : work) next.push_back(substitute(con, k, expr, c0));
      auto sub = go(std::move(next), depth + 1);
      if (!sub) return std::nullopt;
      Int xv = eval_expr(expr, c0, *sub);
      (*sub)[k] = xv;
      return sub;
    }

    // inequalities only; pick elimination variable minimizing pair count
    std::map<int, std::pair<int, int>> counts;  // var -> (lowers, uppers)
    for (auto &con : work)
      for (auto &[v, a] : con.coef) {
        if (a < 0)
          counts[v].first++;
        else
          counts[v].second++;
      }
    if (counts.empty()) return LiaModel{};
    int x = 0;
    long best_cost = -1;
    for (auto &[v, lu] : counts) {
      long cost = long(lu.first) * long(lu.second);
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        x = v;
      }
    }

    std::vector<LinCon> base;
    std::vector<Bound> lowers, uppers;
    for (auto &con : work) {
      auto it = con.coef.find(x);
      if (it == con.coef.end()) {
        base.push_back(con);
        continue;
      }
      Bound b;
      Int a = it->second;
      for (auto &[v, q] : con.coef)
        if (v != x) b.expr[v] = (a < 0) ? q : -q;
      if (a < 0) {
        // expr + c <= (-a) x
        b.c = con.c;
        b.a = -a;
        lowers.push_back(std::move(b));
      } else {
        // a x <= -expr' - c  with expr' the original coefficients
        b.c = -con.c;
        b.a = a;
        uppers.push_back(std::move(b));
      }
    }

    auto pick_from_lowers = [&](LiaModel &m) {
      Int x0;
      bool have = false;
      for (auto &L : lowers) {
        Int v = ceil_div(eval_expr(L.expr, L.c, m), L.a);
        if (!have || v > x0) {
          x0 = v;
          have = true;
        }
      }
      return x0;
    };

    if (lowers.empty() || uppers.empty()) {
      auto sub = go(std::move(base), depth + 1);
      if (!sub) return std::nullopt;
      LiaModel &m = *sub;
      Int x0 = 0;
      if (!lowers.empty()) {
        x0 = pick_from_lowers(m);
      } else if (!uppers.empty()) {
        bool have = false;
        for (auto &U : uppers) {
          Int v = floor_div(eval_expr(U.expr, U.c, m), U.a);
          if (!have || v < x0) {
            x0 = v;
            have = true;
          }
        }
      }
      m[x] = x0;
      return sub;
    }

    bool all_lower_unit = true, all_upper_unit = true;
    for (auto &L : lowers) all_lower_unit &= (L.a == 1);
    for (auto &U : uppers) all_upper_unit &= (U.a == 1);
    bool exact = all_lower_unit || all_upper_unit;

    auto shadows = [&](bool dark) {
      std::vector<LinCon> out = base;
      for (auto &L : lowers)
        for (auto &U : uppers) {
          // real: b*(expr_L + c_L) <= a*(expr_U + c_U)   [L: expr_L <= a_L x as a=L.a]
          // dark adds (a_L - 1)(a_U - 1) slack on the left
          LinCon con;
          con.eq = false;
          for (auto &[v, q] : L.expr) con.coef[v] += U.a * q;
          for (auto &[v, q] : U.expr) con.coef[v] -= L.a * q;
          con.c = U.a * L.c - L.a * U.c;
          if (dark) con.c += (L.a - 1) * (U.a - 1);
          out.push_back(std::move(con));
        }
      return out;
    };

    auto finish = [&](LiaModel m) -> std::optional<LiaModel> {
      Int x0 = pick_from_lowers(m);
      for (auto &U : uppers) {
        if (U.a * x0 > eval_expr(U.expr, U.c, m))
          throw std::logic_error("omega: shadow model has no integer extension");
      }
      m[x] = x0;
      return m;
    };

    if (exact) {
      auto sub = go(shadows(false), depth + 1);
      if (!sub) return std::nullopt;
      return finish(std::move(*sub));
    }

    if (auto sub = go(shadows(true), depth + 1)) return finish(std::move(*sub));
    if (!go(shadows(false), depth + 1)) return std::nullopt;

    // splinters: some lower bound satisfies a_L x = expr_L + c_L + i
    Int beta_max = 0;
    for (auto &U : uppers)
      if (U.a > beta_max) beta_max = U.a;
    for (auto &L : lowers) {
      Int top = floor_div(L.a * beta_max - L.a - beta_max, beta_max);
      for (Int i = 0; i <= top; ++i) {
        std::vector<LinCon> branch = work;
        LinCon eq;
        eq.eq = true;
        eq.coef = L.expr;
        eq.coef[x] -= L.a;
        eq.c = L.c + i;
        branch.push_back(std::move(eq));
        if (auto sub = go(std::move(branch), depth + 1)) return sub;
      }
    }
    return std::nullopt;
  }
};

// disequality layer: each extra constraint means sum + c != 0
inline std::optional<LiaModel> lia_solve(const std::vector<LinCon> &cons,
                                         const std::vector<LinCon> &diseqs, int &next_var,
                                         size_t di = 0) {
  if (di == diseqs.size()) {
    std::vector<LinCon> base = cons;
    return Omega::solve(std::move(base), next_var);
  }
  const LinCon &d = diseqs[di];
  {
    std::vector<LinCon> lt = cons;  // sum + c <= -1
    LinCon con;
    con.coef = d.coef;
    con.c = d.c + 1;
    lt.push_back(std::move(con));
    if (auto m = lia_solve(lt, diseqs, next_var, di + 1)) return m;
  }
  std::vector<LinCon> gt = cons;  // -(sum + c) <= -1
  LinCon con;
  for (auto &[v, a] : d.coef) con.coef[v] = -a;
  con.c = -d.c + 1;
  gt.push_back(std::move(con));
  return lia_solve(gt, diseqs, next_var, di + 1);
}

}  // namespace quic3::smt
