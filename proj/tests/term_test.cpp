#include <gtest/gtest.h>

#include <random>

#include "quic3/logic.hpp"
#include "quic3/parser.hpp"
#include "quic3/printer.hpp"
#include "quic3/subst.hpp"
#include "quic3/term.hpp"

using namespace quic3;

namespace {

TermRef A() { return mk_const("A", Sort::Array); }
TermRef x() { return mk_const("x", Sort::Int); }
TermRef y() { return mk_const("y", Sort::Int); }
TermRef sz() { return mk_const("sz", Sort::Int); }

TEST(Term, HashConsing) {
  EXPECT_EQ(mk_add(x(), mk_num(1)), mk_add(mk_num(1), x()));
  EXPECT_EQ(mk_and(mk_lt(x(), y()), mk_lt(x(), y())), mk_lt(x(), y()));
  EXPECT_NE(mk_lt(x(), y()), mk_lt(y(), x()));
}

TEST(Term, LinearCanonicalization) {
  // x + x = 2x, x - x = 0
  EXPECT_EQ(mk_add(x(), x()), mk_mul(2, x()));
  EXPECT_EQ(mk_sub(x(), x()), mk_num(0));
  EXPECT_EQ(mk_add(mk_num(2), mk_num(3)), mk_num(5));
}

TEST(Term, FreeVars) {
  TermRef t1 = mk_eq(mk_select(A(), mk_var(2)), mk_num(0));
  EXPECT_EQ(free_vars(t1), (std::set<uint32_t>{2}));
  TermRef t2 = mk_lt(mk_add(x(), mk_num(1)), y());
  EXPECT_TRUE(free_vars(t2).empty());
  TermRef t3 = mk_le(mk_var(0), mk_var(0));
  EXPECT_EQ(free_vars(t3), (std::set<uint32_t>{0}));
}

TEST(Term, Consts) {
  TermRef t1 = mk_gt(mk_select(A(), mk_skolem(1)), x());
  auto cs = consts(t1);
  EXPECT_EQ(cs.size(), 3u);
  EXPECT_TRUE(cs.count(A()));
  EXPECT_TRUE(cs.count(mk_skolem(1)));
  EXPECT_TRUE(cs.count(x()));
  EXPECT_TRUE(consts(mk_lt(mk_num(3), mk_num(5))).empty());
  TermRef t3 = mk_eq(mk_store(A(), x(), mk_num(0)), mk_const("A", Sort::Array, ConstClass::Primed));
  EXPECT_EQ(consts(t3).size(), 3u);
}

TEST(Term, ApplySubst) {
  TermRef j = mk_const("j", Sort::Int);
  TermRef t = mk_eq(mk_select(A(), mk_var(0)), mk_num(0));
  TermRef r = apply_subst(t, Subst::single(0, j));
  EXPECT_EQ(r, mk_eq(mk_select(A(), j), mk_num(0)));

  EXPECT_EQ(apply_subst(t, Subst{}), t);

  TermRef u = mk_lt(mk_var(0), mk_var(1));
  TermRef v = apply_subst(u, Subst::single(0, mk_num(1)));
  EXPECT_EQ(v, mk_lt(mk_num(1), mk_var(1)));
}

TEST(Term, SubstComposition) {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    Subst s1, s2;
    for (uint32_t v = 0; v < 6; ++v) {
      if (rng() % 2) s1.bind(v, mk_num(int64_t(rng() % 9) - 4));
      if (rng() % 2) s2.bind(v, mk_num(int64_t(rng() % 9) - 4));
    }
    Subst c = s1.compose(s2);
    for (uint32_t v = 0; v < 6; ++v) {
      if (s1.has(v))
        EXPECT_EQ(c.at(v), s1.at(v));
      else if (s2.has(v))
        EXPECT_EQ(c.at(v), s2.at(v));
      else
        EXPECT_FALSE(c.has(v));
    }
  }
}

TEST(Term, Skolemize) {
  TermRef Ap = mk_const("A", Sort::Array, ConstClass::Primed);
  TermRef t = mk_not(mk_eq(mk_select(Ap, mk_var(0)), mk_num(0)));
  TermRef s = skolemize(t);
  EXPECT_EQ(s, mk_not(mk_eq(mk_select(Ap, mk_skolem(0)), mk_num(0))));

  TermRef g = mk_lt(x(), y());
  EXPECT_EQ(skolemize(g), g);

  TermRef u = mk_lt(mk_add(mk_var(3), mk_var(0)), mk_num(5));
  EXPECT_EQ(skolemize(u), mk_lt(mk_add(mk_skolem(3), mk_skolem(0)), mk_num(5)));

  // pure function: identical input, identical output (interned pointer)
  EXPECT_EQ(skolemize(t), skolemize(t));
}

TEST(Term, AbsSkolemRoundTrip) {
  // abs(SK, phi_sk) = (phi, _): skolemization followed by abstraction of SK
  // restores the very same variables
  TermRef phi = mk_and(mk_eq(mk_select(A(), mk_var(2)), mk_num(0)),
                       mk_lt(mk_var(2), sz()));
  TermRef phi_sk = skolemize(phi);
  auto r = abs(skolem_consts_of(phi_sk), phi_sk);
  EXPECT_EQ(r.abstracted, phi);
  EXPECT_EQ(apply_subst(r.abstracted, r.inverse), phi_sk);
}

TEST(Term, AbsEmpty) {
  TermRef phi = mk_lt(x(), y());
  auto r = abs({}, phi);
  EXPECT_EQ(r.abstracted, phi);
  EXPECT_TRUE(r.inverse.empty());
}

TEST(Term, AbsFirstOccurrenceNaming) {
  // abs({j'}, sel(A, j') != 0 && 0 <= j' && j' < sz)
  TermRef jp = mk_const("j", Sort::Int, ConstClass::Primed);
  TermRef phi = mk_and(mk_and(mk_not(mk_eq(mk_select(A(), jp), mk_num(0))),
                              mk_le(mk_num(0), jp)),
                       mk_lt(jp, sz()));
  auto r = abs({std::set<TermRef, TermLess>{jp}}, phi);
  TermRef expected = mk_and(mk_and(mk_not(mk_eq(mk_select(A(), mk_var(0)), mk_num(0))),
                                   mk_le(mk_num(0), mk_var(0))),
                            mk_lt(mk_var(0), sz()));
  EXPECT_EQ(r.abstracted, expected);
  ASSERT_TRUE(r.inverse.has(0));
  EXPECT_EQ(r.inverse.at(0), jp);
  EXPECT_EQ(apply_subst(r.abstracted, r.inverse), phi);
}

TEST(Term, AbsMixedSkolemAndFresh) {
  // skolems keep their index; others take lowest free indices
  TermRef jp = mk_const("j", Sort::Int, ConstClass::Primed);
  TermRef phi = mk_and(mk_eq(mk_select(A(), mk_skolem(0)), mk_num(1)), mk_lt(jp, sz()));
  std::set<TermRef, TermLess> U{mk_skolem(0), jp};
  auto r = abs(U, phi);
  // sk_0 -> v0, j' -> v1 (0 is taken by the skolem)
  EXPECT_EQ(r.inverse.at(0), mk_skolem(0));
  EXPECT_EQ(r.inverse.at(1), jp);
  EXPECT_EQ(apply_subst(r.abstracted, r.inverse), phi);
}

TEST(Term, AbsRandomRoundTrip) {
  std::mt19937 rng(21);
  for (int round = 0; round < 300; ++round) {
    // random ground term over {x, y, j'} then abstract a random subset
    std::vector<TermRef> pool{x(), y(), mk_const("j", Sort::Int, ConstClass::Primed),
                              mk_skolem(rng() % 3)};
    std::vector<TermRef> lits;
    for (int i = 0; i < 3; ++i) {
      TermRef a = pool[rng() % pool.size()];
      TermRef b = pool[rng() % pool.size()];
      switch (rng() % 3) {
        case 0: lits.push_back(mk_lt(a, b)); break;
        case 1: lits.push_back(mk_eq(mk_add(a, mk_num(int64_t(rng() % 5))), b)); break;
        default: lits.push_back(mk_le(mk_select(A(), a), b)); break;
      }
    }
    TermRef phi = mk_and(lits);
    std::set<TermRef, TermLess> U;
    for (TermRef c : consts(phi))
      if (c->sort == Sort::Int && rng() % 2) U.insert(c);
    auto r = abs(U, phi);
    EXPECT_EQ(apply_subst(r.abstracted, r.inverse), phi);
    for (TermRef c : consts(r.abstracted)) EXPECT_FALSE(U.count(c));
    // dom(sigma) = FVars(psi) \ FVars(phi)
    std::set<uint32_t> expect_dom;
    for (uint32_t v : free_vars(r.abstracted))
      if (!free_vars(phi).count(v)) expect_dom.insert(v);
    std::set<uint32_t> dom;
    for (auto &[v, t] : r.inverse.entries()) dom.insert(v);
    EXPECT_EQ(dom, expect_dom);
  }
}

TEST(Term, PrimeUnprime) {
  EXPECT_EQ(prime(mk_lt(x(), mk_num(5))),
            mk_lt(mk_const("x", Sort::Int, ConstClass::Primed), mk_num(5)));
  TermRef t = mk_eq(mk_select(A(), mk_const("i", Sort::Int)), mk_num(0));
  EXPECT_EQ(unprime(prime(t)), t);
  TermRef tp = prime(t);
  EXPECT_TRUE(mentions_class(tp, ConstClass::Primed));
  EXPECT_FALSE(mentions_class(tp, ConstClass::State));
  // skolems are untouched by priming
  TermRef s = mk_eq(mk_skolem(0), x());
  EXPECT_EQ(prime(s), mk_eq(mk_skolem(0), mk_const("x", Sort::Int, ConstClass::Primed)));
  EXPECT_THROW(prime(tp), SortError);
}

TEST(Term, NegationStructural) {
  EXPECT_EQ(mk_not(mk_lt(x(), y())), mk_le(y(), x()));
  EXPECT_EQ(mk_not(mk_le(x(), y())), mk_lt(y(), x()));
  EXPECT_EQ(mk_not(mk_not(mk_eq(x(), y()))), mk_eq(x(), y()));
  EXPECT_TRUE(is_literal(mk_not(mk_eq(x(), y()))));
}

TEST(Term, CubeClauseDuality) {
  Cube c{{mk_lt(x(), y()), mk_eq(x(), mk_num(0))}};
  Clause d = c.negate();
  EXPECT_EQ(d.negate(), c);
  EXPECT_EQ(c.lits.size(), 2u);
}

TEST(Term, DnfCubes) {
  TermRef f = mk_and(mk_or(mk_eq(x(), mk_num(0)), mk_eq(x(), mk_num(1))), mk_lt(y(), x()));
  auto cubes = dnf_cubes(f);
  EXPECT_EQ(cubes.size(), 2u);
  TermRef g = mk_ite(mk_lt(x(), y()), mk_eq(x(), mk_num(0)), mk_eq(y(), mk_num(0)));
  auto cubes2 = dnf_cubes(g);
  EXPECT_EQ(cubes2.size(), 2u);
}

TEST(Term, HoistTermIte) {
  // atom over an int ite splits on the condition
  TermRef t = mk_eq(mk_ite(mk_lt(x(), y()), mk_num(1), mk_num(2)), mk_num(1));
  auto cubes = dnf_cubes(t);
  ASSERT_EQ(cubes.size(), 1u);  // the else branch yields 2 = 1, which folds away
  EXPECT_EQ(cubes[0].to_term(), mk_lt(x(), y()));
}

TEST(Term, PrinterParserRoundTrip) {
  SymbolTable syms;
  syms.declare("x", x());
  syms.declare("y", y());
  syms.declare("A", A());
  syms.declare("x!", mk_const("x", Sort::Int, ConstClass::Primed));
  std::mt19937 rng(5);
  std::vector<TermRef> pool{x(), y(), mk_num(0), mk_num(-3),
                            mk_select(A(), x()),
                            mk_const("x", Sort::Int, ConstClass::Primed)};
  for (int round = 0; round < 200; ++round) {
    TermRef a = pool[rng() % pool.size()], b = pool[rng() % pool.size()];
    TermRef t;
    switch (rng() % 6) {
      case 0: t = mk_lt(a, b); break;
      case 1: t = mk_le(mk_add(a, b), b); break;
      case 2: t = mk_eq(a, mk_mul(2, b)); break;
      case 3: t = mk_and(mk_lt(a, b), mk_eq(a, mk_num(0))); break;
      case 4: t = mk_or(mk_not(mk_eq(a, b)), mk_lt(b, a)); break;
      default: t = mk_eq(mk_select(mk_store(A(), a, b), b), a); break;
    }
    std::string text = to_smt2(t);
    SExprReader r(text);
    SExpr e;
    ASSERT_TRUE(r.next(e));
    TermParser p(syms);
    EXPECT_EQ(normalize(p.parse(e)), normalize(t)) << text;
  }
}

TEST(Term, ParserModEq) {
  SymbolTable syms;
  syms.declare("y", y());
  SExprReader r("(= (mod y 2) 0)");
  SExpr e;
  ASSERT_TRUE(r.next(e));
  TermParser p(syms);
  EXPECT_EQ(p.parse(e), mk_mod_eq(y(), 2, 0));
  EXPECT_EQ(to_smt2(mk_mod_eq(y(), 2, 0)), "(= (mod y 2) 0)");
}

TEST(Term, ParserRejectsQuantifier) {
  SymbolTable syms;
  SExprReader r("(forall ((v0 Int)) (= v0 0))");
  SExpr e;
  ASSERT_TRUE(r.next(e));
  TermParser p(syms);
  EXPECT_THROW(p.parse(e), ParseError);
}

TEST(Term, NormalizeIdempotent) {
  TermRef t = mk_and(mk_or(mk_lt(x(), y()), mk_le(y(), x())), mk_eq(x(), x()));
  EXPECT_EQ(normalize(t), mk_true());
  // complementary literals collapse the conjunction
  EXPECT_EQ(mk_and(mk_lt(x(), y()), mk_le(y(), x())), mk_false());
  TermRef u = mk_and(mk_lt(x(), y()), mk_le(x(), y()));
  EXPECT_EQ(normalize(normalize(u)), normalize(u));
}

}  // namespace
