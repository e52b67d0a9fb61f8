#include "doctest.h"

#include <random>
#include <vector>

#include "lak/structure.hpp"

using namespace lak;

namespace {

KElement q(long n, long d = 1) { return KElement::rational(n, d); }

// Independent equality oracle: cross multiplication on raw fractions.
bool cross_equal(long an, long ad, long bn, long bd) {
  return static_cast<long long>(an) * bd == static_cast<long long>(bn) * ad;
}

}  // namespace

TEST_CASE("uniformize lifts gf2 to arity 2") {
  Structure s = Structure::gf2();
  // derived oracle: p is the max of the declared arities
  int expected_p = 1;
  for (const auto& o : s.ops()) expected_p = std::max(expected_p, o.arity);
  for (const auto& r : s.rels()) expected_p = std::max(expected_p, r.arity);
  CHECK(expected_p == 2);
  CHECK(s.p() == 2);

  Structure u = uniformize(s);
  CHECK(u.p() == 2);
  for (const auto& o : u.ops()) CHECK(o.arity == 2);
  for (const auto& r : u.rels()) CHECK(r.arity == 2);
  // constants became arity-2 functions ignoring both arguments
  int c1 = u.op_index("const1");
  std::vector<KElement> args{q(0), q(0)};
  CHECK(apply_op(u, c1, args) == q(1));
  args = {KElement::blank(), KElement::blank()};
  CHECK(apply_op(u, c1, args) == q(1));
}

TEST_CASE("uniformize keeps single unary op unchanged") {
  std::vector<OpSpec> ops{{"neg", 1, 1, [](std::span<const KElement> a) {
                             return q(0).sub(a[0]);
                           }}};
  std::vector<RelSpec> rels{{"eq", 1, 1, [](std::span<const KElement>) {
                               return true;
                             }}};
  Structure s("unary", Carrier::Rationals, ops, rels);
  CHECK(s.p() == 1);
  Structure u = uniformize(s);
  std::vector<KElement> args{q(5)};
  CHECK(apply_op(u, 0, args) == q(-5));
}

TEST_CASE("uniformized unary negation over rationals ignores the padding") {
  std::vector<OpSpec> ops;
  ops.push_back({"add", 2, 2, [](std::span<const KElement> a) {
                   return a[0].add(a[1]);
                 }});
  ops.push_back({"sub", 2, 2, [](std::span<const KElement> a) {
                   return a[0].sub(a[1]);
                 }});
  ops.push_back({"mul", 2, 2, [](std::span<const KElement> a) {
                   return a[0].mul(a[1]);
                 }});
  ops.push_back({"neg", 1, 1, [](std::span<const KElement> a) {
                   return q(0).sub(a[0]);
                 }});
  std::vector<RelSpec> rels{{"eq", 2, 2, [](std::span<const KElement> a) {
                               return a[0] == a[1];
                             }}};
  Structure s("q-neg", Carrier::Rationals, ops, rels);
  CHECK(s.p() == 2);
  Structure u = uniformize(s);
  int neg = u.op_index("neg");
  // exhaustive small-rational enumeration: op'(x1, x2) == op(x1)
  for (long n = -3; n <= 3; ++n)
    for (long d = 1; d <= 3; ++d)
      for (long pad = -2; pad <= 2; ++pad) {
        std::vector<KElement> two{q(n, d), q(pad)};
        std::vector<KElement> one{q(n, d)};
        CHECK(apply_op(u, neg, two) == apply_op(s, neg, one));
      }
  // blank is permitted in the unused position
  std::vector<KElement> padded{q(3, 4), KElement::blank()};
  CHECK(apply_op(u, neg, padded) == q(-3, 4));
}

TEST_CASE("apply_op basics and blank trapping") {
  Structure u = uniformize(Structure::gf2());
  std::vector<KElement> args{q(1), q(0)};
  CHECK(apply_op(u, u.op_index("and"), args) == q(0));
  CHECK(apply_op(u, u.op_index("or"), std::vector<KElement>{q(0), q(0)}) == q(0));

  Structure r = uniformize(Structure::rationals());
  CHECK(apply_op(r, r.op_index("add"), std::vector<KElement>{q(1, 2), q(1, 3)}) ==
        q(5, 6));
  CHECK_THROWS_AS(
      apply_op(r, r.op_index("add"),
               std::vector<KElement>{q(1), KElement::blank()}),
      BlankArgumentError);
  CHECK_THROWS_AS(apply_op(r, 99, std::vector<KElement>{q(1), q(1)}),
                  IndexOutOfRangeError);
}

TEST_CASE("apply_rel: equality, order, canonical forms") {
  Structure u = uniformize(Structure::gf2());
  CHECK(apply_rel(u, 0, std::vector<KElement>{q(1), q(1)}));

  Structure r = uniformize(Structure::rationals());
  CHECK(apply_rel(r, r.rel_index("le"), std::vector<KElement>{q(1, 3), q(1, 2)}));
  // canonicalization: 2/4 == 1/2, checked against the cross-multiplication oracle
  CHECK(apply_rel(r, 0, std::vector<KElement>{q(2, 4), q(1, 2)}) ==
        cross_equal(2, 4, 1, 2));
  CHECK_THROWS_AS(
      apply_rel(r, 0, std::vector<KElement>{q(1), KElement::blank()}),
      BlankArgumentError);
  // the blank test is total on K~
  CHECK(apply_rel(r, r.rel_index("is_blank"),
                  std::vector<KElement>{KElement::blank(), q(0)}));
  CHECK_FALSE(apply_rel(r, r.rel_index("is_blank"),
                        std::vector<KElement>{q(0), KElement::blank()}));
}

TEST_CASE("builtin structures") {
  Structure g = Structure::gf2();
  CHECK(g.p() == 2);
  CHECK(g.rels()[0].name == "eq");
  Structure r = Structure::rationals({q(1, 2)});
  CHECK(r.rels()[0].name == "eq");
  CHECK(r.op_index("c0") >= 0);
  Structure u = uniformize(r);
  CHECK(apply_op(u, u.op_index("c0"),
                 std::vector<KElement>{KElement::blank(), KElement::blank()}) ==
        q(1, 2));
}

TEST_CASE("uniformized ops agree with originals on all of GF(2)") {
  Structure s = Structure::gf2();
  Structure u = uniformize(s);
  std::vector<KElement> bits{q(0), q(1)};
  for (size_t i = 0; i < s.ops().size(); ++i) {
    int k = s.ops()[i].arity;
    if (k == 2) {
      for (const auto& a : bits)
        for (const auto& b : bits) {
          std::vector<KElement> full{a, b};
          CHECK(apply_op(u, i, full) == apply_op(s, i, full));
        }
    } else if (k == 0) {
      std::vector<KElement> full{bits[0], bits[1]};
      std::vector<KElement> none{};
      CHECK(apply_op(u, i, full) == apply_op(s, i, none));
    }
  }
}

TEST_CASE("rational arithmetic is exact") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 30);
  for (int i = 0; i < 200; ++i) {
    KElement a = q(num(rng), den(rng));
    KElement b = q(num(rng), den(rng));
    CHECK(a.add(b).sub(b) == a);
  }
}

TEST_CASE("equality is an equivalence relation on samples") {
  Structure r = uniformize(Structure::rationals());
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 6);
  std::vector<KElement> pool;
  for (int i = 0; i < 24; ++i) pool.push_back(q(num(rng), den(rng)));
  auto eq = [&](const KElement& a, const KElement& b) {
    return apply_rel(r, 0, std::vector<KElement>{a, b});
  };
  for (const auto& a : pool) CHECK(eq(a, a));
  for (const auto& a : pool)
    for (const auto& b : pool) CHECK(eq(a, b) == eq(b, a));
  for (const auto& a : pool)
    for (const auto& b : pool)
      for (const auto& c : pool)
        if (eq(a, b) && eq(b, c)) CHECK(eq(a, c));
}

TEST_CASE("K literals parse and print") {
  CHECK(KElement::parse("1/2") == q(1, 2));
  CHECK(KElement::parse("-3") == q(-3));
  CHECK(KElement::parse("-3/6") == q(-1, 2));
  CHECK(KElement::parse("_").is_blank());
  CHECK(KElement::parse("2/4").to_string() == "1/2");
  CHECK_THROWS_AS(KElement::parse("x"), ParseError);
  CHECK_THROWS_AS(KElement::rational(1, 0), Error);
}
