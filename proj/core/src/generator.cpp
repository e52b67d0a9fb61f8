#include "lak/generator.hpp"

#include "lak/encodings.hpp"
#include "lak/library.hpp"
#include "lak/derive.hpp"

namespace lak {

namespace {

struct Binding {
  Name name;
  uint32_t depth;     // occurrences live exactly here
  int uses_left;      // -1 = unbounded (let-! bound)
};

struct Gen {
  std::mt19937_64& rng;
  std::vector<Binding> scope;
  int bang_quota = -1;  // >= 0 while inside a ! subterm

  int pick(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

  Term lit() { return mk_kval(KElement::integer(pick(2))); }

  Term var_or_lit(uint32_t depth) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < scope.size(); ++i)
      if (scope[i].depth == depth && scope[i].uses_left != 0) eligible.push_back(i);
    if (!eligible.empty() && (bang_quota != 0) && pick(3) != 0) {
      Binding& b = scope[eligible[static_cast<size_t>(pick(
          static_cast<int>(eligible.size())))]];
      if (b.uses_left > 0) --b.uses_left;
      if (bang_quota > 0) --bang_quota;
      return mk_var(b.name);
    }
    return lit();
  }

  Term go(uint32_t depth, int budget) {
    if (budget <= 1) return var_or_lit(depth);
    switch (pick(12)) {
      case 0:
        return var_or_lit(depth);
      case 1: {  // abstraction
        Name x = Names::fresh("x");
        scope.push_back({x, depth, 1});
        Term body = go(depth, budget - 1);
        scope.pop_back();
        return mk_abs(x, body);
      }
      case 2: case 3: {  // application (often a beta redex)
        int half = budget / 2;
        if (pick(2) == 0) {
          Name x = Names::fresh("x");
          scope.push_back({x, depth, 1});
          Term body = go(depth, half);
          scope.pop_back();
          return mk_app(mk_abs(x, body), go(depth, budget - half - 1));
        }
        return mk_app(go(depth, half), go(depth, budget - half - 1));
      }
      case 4: {  // let-! of a bang (a (!) redex)
        int half = budget / 2;
        int saved = bang_quota;
        bang_quota = 1;
        Term boxed = go(depth + 1, half);
        bang_quota = saved;
        Name x = Names::fresh("x");
        scope.push_back({x, depth + 1, -1});
        Term body = go(depth, budget - half - 1);
        scope.pop_back();
        return mk_letbang(mk_bang(boxed), x, body);
      }
      case 5: {  // let-$ of a para (a ($) redex)
        int half = budget / 2;
        Term boxed = go(depth + 1, half);
        Name x = Names::fresh("x");
        scope.push_back({x, depth + 1, 1});
        Term body = go(depth, budget - half - 1);
        scope.pop_back();
        return mk_letpara(mk_para(boxed), x, body);
      }
      case 6: {  // bang box
        int saved = bang_quota;
        bang_quota = 1;
        Term body = go(depth + 1, budget - 1);
        bang_quota = saved;
        return mk_bang(body);
      }
      case 7:
        return mk_para(go(depth + 1, budget - 1));
      case 8: {  // full op spine over gf2 (p = 2)
        int op = pick(4);
        if (op >= 2) {  // constants take no real arguments but p literals
          return mk_app(mk_app(mk_op(op), lit()), lit());
        }
        return mk_app(mk_app(mk_op(op), lit()), lit());
      }
      case 9:  // rho spine: equality of two literals
        return mk_app(mk_app(mk_rho(0), lit()), lit());
      case 10:
        return mk_app(mk_dup(), lit());
      case 11: {  // conditional
        Term c = mk_app(mk_app(mk_rho(0), lit()), lit());
        int half = budget / 2;
        return mk_if(c, go(depth, half / 2 + 1), go(depth, half / 2 + 1));
      }
    }
    return lit();
  }
};

}  // namespace

Term generate_term(std::mt19937_64& rng, int budget) {
  Gen g{rng};
  return g.go(0, budget);
}

std::vector<Term> generate_corpus(uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Term> out;
  // a few deterministic library shapes first
  Name g = Names::fresh("g");
  Name ii = Names::fresh("i");
  out.push_back(mk_letpara(
      mk_app(mk_nat(4), mk_bang(mk_abs(ii, mk_var(ii)))), g,
      mk_para(mk_app(mk_var(g), mk_star()))));
  out.push_back(mk_app(mk_app(subject(lal_add()), mk_nat(2)), mk_nat(3)));
  out.push_back(mk_app(mk_app(subject(lal_mult_banged()), mk_nat(2)),
                       mk_bang(mk_nat(3))));
  out.push_back(mk_app(subject(lal_flat()),
                       mk_klist({KElement::integer(1), KElement::integer(0)})));
  out.push_back(mk_if(mk_bool(true), mk_kval(KElement::integer(1)),
                      mk_kval(KElement::integer(0))));
  while (out.size() < static_cast<size_t>(count)) {
    Term t = generate_term(rng, 12 + static_cast<int>(rng() % 28));
    if (well_formed(t).ok()) out.push_back(t);
  }
  return out;
}

}  // namespace lak
