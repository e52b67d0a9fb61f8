#include "lak/encodings.hpp"

#include "lak/errors.hpp"
#include "lak/reduction.hpp"

namespace lak {

Term mk_bool(bool b) {
  Name x = Names::fresh("x");
  Name y = Names::fresh("y");
  return mk_abs(x, mk_abs(y, mk_var(b ? x : y)));
}

Term mk_nat(uint64_t n) {
  Name f = Names::fresh("f");
  Name g = Names::fresh("g");
  Name x = Names::fresh("x");
  Term body = mk_var(x);
  for (uint64_t i = 0; i < n; ++i) body = mk_app(mk_var(g), body);
  return mk_abs(f, mk_letbang(mk_var(f), g, mk_para(mk_abs(x, body))));
}

Term mk_klist(const std::vector<KElement>& values) {
  Name g = Names::fresh("g");
  Name g2 = Names::fresh("g'");
  Name x = Names::fresh("x");
  Term body = mk_var(x);
  for (auto it = values.rbegin(); it != values.rend(); ++it)
    body = mk_app(mk_app(mk_var(g2), mk_kval(*it)), body);
  return mk_abs(g, mk_letbang(mk_var(g), g2, mk_para(mk_abs(x, body))));
}

Term mk_nil() { return mk_klist({}); }

Term mk_if(Term b, Term u1, Term u2) {
  Name z1 = Names::fresh("_");
  Name z2 = Names::fresh("_");
  return mk_app(mk_app(mk_app(std::move(b), mk_abs(z1, std::move(u1))),
                       mk_abs(z2, std::move(u2))),
                mk_star());
}

Term mk_tensor(const std::vector<Term>& parts) {
  if (parts.empty()) throw Error("empty tensor");
  Term acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) {
    Name y = Names::fresh("y");
    acc = mk_abs(y, mk_app(mk_app(mk_var(y), parts[i]), acc));
  }
  return acc;
}

Term mk_let_tensor(Term scrutinee, const std::vector<Name>& names, Term body) {
  if (names.size() < 2) throw Error("tensor pattern needs >= 2 names");
  if (names.size() == 2)
    return mk_app(std::move(scrutinee),
                  mk_abs(names[0], mk_abs(names[1], std::move(body))));
  Name w = Names::fresh("w");
  std::vector<Name> rest(names.begin() + 1, names.end());
  return mk_app(std::move(scrutinee),
                mk_abs(names[0],
                       mk_abs(w, mk_let_tensor(mk_var(w), rest, std::move(body)))));
}

Term mk_abs_tensor(const std::vector<Name>& names, Term body) {
  Name z = Names::fresh("z");
  return mk_abs(z, mk_let_tensor(mk_var(z), names, std::move(body)));
}

Term mk_fold() {
  Name F = Names::fresh("F");
  Name b = Names::fresh("b");
  Name l = Names::fresh("l");
  Name g = Names::fresh("g");
  Name b2 = Names::fresh("b'");
  return mk_abs(
      F, mk_abs(b, mk_abs(l, mk_letpara(mk_app(mk_var(l), mk_var(F)), g,
                                        mk_letpara(mk_var(b), b2,
                                                   mk_para(mk_app(mk_var(g),
                                                                  mk_var(b2))))))));
}

namespace {

Term normal_applied(const UntypedTerm& t, const std::vector<Term>& args,
                    uint64_t fuel) {
  Term applied = t.t;
  for (const Term& a : args) applied = mk_app(applied, a);
  return normalize_untyped(UntypedTerm{applied}, fuel).t;
}

}  // namespace

std::vector<KElement> decode_klist(const UntypedTerm& t, uint64_t fuel) {
  Name c = Names::fresh("%cons");
  Name n = Names::fresh("%nil");
  Term nf = normal_applied(t, {mk_var(c), mk_var(n)}, fuel);
  std::vector<KElement> out;
  const TermNode* cur = nf.get();
  while (true) {
    if (cur->kind == TermKind::Var && cur->var == n) return out;
    if (cur->kind == TermKind::App && cur->a->kind == TermKind::App &&
        cur->a->a->kind == TermKind::Var && cur->a->a->var == c &&
        cur->a->b->kind == TermKind::Const) {
      const Constant& k = cur->a->b->cnst;
      if (k.kind == ConstKind::KVal)
        out.push_back(k.value);
      else if (k.kind == ConstKind::Star)
        out.push_back(KElement::blank());
      else
        throw IllFormedSpineError("non-value constant in list spine");
      cur = cur->b.get();
      continue;
    }
    throw IllFormedSpineError("normal form is not a list spine");
  }
}

uint64_t decode_nat(const UntypedTerm& t, uint64_t fuel) {
  Name s = Names::fresh("%succ");
  Name z = Names::fresh("%zero");
  Term nf = normal_applied(t, {mk_var(s), mk_var(z)}, fuel);
  uint64_t out = 0;
  const TermNode* cur = nf.get();
  while (true) {
    if (cur->kind == TermKind::Var && cur->var == z) return out;
    if (cur->kind == TermKind::App && cur->a->kind == TermKind::Var &&
        cur->a->var == s) {
      ++out;
      cur = cur->b.get();
      continue;
    }
    throw IllFormedSpineError("normal form is not a numeral spine");
  }
}

bool decode_bool(const UntypedTerm& t, uint64_t fuel) {
  Name tt = Names::fresh("%t");
  Name ff = Names::fresh("%f");
  Term nf = normal_applied(t, {mk_var(tt), mk_var(ff)}, fuel);
  if (nf->kind == TermKind::Var) {
    if (nf->var == tt) return true;
    if (nf->var == ff) return false;
  }
  throw IllFormedSpineError("normal form is not a boolean");
}

}  // namespace lak
