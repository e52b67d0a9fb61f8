#include "lak/derive.hpp"

#include <algorithm>

#include "lak/encodings.hpp"
#include "lak/errors.hpp"

namespace lak {

namespace {

using Ctx = std::vector<ContextEntry>;

const ContextEntry* lookup(const Ctx& ctx, Name x) {
  for (const auto& e : ctx)
    if (e.var == x) return &e;
  return nullptr;
}

Ctx without(const Ctx& ctx, Name x) {
  Ctx out;
  for (const auto& e : ctx)
    if (e.var != x) out.push_back(e);
  return out;
}

Ctx join(const Ctx& a, const Ctx& b) {
  Ctx out = a;
  for (const auto& e : b) {
    if (lookup(a, e.var))
      throw Error("derivation builder: contexts share variable '" +
                  Names::base_of(e.var) + "_" + std::to_string(e.var) + "'");
    out.push_back(e);
  }
  return out;
}

}  // namespace

Deriv d_id(Name x, Formula a) {
  Judgment j;
  j.ctx = {{x, a, Discharge::None}};
  j.subject = mk_var(x);
  j.type = std::move(a);
  return mk_dnode(Rule::Id, std::move(j), {});
}

Deriv d_ax_k(const KElement& v) {
  if (v.is_blank()) throw Error("blank values are written star");
  Judgment j;
  j.subject = mk_kval(v);
  j.type = f_kappa();
  return mk_dnode(Rule::AxK, std::move(j), {});
}

Deriv d_ax_star() {
  Judgment j;
  j.subject = mk_star();
  j.type = f_kappa();
  return mk_dnode(Rule::AxStar, std::move(j), {});
}

Deriv d_ax_dup() {
  Judgment j;
  j.subject = mk_dup();
  j.type = f_lolli(f_kappa(), f_tensor(f_kappa(), f_kappa()));
  return mk_dnode(Rule::AxDup, std::move(j), {});
}

Deriv d_ax_op(const Structure& s, int i) {
  if (i < 0 || static_cast<size_t>(i) >= s.ops().size())
    throw Error("op axiom index out of range");
  Judgment j;
  j.subject = mk_op(i);
  j.type = f_kappa();
  for (int k = 0; k < s.p(); ++k) j.type = f_lolli(f_kappa(), j.type);
  return mk_dnode(Rule::AxOp, std::move(j), {});
}

Deriv d_ax_rho(const Structure& s, int i) {
  if (i < 0 || static_cast<size_t>(i) >= s.rels().size())
    throw Error("rho axiom index out of range");
  Judgment j;
  j.subject = mk_rho(i);
  j.type = f_bool();
  for (int k = 0; k < s.p(); ++k) j.type = f_lolli(f_kappa(), j.type);
  return mk_dnode(Rule::AxRho, std::move(j), {});
}

Deriv d_lam(Name x, const Deriv& body) {
  const Judgment& b = concl(body);
  const ContextEntry* e = lookup(b.ctx, x);
  if (!e) throw Error("d_lam: variable not in context");
  if (e->discharge != Discharge::None)
    throw Error("d_lam: cannot abstract a discharged hypothesis");
  Judgment j;
  j.ctx = without(b.ctx, x);
  j.subject = mk_abs(x, b.subject);
  j.type = f_lolli(e->formula, b.type);
  return mk_dnode(Rule::LolliR, std::move(j), {body});
}

Deriv d_app(const Deriv& fun, const Deriv& arg) {
  const Judgment& f = concl(fun);
  const Judgment& a = concl(arg);
  Formula ft = expand(f.type);
  if (ft->kind != FKind::Lolli)
    throw Error("d_app: function type is not an arrow: " + print_formula(f.type));
  if (!formula_equal(ft->a, a.type))
    throw Error("d_app: argument type mismatch: expected " +
                print_formula(ft->a) + ", got " + print_formula(a.type));
  Name hole = Names::fresh("h");
  Deriv id = d_id(hole, ft->b);
  Name arrow = Names::fresh("f");
  Judgment lolli;
  lolli.ctx = join(a.ctx, Ctx{{arrow, f.type, Discharge::None}});
  lolli.subject = mk_app(mk_var(arrow), a.subject);
  lolli.type = ft->b;
  Deriv left = mk_dnode(Rule::LolliL, std::move(lolli), {arg, id});
  Judgment cut;
  cut.ctx = join(f.ctx, a.ctx);
  cut.subject = mk_app(f.subject, a.subject);
  cut.type = ft->b;
  return mk_dnode(Rule::Cut, std::move(cut), {fun, left});
}

Deriv d_inst(const Deriv& d, const Formula& b) {
  const Judgment& c = concl(d);
  Formula t = expand(c.type);
  if (t->kind != FKind::Forall)
    throw Error("d_inst: type is not universal: " + print_formula(c.type));
  Formula inst = subst_tvar(t->a, t->var, expand(b));
  Name x = Names::fresh("i");
  Deriv id = d_id(x, inst);
  Judgment alll;
  alll.ctx = {{x, c.type, Discharge::None}};
  alll.subject = mk_var(x);
  alll.type = inst;
  Deriv left = mk_dnode(Rule::AllL, std::move(alll), {id});
  Judgment cut;
  cut.ctx = c.ctx;
  cut.subject = c.subject;
  cut.type = inst;
  return mk_dnode(Rule::Cut, std::move(cut), {d, left});
}

Deriv d_gen(const Deriv& d, Name alpha) {
  const Judgment& c = concl(d);
  for (const auto& e : c.ctx)
    if (tvar_free_in(e.formula, alpha))
      throw Error("d_gen: eigenvariable occurs in the context");
  Judgment j;
  j.ctx = c.ctx;
  j.subject = c.subject;
  j.type = f_forall(alpha, c.type);
  return mk_dnode(Rule::AllR, std::move(j), {d});
}

Deriv d_bang(const Deriv& d) {
  const Judgment& c = concl(d);
  if (c.ctx.size() > 1)
    throw Error("d_bang: premise context must have at most one entry");
  Judgment j;
  for (const auto& e : c.ctx) {
    if (e.discharge != Discharge::None)
      throw Error("d_bang: premise entry must be plain");
    j.ctx.push_back({e.var, e.formula, Discharge::Bang});
  }
  j.subject = mk_bang(c.subject);
  j.type = f_bang(c.type);
  return mk_dnode(Rule::BangR, std::move(j), {d});
}

Deriv d_para(const Deriv& d, const std::set<Name>& bang_part) {
  const Judgment& c = concl(d);
  Judgment j;
  for (const auto& e : c.ctx) {
    if (e.discharge != Discharge::None)
      throw Error("d_para: premise entry must be plain");
    j.ctx.push_back({e.var, e.formula,
                     bang_part.count(e.var) ? Discharge::Bang : Discharge::Para});
  }
  j.subject = mk_para(c.subject);
  j.type = f_para(c.type);
  return mk_dnode(Rule::ParaR, std::move(j), {d});
}

namespace {

Deriv d_let_exp(const Deriv& scrut, Name x, const Deriv& body, bool bang) {
  const Judgment& s = concl(scrut);
  const Judgment& b = concl(body);
  const ContextEntry* e = lookup(b.ctx, x);
  if (!e) throw Error("d_let: bound variable not in body context");
  if (e->discharge != (bang ? Discharge::Bang : Discharge::Para))
    throw Error("d_let: bound variable has the wrong discharge");
  Formula st = expand(s.type);
  if (st->kind != (bang ? FKind::Bang : FKind::Para))
    throw Error("d_let: scrutinee type lacks its exponential");
  if (!formula_equal(st->a, e->formula))
    throw Error("d_let: scrutinee and binder types differ");
  Name y = Names::fresh("s");
  Judgment letj;
  letj.ctx = join(Ctx{{y, s.type, Discharge::None}}, without(b.ctx, x));
  letj.subject = bang ? mk_letbang(mk_var(y), x, b.subject)
                      : mk_letpara(mk_var(y), x, b.subject);
  letj.type = b.type;
  Deriv letd = mk_dnode(bang ? Rule::BangL : Rule::ParaL, std::move(letj), {body});
  Judgment cut;
  cut.ctx = join(s.ctx, without(b.ctx, x));
  cut.subject = bang ? mk_letbang(s.subject, x, b.subject)
                     : mk_letpara(s.subject, x, b.subject);
  cut.type = b.type;
  return mk_dnode(Rule::Cut, std::move(cut), {scrut, letd});
}

}  // namespace

Deriv d_letbang(const Deriv& scrut, Name x, const Deriv& body) {
  return d_let_exp(scrut, x, body, true);
}

Deriv d_letpara(const Deriv& scrut, Name x, const Deriv& body) {
  return d_let_exp(scrut, x, body, false);
}

Deriv d_contract(const Deriv& d, Name x, Name y, Name z) {
  const Judgment& c = concl(d);
  const ContextEntry* ex = lookup(c.ctx, x);
  const ContextEntry* ey = lookup(c.ctx, y);
  if (!ex || !ey) throw Error("d_contract: variables not in context");
  if (ex->discharge != Discharge::Bang || ey->discharge != Discharge::Bang)
    throw Error("d_contract: contraction needs !-discharged hypotheses");
  if (!formula_equal(ex->formula, ey->formula))
    throw Error("d_contract: hypothesis types differ");
  if (z != x && z != y && lookup(c.ctx, z))
    throw Error("d_contract: target name already in context");
  Judgment j;
  for (const auto& e : c.ctx) {
    if (e.var == y) continue;
    if (e.var == x)
      j.ctx.push_back({z, e.formula, Discharge::Bang});
    else
      j.ctx.push_back(e);
  }
  j.subject =
      substitute(substitute(c.subject, x, mk_var(z)), y, mk_var(z));
  j.type = c.type;
  return mk_dnode(Rule::Cntr, std::move(j), {d});
}

Deriv d_weak(const Deriv& d, const std::vector<ContextEntry>& extra) {
  if (extra.empty()) return d;
  const Judgment& c = concl(d);
  Judgment j = c;
  for (const auto& e : extra) {
    if (lookup(j.ctx, e.var)) throw Error("d_weak: variable already present");
    j.ctx.push_back(e);
  }
  return mk_dnode(Rule::Weak, std::move(j), {d});
}

Deriv d_tensor(const Deriv& a, const Deriv& b) {
  const Judgment& ja = concl(a);
  const Judgment& jb = concl(b);
  Judgment j;
  j.ctx = join(ja.ctx, jb.ctx);
  j.subject = mk_tensor({ja.subject, jb.subject});
  j.type = f_tensor(ja.type, jb.type);
  return mk_dnode(Rule::TensR, std::move(j), {a, b});
}

Deriv d_tensor_n(const std::vector<Deriv>& parts) {
  if (parts.empty()) throw Error("d_tensor_n: empty");
  Deriv acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = d_tensor(parts[i], acc);
  return acc;
}

namespace {

// let z be x1 (x) ... (x) xn in body, scrutinee as a fresh variable z
Deriv d_let_tensor_var(Name z, const std::vector<Name>& xs, const Deriv& body) {
  const Judgment& b = concl(body);
  if (xs.size() < 2) throw Error("tensor pattern needs >= 2 names");
  Deriv inner = body;
  std::vector<Name> rest(xs.begin() + 1, xs.end());
  Name head = xs[0];
  Name scrutinee_of_rest = 0;
  if (xs.size() > 2) {
    Name w = Names::fresh("w");
    inner = d_let_tensor_var(w, rest, body);
    scrutinee_of_rest = w;
  } else {
    scrutinee_of_rest = xs[1];
  }
  const Judgment& ib = concl(inner);
  const ContextEntry* ex = lookup(ib.ctx, head);
  const ContextEntry* ew = lookup(ib.ctx, scrutinee_of_rest);
  if (!ex || !ew) throw Error("d_let_tensor: pattern variables missing");
  if (ex->discharge != Discharge::None || ew->discharge != Discharge::None)
    throw Error("d_let_tensor: pattern variables must be plain");
  Judgment j;
  Ctx rest_ctx = without(without(ib.ctx, head), scrutinee_of_rest);
  j.ctx = join(Ctx{{z, f_tensor(ex->formula, ew->formula), Discharge::None}},
               rest_ctx);
  j.subject = mk_let_tensor(mk_var(z), {head, scrutinee_of_rest}, ib.subject);
  j.type = ib.type;
  return mk_dnode(Rule::TensL, std::move(j), {inner});
}

}  // namespace

Deriv d_let_tensor(const Deriv& scrut, const std::vector<Name>& xs,
                   const Deriv& body) {
  const Judgment& s = concl(scrut);
  Name z = Names::fresh("z");
  Deriv opened = d_let_tensor_var(z, xs, body);
  const Judgment& o = concl(opened);
  const ContextEntry* ez = lookup(o.ctx, z);
  if (!formula_equal(ez->formula, s.type))
    throw Error("d_let_tensor: scrutinee type does not match the pattern: " +
                print_formula(s.type) + " vs " + print_formula(ez->formula));
  Judgment cut;
  cut.ctx = join(s.ctx, without(o.ctx, z));
  cut.subject = substitute(o.subject, z, s.subject);
  cut.type = o.type;
  return mk_dnode(Rule::Cut, std::move(cut), {scrut, opened});
}

Deriv d_ite(const Deriv& b, const Deriv& u1, const Deriv& u2) {
  const Judgment& j1 = concl(u1);
  const Judgment& j2 = concl(u2);
  if (!formula_equal(j1.type, j2.type)) throw Error("d_ite: branch types differ");
  // unify branch contexts by weakening
  std::vector<ContextEntry> add1, add2;
  for (const auto& e : j2.ctx)
    if (!lookup(j1.ctx, e.var)) add1.push_back(e);
  for (const auto& e : j1.ctx)
    if (!lookup(j2.ctx, e.var)) add2.push_back(e);
  Deriv w1 = d_weak(u1, add1);
  Deriv w2 = d_weak(u2, add2);
  Judgment j;
  j.ctx = join(concl(b).ctx, concl(w1).ctx);
  j.subject = mk_if(concl(b).subject, j1.subject, j2.subject);
  j.type = j1.type;
  return mk_dnode(Rule::Ite, std::move(j), {b, w1, w2});
}

Deriv d_if_core(const Deriv& b, const Deriv& u1, const Deriv& u2) {
  const Judgment& j1 = concl(u1);
  if (!formula_equal(j1.type, concl(u2).type))
    throw Error("d_if_core: branch types differ");
  Formula arm = f_lolli(f_kappa(), j1.type);
  Deriv binst = d_inst(b, arm);
  Name z1 = Names::fresh("_");
  Name z2 = Names::fresh("_");
  Deriv lam1 = d_lam(z1, d_weak(u1, {{z1, f_kappa(), Discharge::None}}));
  Deriv lam2 = d_lam(z2, d_weak(u2, {{z2, f_kappa(), Discharge::None}}));
  return d_app(d_app(d_app(binst, lam1), lam2), d_ax_star());
}

Deriv d_let_para_tensor(const Deriv& scrut, const std::vector<Name>& xs,
                        const Deriv& body, const std::set<Name>& bang_part) {
  Name z = Names::fresh("z");
  Deriv opened = xs.size() >= 2 ? d_let_tensor_var(z, xs, body) : body;
  if (xs.size() == 1) {
    // single-component payload: plain let-$ on the one variable
    return d_letpara(scrut, xs[0], d_para(body, bang_part));
  }
  Deriv boxed = d_para(opened, bang_part);
  return d_letpara(scrut, z, boxed);
}

}  // namespace lak
