#include "lak/library.hpp"

#include "lak/errors.hpp"

namespace lak {

namespace {

Formula step_type(const Formula& a) { return f_lolli(a, a); }

}  // namespace

Deriv lal_true() {
  Name a = Names::fresh("a");
  Name x = Names::fresh("x");
  Name y = Names::fresh("y");
  Deriv body = d_weak(d_id(x, f_tvar(a)), {{y, f_tvar(a), Discharge::None}});
  return d_gen(d_lam(x, d_lam(y, body)), a);
}

Deriv lal_false() {
  Name a = Names::fresh("a");
  Name x = Names::fresh("x");
  Name y = Names::fresh("y");
  Deriv body = d_weak(d_id(y, f_tvar(a)), {{x, f_tvar(a), Discharge::None}});
  return d_gen(d_lam(x, d_lam(y, body)), a);
}

Deriv lal_numeral(uint64_t n) {
  Name a = Names::fresh("a");
  Formula st = step_type(f_tvar(a));
  Name f = Names::fresh("f");
  Name x = Names::fresh("x");
  std::vector<Name> gs;
  for (uint64_t i = 0; i < n; ++i) gs.push_back(Names::fresh("g"));
  Deriv core = d_id(x, f_tvar(a));
  for (uint64_t i = n; i-- > 0;) core = d_app(d_id(gs[i], st), core);
  Deriv lam = d_lam(x, core);
  std::set<Name> bangs(gs.begin(), gs.end());
  Deriv boxed = d_para(lam, bangs);
  Name g0 = n > 0 ? gs[0] : Names::fresh("g");
  if (n == 0) boxed = d_weak(boxed, {{g0, st, Discharge::Bang}});
  for (uint64_t i = 1; i < n; ++i) boxed = d_contract(boxed, g0, gs[i], g0);
  Deriv opened = d_letbang(d_id(f, f_bang(st)), g0, boxed);
  return d_gen(d_lam(f, opened), a);
}

Deriv lal_zero() { return lal_numeral(0); }

Deriv lal_succ() {
  Name a = Names::fresh("a");
  Formula st = step_type(f_tvar(a));
  Name m = Names::fresh("m");
  Name f = Names::fresh("f");
  Name g1 = Names::fresh("g");
  Name g2 = Names::fresh("g");
  Name G = Names::fresh("G");
  Name x = Names::fresh("x");
  Deriv body =
      d_lam(x, d_app(d_id(g2, st), d_app(d_id(G, st), d_id(x, f_tvar(a)))));
  Deriv boxed = d_para(body, {g2});
  Deriv iter = d_app(d_inst(d_id(m, f_nat()), f_tvar(a)),
                     d_bang(d_id(g1, st)));
  Deriv opened = d_letpara(iter, G, boxed);
  Deriv merged = d_contract(opened, g1, g2, g1);
  Deriv let_f = d_letbang(d_id(f, f_bang(st)), g1, merged);
  return d_lam(m, d_gen(d_lam(f, let_f), a));
}

Deriv lal_add() {
  Name a = Names::fresh("a");
  Formula st = step_type(f_tvar(a));
  Name n = Names::fresh("n");
  Name m = Names::fresh("m");
  Name f = Names::fresh("f");
  Name g1 = Names::fresh("g");
  Name g2 = Names::fresh("g");
  Name G = Names::fresh("G");
  Name H = Names::fresh("H");
  Name x = Names::fresh("x");
  Deriv body =
      d_lam(x, d_app(d_id(G, st), d_app(d_id(H, st), d_id(x, f_tvar(a)))));
  Deriv boxed = d_para(body);
  Deriv iter_m = d_app(d_inst(d_id(m, f_nat()), f_tvar(a)),
                       d_bang(d_id(g2, st)));
  Deriv open_h = d_letpara(iter_m, H, boxed);
  Deriv iter_n = d_app(d_inst(d_id(n, f_nat()), f_tvar(a)),
                       d_bang(d_id(g1, st)));
  Deriv open_g = d_letpara(iter_n, G, open_h);
  Deriv merged = d_contract(open_g, g1, g2, g1);
  Deriv let_f = d_letbang(d_id(f, f_bang(st)), g1, merged);
  return d_lam(n, d_lam(m, d_gen(d_lam(f, let_f), a)));
}

Deriv lal_flat() {
  Name a = Names::fresh("a");
  Formula st = step_type(f_tvar(a));
  Name l = Names::fresh("l");
  Name f = Names::fresh("f");
  Name fp = Names::fresh("f'");
  Name k = Names::fresh("k");
  Deriv drop = d_lam(
      k, d_weak(d_id(fp, st), {{k, f_kappa(), Discharge::None}}));
  Deriv iter = d_app(d_inst(d_id(l, f_list(f_kappa())), f_tvar(a)),
                     d_bang(drop));
  Deriv let_f = d_letbang(d_id(f, f_bang(st)), fp, iter);
  return d_lam(l, d_gen(d_lam(f, let_f), a));
}

Deriv lal_regen() {
  Name n = Names::fresh("n");
  Name F = Names::fresh("F");
  Deriv inner = d_para(d_app(d_id(F, f_lolli(f_nat(), f_nat())), lal_zero()));
  Deriv iter = d_app(d_inst(d_id(n, f_nat()), f_nat()), d_bang(lal_succ()));
  return d_lam(n, d_letpara(iter, F, inner));
}

Deriv lal_length() {
  Name l = Names::fresh("l");
  return d_lam(l, d_app(lal_regen(),
                        d_app(lal_flat(), d_id(l, f_list(f_kappa())))));
}

Deriv lal_mult_banged() {
  Name n = Names::fresh("n");
  Name mh = Names::fresh("m");
  Name mp = Names::fresh("m'");
  Name G = Names::fresh("G");
  Deriv inner = d_para(d_app(d_id(G, f_lolli(f_nat(), f_nat())), lal_zero()));
  Deriv adder = d_bang(d_app(lal_add(), d_id(mp, f_nat())));
  Deriv iter = d_app(d_inst(d_id(n, f_nat()), f_nat()), adder);
  Deriv open_g = d_letpara(iter, G, inner);
  Deriv open_m = d_letbang(d_id(mh, f_bang(f_nat())), mp, open_g);
  return d_lam(n, d_lam(mh, open_m));
}

Formula pack_type(int levels) {
  if (levels < 1) throw Error("pack_type needs >= 1 level");
  if (levels == 1) return f_bang(f_nat());
  return f_tensor(f_bang(f_nat()), f_para(pack_type(levels - 1)));
}

namespace {

// step for the pack at this remaining-level count; closed
Deriv pack_step(int levels) {
  if (levels == 1) {
    Name xh = Names::fresh("x");
    Name x = Names::fresh("x'");
    Deriv banged = d_bang(d_app(lal_succ(), d_id(x, f_nat())));
    return d_lam(xh, d_letbang(d_id(xh, f_bang(f_nat())), x, banged));
  }
  Name p = Names::fresh("p");
  Name mh = Names::fresh("m");
  Name m = Names::fresh("m'");
  Name uh = Names::fresh("u");
  Name u = Names::fresh("u'");
  Deriv left = d_letbang(d_id(mh, f_bang(f_nat())), m,
                         d_bang(d_app(lal_succ(), d_id(m, f_nat()))));
  Formula inner_t = pack_type(levels - 1);
  Deriv right = d_letpara(d_id(uh, f_para(inner_t)), u,
                          d_para(d_app(pack_step(levels - 1),
                                       d_id(u, inner_t))));
  Deriv pair = d_tensor(left, right);
  Deriv opened = d_let_tensor(d_id(p, pack_type(levels)), {mh, uh}, pair);
  return d_lam(p, opened);
}

Deriv pack_base(int levels) {
  if (levels == 1) return d_bang(lal_zero());
  return d_tensor(d_bang(lal_zero()), d_para(pack_base(levels - 1)));
}

}  // namespace

Deriv lal_nat_packs(int levels) {
  Name n = Names::fresh("n");
  Name F = Names::fresh("F");
  Formula t1 = pack_type(levels);
  Deriv inner = d_para(d_app(d_id(F, f_lolli(t1, t1)), pack_base(levels)));
  Deriv iter = d_app(d_inst(d_id(n, f_nat()), t1), d_bang(pack_step(levels)));
  return d_lam(n, d_letpara(iter, F, inner));
}

namespace {

// Horner stage at level l (1-based): consumes the pack variable and the
// running value G_l, producing $^{D-l+1} N.
Deriv horner_stage(int level, int degree, Name pack_var,
                   const Deriv& running, const std::vector<uint64_t>& c) {
  uint64_t coeff = c[static_cast<size_t>(degree - level)];
  Name nu = Names::fresh("v");
  Name ghat = Names::fresh("G");
  Deriv scaled = d_app(d_app(lal_mult_banged(), running),
                       d_bang(d_id(nu, f_nat())));
  if (level == degree) {
    Deriv inner = d_para(d_app(d_app(lal_add(), lal_numeral(coeff)),
                               d_id(ghat, f_nat())));
    Deriv got_g = d_letpara(scaled, ghat, inner);
    return d_letbang(d_id(pack_var, f_bang(f_nat())), nu, got_g);
  }
  Name mh = Names::fresh("m");
  Name uh = Names::fresh("u");
  Name next_pack = Names::fresh("P");
  Deriv next_running =
      d_app(d_app(lal_add(), lal_numeral(coeff)), d_id(ghat, f_nat()));
  Deriv deeper =
      horner_stage(level + 1, degree, next_pack, next_running, c);
  Deriv boxed = d_para(deeper);
  Deriv opened_u = d_letpara(d_id(uh, f_para(pack_type(degree - level))),
                             next_pack, boxed);
  Deriv got_g = d_letpara(scaled, ghat, opened_u);
  Deriv opened_m = d_letbang(d_id(mh, f_bang(f_nat())), nu, got_g);
  return d_let_tensor(d_id(pack_var, pack_type(degree - level + 1)),
                      {mh, uh}, opened_m);
}

}  // namespace

TPoly lal_t_poly(const std::vector<uint64_t>& coeffs) {
  int degree = -1;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) degree = static_cast<int>(i);
  Name n = Names::fresh("n");
  if (degree <= 0) {
    uint64_t c0 = coeffs.empty() || degree < 0 ? 0 : coeffs[0];
    Deriv lit = d_weak(lal_numeral(c0), {{n, f_nat(), Discharge::None}});
    return {d_lam(n, lit), 0};
  }
  std::vector<uint64_t> c = coeffs;
  c.resize(static_cast<size_t>(degree) + 1, 0);
  Name p1 = Names::fresh("P");
  Deriv stage = horner_stage(1, degree, p1, lal_numeral(c.back()), c);
  Deriv boxed = d_para(stage);
  Deriv packs_applied = d_app(lal_nat_packs(degree), d_id(n, f_nat()));
  Deriv opened = d_letpara(packs_applied, p1, boxed);
  return {d_lam(n, opened), degree + 1};
}

Deriv lal_nil(const Formula& elem) {
  Name a = Names::fresh("a");
  Formula it = f_lolli(elem, step_type(f_tvar(a)));
  Name g = Names::fresh("g");
  Name gp = Names::fresh("g'");
  Name x = Names::fresh("x");
  Deriv body = d_para(d_lam(x, d_id(x, f_tvar(a))));
  Deriv weakened = d_weak(body, {{gp, it, Discharge::Bang}});
  Deriv opened = d_letbang(d_id(g, f_bang(it)), gp, weakened);
  return d_gen(d_lam(g, opened), a);
}

Deriv lal_klist(const std::vector<KElement>& values) {
  Name a = Names::fresh("a");
  Formula it = f_lolli(f_kappa(), step_type(f_tvar(a)));
  Name g = Names::fresh("g");
  Name x = Names::fresh("x");
  std::vector<Name> gs;
  for (size_t i = 0; i < values.size(); ++i) gs.push_back(Names::fresh("g'"));
  Deriv core = d_id(x, f_tvar(a));
  for (size_t i = values.size(); i-- > 0;)
    core = d_app(d_app(d_id(gs[i], it), d_ax_k(values[i])), core);
  Deriv boxed = d_para(d_lam(x, core),
                       std::set<Name>(gs.begin(), gs.end()));
  Name g0 = values.empty() ? Names::fresh("g'") : gs[0];
  if (values.empty()) boxed = d_weak(boxed, {{g0, it, Discharge::Bang}});
  for (size_t i = 1; i < values.size(); ++i)
    boxed = d_contract(boxed, g0, gs[i], g0);
  Deriv opened = d_letbang(d_id(g, f_bang(it)), g0, boxed);
  return d_gen(d_lam(g, opened), a);
}

Deriv lal_fold(const Formula& a, const Formula& b) {
  Name F = Names::fresh("F");
  Name bb = Names::fresh("b");
  Name l = Names::fresh("l");
  Name g = Names::fresh("g");
  Name bp = Names::fresh("b'");
  Deriv inner = d_para(d_app(d_id(g, f_lolli(b, b)), d_id(bp, b)));
  Deriv open_b = d_letpara(d_id(bb, f_para(b)), bp, inner);
  Formula itf = f_bang(f_lolli(a, f_lolli(b, b)));
  Deriv iter = d_app(d_inst(d_id(l, f_list(a)), b), d_id(F, itf));
  Deriv open_g = d_letpara(iter, g, open_b);
  return d_lam(F, d_lam(bb, d_lam(l, open_g)));
}

}  // namespace lak
