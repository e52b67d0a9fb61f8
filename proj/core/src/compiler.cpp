#include "lak/compiler.hpp"

#include <algorithm>

#include "lak/encodings.hpp"
#include "lak/errors.hpp"
#include "lak/library.hpp"
#include "lak/syntax.hpp"

namespace lak {

namespace {

Formula it_type(const Formula& a) {
  return f_lolli(f_kappa(), f_lolli(a, a));
}

int q_count(const Machine& m) {
  return static_cast<int>(m.order.size()) + 2;
}

std::vector<Formula> kappas(int count) {
  return std::vector<Formula>(static_cast<size_t>(count), f_kappa());
}

// window halves carry the head twice: [h1 h2 c2 .. cp]
int half_width(int p) { return p + 1; }

Formula win_formula(Name a, int p) {
  std::vector<Formula> parts{f_tvar(a)};
  auto ks = kappas(half_width(p));
  parts.insert(parts.end(), ks.begin(), ks.end());
  parts.insert(parts.end(), ks.begin(), ks.end());
  parts.push_back(f_tvar(a));
  return f_tensor_n(parts);
}

Formula res_formula(Name a, int n) {
  return f_tensor_n({f_tvar(a), f_tvar(a), q_type(n)});
}

Formula config_body(Name a, int n) {
  return f_lolli(
      f_bang(it_type(f_tvar(a))),
      f_lolli(f_para(f_tvar(a)),
              f_lolli(f_para(f_tvar(a)),
                      f_para(res_formula(a, n)))));
}

}  // namespace

Formula q_type(int n) {
  Name a = Names::fresh("a");
  Name b = Names::fresh("b");
  Formula arm = f_lolli(f_tvar(a), f_tvar(b));
  Formula acc = f_lolli(f_tvar(a), f_tvar(b));
  for (int i = 0; i < n; ++i) acc = f_lolli(arm, acc);
  return f_forall(a, f_forall(b, acc));
}

Formula conf_type(int n) {
  Name a = Names::fresh("a");
  return f_forall(a, config_body(a, n));
}

Formula cw_type(int n, int p) {
  Name a = Names::fresh("a");
  std::vector<Formula> parts{f_tvar(a)};
  auto ks = kappas(half_width(p));
  parts.insert(parts.end(), ks.begin(), ks.end());
  parts.insert(parts.end(), ks.begin(), ks.end());
  parts.push_back(f_tvar(a));
  parts.push_back(q_type(n));
  Formula payload = f_tensor_n(parts);
  return f_forall(
      a, f_lolli(f_bang(it_type(f_tvar(a))),
                 f_lolli(f_para(f_tvar(a)),
                         f_lolli(f_para(f_tvar(a)), f_para(payload)))));
}

Deriv encode_state_deriv(const Machine& m, const std::string& q) {
  int n = q_count(m);
  int idx = m.state_index(q);
  if (idx < 0) throw CompilationError("unknown state '" + q + "'");
  Name a = Names::fresh("a");
  Name b = Names::fresh("b");
  Formula arm = f_lolli(f_tvar(a), f_tvar(b));
  std::vector<Name> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Names::fresh("x"));
  Name v = Names::fresh("v");
  Deriv core = d_app(d_id(xs[idx], arm), d_id(v, f_tvar(a)));
  std::vector<ContextEntry> extra;
  for (int i = 0; i < n; ++i)
    if (i != idx) extra.push_back({xs[i], arm, Discharge::None});
  core = d_weak(core, extra);
  Deriv out = d_lam(v, core);
  for (int i = n; i-- > 0;) out = d_lam(xs[i], out);
  return d_gen(d_gen(out, b), a);
}

Term encode_state(const Machine& m, const std::string& q) {
  return subject(encode_state_deriv(m, q));
}

namespace {

struct WindowNames {
  Name w;                    // the whole payload binder
  Name l1;
  std::vector<Name> neg;     // h1 h2 c2..cp
  std::vector<Name> pos;
  Name l2;

  std::vector<Name> flat() const {
    std::vector<Name> out{l1};
    out.insert(out.end(), neg.begin(), neg.end());
    out.insert(out.end(), pos.begin(), pos.end());
    out.push_back(l2);
    return out;
  }
};

WindowNames make_window_names(int p) {
  WindowNames wn;
  wn.w = Names::fresh("w");
  wn.l1 = Names::fresh("l1");
  wn.l2 = Names::fresh("l2");
  for (int i = 0; i < half_width(p); ++i) {
    wn.neg.push_back(Names::fresh("kn"));
    wn.pos.push_back(Names::fresh("kp"));
  }
  return wn;
}

Deriv weaken_missing(Deriv d, const std::vector<std::pair<Name, Formula>>& vars) {
  std::vector<ContextEntry> extra;
  for (const auto& [nm, f] : vars) {
    bool present = false;
    for (const auto& e : concl(d).ctx)
      if (e.var == nm) present = true;
    if (!present) extra.push_back({nm, f, Discharge::None});
  }
  return d_weak(d, extra);
}

}  // namespace

ActionBuild compile_action_build(const Machine& m, const std::string& q,
                                 Name a_var) {
  const int p = m.structure.p();
  Formula a = f_tvar(a_var);
  Formula it = it_type(a);
  WindowNames wn = make_window_names(p);
  Name gA = Names::fresh("g");
  Name gB = Names::fresh("g");

  auto cons = [&](Name g, const Deriv& cell, const Deriv& rest) {
    return d_app(d_app(d_id(g, it), cell), rest);
  };
  auto restore_neg = [&] {
    return cons(gA, d_id(wn.neg[0], f_kappa()), d_id(wn.l1, a));
  };
  // op/rho arguments: the head plus the trailing cells (the spare head copy
  // at slot 1 is for restoring)
  auto spine_args = [&](const std::vector<Name>& half) {
    std::vector<Name> out{half[0]};
    for (int i = 2; i < half_width(p); ++i) out.push_back(half[i]);
    return out;
  };

  Deriv body;
  if (m.is_final(q)) {
    Deriv pos = cons(gB, d_id(wn.pos[0], f_kappa()), d_id(wn.l2, a));
    body = d_tensor_n({restore_neg(), pos, encode_state_deriv(m, q)});
  } else {
    const StateSpec& spec = m.states.at(q);
    switch (spec.kind) {
      case StateSpec::Kind::Computation: {
        Deriv sp = d_ax_op(m.structure, spec.op);
        for (Name cell : spine_args(wn.pos))
          sp = d_app(sp, d_id(cell, f_kappa()));
        Deriv pos = cons(gB, sp, d_id(wn.l2, a));
        body = d_tensor_n({restore_neg(), pos, encode_state_deriv(m, spec.next)});
        break;
      }
      case StateSpec::Kind::Branch: {
        Deriv sp = d_ax_rho(m.structure, spec.rel);
        for (Name cell : spine_args(wn.pos))
          sp = d_app(sp, d_id(cell, f_kappa()));
        Deriv qd = d_if_core(sp, encode_state_deriv(m, spec.next_true),
                             encode_state_deriv(m, spec.next_false));
        Deriv pos = cons(gB, d_id(wn.pos[1], f_kappa()), d_id(wn.l2, a));
        body = d_tensor_n({restore_neg(), pos, qd});
        break;
      }
      case StateSpec::Kind::Shift: {
        if (spec.shift_left) {
          Deriv pos = cons(gA, d_id(wn.neg[0], f_kappa()),
                           cons(gB, d_id(wn.pos[0], f_kappa()), d_id(wn.l2, a)));
          body = d_tensor_n({d_id(wn.l1, a), pos,
                             encode_state_deriv(m, spec.next)});
        } else {
          Deriv neg = cons(gA, d_id(wn.pos[0], f_kappa()),
                           cons(gB, d_id(wn.neg[0], f_kappa()), d_id(wn.l1, a)));
          body = d_tensor_n({neg, d_id(wn.l2, a),
                             encode_state_deriv(m, spec.next)});
        }
        break;
      }
    }
  }
  std::vector<std::pair<Name, Formula>> all_cells;
  for (Name nm : wn.neg) all_cells.emplace_back(nm, f_kappa());
  for (Name nm : wn.pos) all_cells.emplace_back(nm, f_kappa());
  all_cells.emplace_back(wn.l1, a);
  all_cells.emplace_back(wn.l2, a);
  body = weaken_missing(body, all_cells);
  Deriv opened = d_let_tensor(d_id(wn.w, win_formula(a_var, p)), wn.flat(), body);
  ActionBuild out;
  out.deriv = d_lam(wn.w, opened);
  out.gs = {gA, gB};
  return out;
}

Term compile_action(const Machine& m, const std::string& q) {
  Name a = Names::fresh("a");
  return subject(compile_action_build(m, q, a).deriv);
}

Deriv build_c2cw_deriv(const Machine& m) {
  const int p = m.structure.p();
  const int n = q_count(m);
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula it = it_type(av);
  std::vector<Formula> wparts{f_bool()};
  auto ks = kappas(half_width(p));
  wparts.insert(wparts.end(), ks.begin(), ks.end());
  wparts.push_back(av);
  Formula W = f_tensor_n(wparts);

  // step : K -o W -o W, one free iterator copy
  Name ghat = Names::fresh("g");
  Name kk = Names::fresh("k''");
  Name wv = Names::fresh("w");
  Name bflag = Names::fresh("b");
  std::vector<Name> sv;
  for (int i = 0; i < half_width(p); ++i) sv.push_back(Names::fresh("s"));
  Name lv = Names::fresh("l");
  Name e1 = Names::fresh("e1");
  Name e2 = Names::fresh("e2");
  Name zz = Names::fresh("z");
  Deriv keep = d_app(d_id(ghat, it), d_id(sv[0], f_kappa()));
  Deriv skip = d_lam(zz, d_id(zz, av));
  Deriv guard = d_if_core(d_id(bflag, f_bool()), keep, skip);
  Deriv tail = d_app(guard, d_id(lv, av));
  std::vector<Deriv> parts{lal_true(), d_id(e1, f_kappa()), d_id(e2, f_kappa())};
  if (half_width(p) >= 2) parts.push_back(d_id(sv[1], f_kappa()));
  for (int i = 2; i + 1 < half_width(p); ++i)
    parts.push_back(d_id(sv[i], f_kappa()));
  parts.push_back(tail);
  Deriv newwin = d_tensor_n(parts);
  std::vector<std::pair<Name, Formula>> cells;
  for (Name nm : sv) cells.emplace_back(nm, f_kappa());
  newwin = weaken_missing(newwin, cells);
  Deriv duped = d_let_tensor(d_app(d_ax_dup(), d_id(kk, f_kappa())), {e1, e2},
                             newwin);
  std::vector<Name> wpat{bflag};
  wpat.insert(wpat.end(), sv.begin(), sv.end());
  wpat.push_back(lv);
  Deriv step = d_lam(kk, d_lam(wv, d_let_tensor(d_id(wv, W), wpat, duped)));

  // bases
  Name xn = Names::fresh("x");
  Name xp = Names::fresh("x'");
  Name xhn = Names::fresh("xh");
  Name xhp = Names::fresh("xh'");
  auto base = [&](Name endpoint) {
    std::vector<Deriv> bp{lal_false()};
    for (int i = 0; i < half_width(p); ++i) bp.push_back(d_ax_star());
    bp.push_back(d_id(endpoint, av));
    return d_para(d_tensor_n(bp));
  };

  Name cv = Names::fresh("c");
  Deriv scrut = d_app(
      d_app(d_app(d_inst(d_id(cv, conf_type(n)), W), d_bang(step)), base(xhn)),
      base(xhp));

  // final payload: open both windows inside one box
  Name wa = Names::fresh("wa");
  Name wb = Names::fresh("wb");
  Name qv = Names::fresh("q");
  Name b1 = Names::fresh("b1");
  Name b2 = Names::fresh("b2");
  std::vector<Name> n1, n2;
  for (int i = 0; i < half_width(p); ++i) {
    n1.push_back(Names::fresh("m"));
    n2.push_back(Names::fresh("m"));
  }
  Name ll1 = Names::fresh("r1");
  Name ll2 = Names::fresh("r2");
  std::vector<Deriv> outparts{d_id(ll1, av)};
  for (Name nm : n1) outparts.push_back(d_id(nm, f_kappa()));
  for (Name nm : n2) outparts.push_back(d_id(nm, f_kappa()));
  outparts.push_back(d_id(ll2, av));
  outparts.push_back(d_id(qv, q_type(n)));
  Deriv result = d_tensor_n(outparts);
  result = d_weak(result, {{b1, f_bool(), Discharge::None},
                           {b2, f_bool(), Discharge::None}});
  std::vector<Name> pat2{b2};
  pat2.insert(pat2.end(), n2.begin(), n2.end());
  pat2.push_back(ll2);
  Deriv open2 = d_let_tensor(d_id(wb, W), pat2, result);
  std::vector<Name> pat1{b1};
  pat1.insert(pat1.end(), n1.begin(), n1.end());
  pat1.push_back(ll1);
  Deriv open1 = d_let_tensor(d_id(wa, W), pat1, open2);

  Deriv boxed = d_let_para_tensor(scrut, {wa, wb, qv}, open1);
  Deriv after_xp = d_letpara(d_id(xp, f_para(av)), xhp, boxed);
  Deriv after_xn = d_letpara(d_id(xn, f_para(av)), xhn, after_xp);
  Name gv = Names::fresh("g");
  Deriv after_g = d_letbang(d_id(gv, f_bang(it)), ghat, after_xn);
  Deriv lams = d_lam(gv, d_lam(xn, d_lam(xp, after_g)));
  // binder order: g, x, x'
  return d_lam(cv, d_gen(lams, a));
}

Term build_c2cw(const Machine& m) { return subject(build_c2cw_deriv(m)); }

Term build_next_conf(const Machine& m) {
  Name a = Names::fresh("a");
  Name qv = Names::fresh("q");
  Term spine = mk_var(qv);
  for (const auto& st : m.all_states())
    spine = mk_app(spine, subject(compile_action_build(m, st, a).deriv));
  return mk_abs(qv, spine);
}

Deriv build_c2c_deriv(const Machine& m) {
  const int p = m.structure.p();
  const int n = q_count(m);
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula it = it_type(av);
  Formula WIN = win_formula(a, p);
  Formula RES = res_formula(a, n);

  std::vector<ActionBuild> acts;
  for (const auto& st : m.all_states())
    acts.push_back(compile_action_build(m, st, a));

  Name cv = Names::fresh("c");
  Name gv = Names::fresh("g");
  Name gc = Names::fresh("g");
  Name xn = Names::fresh("x");
  Name xp = Names::fresh("x'");
  Deriv cw_applied = d_app(
      d_app(d_app(d_inst(d_app(build_c2cw_deriv(m), d_id(cv, conf_type(n))), av),
                  d_bang(d_id(gc, it))),
            d_id(xn, f_para(av))),
      d_id(xp, f_para(av)));

  Name l1 = Names::fresh("l1");
  Name l2 = Names::fresh("l2");
  Name qv = Names::fresh("q");
  std::vector<Name> n1, n2;
  for (int i = 0; i < half_width(p); ++i) {
    n1.push_back(Names::fresh("k"));
    n2.push_back(Names::fresh("k"));
  }
  Deriv sel = d_inst(d_inst(d_id(qv, q_type(n)), WIN), RES);
  for (const auto& act : acts) sel = d_app(sel, act.deriv);
  std::vector<Deriv> winparts{d_id(l1, av)};
  for (Name nm : n1) winparts.push_back(d_id(nm, f_kappa()));
  for (Name nm : n2) winparts.push_back(d_id(nm, f_kappa()));
  winparts.push_back(d_id(l2, av));
  Deriv window = d_tensor_n(winparts);
  Deriv content = d_app(sel, window);

  std::vector<Name> flat{l1};
  flat.insert(flat.end(), n1.begin(), n1.end());
  flat.insert(flat.end(), n2.begin(), n2.end());
  flat.push_back(l2);
  flat.push_back(qv);
  std::set<Name> bang_part;
  for (const auto& act : acts)
    for (Name g : act.gs) bang_part.insert(g);
  Deriv boxed = d_let_para_tensor(cw_applied, flat, content, bang_part);
  for (const auto& act : acts)
    for (Name g : act.gs) boxed = d_contract(boxed, gc, g, gc);
  Deriv after_g = d_letbang(d_id(gv, f_bang(it)), gc, boxed);
  Deriv lams = d_lam(gv, d_lam(xn, d_lam(xp, after_g)));
  return d_lam(cv, d_gen(lams, a));
}

Term build_c2c(const Machine& m) { return subject(build_c2c_deriv(m)); }

TP build_tP(const std::vector<uint64_t>& coeffs) {
  TPoly tp = lal_t_poly(coeffs);
  return {subject(tp.deriv), tp.k};
}

namespace {

Deriv init_deriv(const Machine& m) {
  const int n = q_count(m);
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula it = it_type(av);
  Name lv = Names::fresh("l");
  Name gv = Names::fresh("g");
  Name ghat = Names::fresh("g");
  Name xn = Names::fresh("x");
  Name xp = Names::fresh("x'");
  Name xhn = Names::fresh("xh");
  Name xhp = Names::fresh("xh'");
  Name T = Names::fresh("T");
  Deriv content = d_tensor_n({d_id(xhn, av),
                              d_app(d_id(T, f_lolli(av, av)), d_id(xhp, av)),
                              encode_state_deriv(m, m.initial)});
  Deriv boxed = d_para(content);
  Deriv after_xp = d_letpara(d_id(xp, f_para(av)), xhp, boxed);
  Deriv after_xn = d_letpara(d_id(xn, f_para(av)), xhn, after_xp);
  Deriv fold_l = d_app(d_inst(d_id(lv, f_list(f_kappa())), av),
                       d_bang(d_id(ghat, it)));
  Deriv after_t = d_letpara(fold_l, T, after_xn);
  Deriv after_g = d_letbang(d_id(gv, f_bang(it)), ghat, after_t);
  Deriv lams = d_lam(gv, d_lam(xn, d_lam(xp, after_g)));
  return d_lam(lv, d_gen(lams, a));
}

Deriv extract_deriv(const Machine& m) {
  const int n = q_count(m);
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula aa = f_lolli(av, av);
  Name cv = Names::fresh("c");
  Name gv = Names::fresh("g");
  Name ghat = Names::fresh("g");
  Name k = Names::fresh("k");
  Name h = Names::fresh("h");
  Name z = Names::fresh("z");
  // iterator at instance a -o a: \k. \h. \z. ((g)k)((h)z)
  Deriv iter_body = d_lam(
      z, d_app(d_app(d_id(ghat, it_type(av)), d_id(k, f_kappa())),
               d_app(d_id(h, aa), d_id(z, av))));
  Deriv iter = d_lam(k, d_lam(h, iter_body));
  Name w1 = Names::fresh("z");
  Name w2 = Names::fresh("z");
  auto ident = [&](Name nm) { return d_para(d_lam(nm, d_id(nm, av))); };
  Deriv scrut = d_app(
      d_app(d_app(d_inst(d_id(cv, conf_type(n)), aa), d_bang(iter)), ident(w1)),
      ident(w2));
  Name Fn = Names::fresh("Fn");
  Name Fp = Names::fresh("Fp");
  Name qv = Names::fresh("q");
  Deriv content = d_weak(d_id(Fp, aa), {{Fn, aa, Discharge::None},
                                        {qv, q_type(n), Discharge::None}});
  Deriv boxed = d_let_para_tensor(scrut, {Fn, Fp, qv}, content);
  Deriv after_g = d_letbang(d_id(gv, f_bang(it_type(av))), ghat, boxed);
  return d_lam(cv, d_gen(d_lam(gv, after_g), a));
}

// Closed per-element conser for finite carriers: \t. cons of the literal v.
Deriv cons_literal(const KElement& v) {
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula it = it_type(av);
  Name t = Names::fresh("t");
  Name f = Names::fresh("f");
  Name fa = Names::fresh("f'");
  Name fb = Names::fresh("f'");
  Name T = Names::fresh("T");
  Name x = Names::fresh("x");
  Deriv chain = d_lam(
      x, d_app(d_app(d_id(fb, it), d_ax_k(v)),
               d_app(d_id(T, f_lolli(av, av)), d_id(x, av))));
  Deriv boxed = d_para(chain, {fb});
  Deriv fold_t = d_app(d_inst(d_id(t, f_list(f_kappa())), av),
                       d_bang(d_id(fa, it)));
  Deriv opened = d_letpara(fold_t, T, boxed);
  Deriv merged = d_contract(opened, fa, fb, fa);
  Deriv after_f = d_letbang(d_id(f, f_bang(it)), fa, merged);
  return d_lam(t, d_gen(d_lam(f, after_f), a));
}

// Finite carriers only: fold with a per-element dispatch between the closed
// consers, counting along the way.
Deriv ilength_deriv(const Machine& m) {
  auto elems = m.structure.carrier_elements();
  if (elems.size() != 2)
    throw CompilationError("typed Ilength needs a two-element carrier");
  Formula B = f_tensor(f_list(f_kappa()), f_nat());
  Name k = Names::fresh("k");
  Name pr = Names::fresh("p");
  Name t = Names::fresh("t");
  Name mm = Names::fresh("m");
  // rho_eq(k, e1) picks cons_{e1} else cons_{e0}
  Deriv test = d_ax_rho(m.structure, 0);
  test = d_app(test, d_id(k, f_kappa()));
  test = d_app(test, d_ax_k(elems[1]));
  for (int i = 2; i < m.structure.p(); ++i) test = d_app(test, d_ax_star());
  Deriv choose = d_if_core(test, cons_literal(elems[1]), cons_literal(elems[0]));
  Deriv new_list = d_app(choose, d_id(t, f_list(f_kappa())));
  Deriv new_count = d_app(lal_succ(), d_id(mm, f_nat()));
  Deriv pair = d_tensor(new_list, new_count);
  Deriv step = d_lam(k, d_lam(pr, d_let_tensor(d_id(pr, B), {t, mm}, pair)));
  Deriv base = d_para(d_tensor(lal_nil(f_kappa()), lal_zero()));
  Name lv = Names::fresh("l");
  Deriv folded = d_app(
      d_app(d_app(lal_fold(f_kappa(), B), d_bang(step)), base),
      d_id(lv, f_list(f_kappa())));
  return d_lam(lv, folded);
}

// Dynamically correct list splitter for any carrier (not derivable:
// the generic conser abstracts a kappa under $).
Term ilength_term_dynamic() {
  Name k = Names::fresh("k");
  Name t = Names::fresh("t");
  Name g = Names::fresh("g");
  Name gp = Names::fresh("g'");
  Name T = Names::fresh("T");
  Name x = Names::fresh("x");
  Term chain = mk_abs(
      x, mk_app(mk_app(mk_var(gp), mk_var(k)),
                mk_app(mk_var(T), mk_var(x))));
  Term cons = mk_abs(
      k, mk_abs(t, mk_abs(g, mk_letbang(mk_var(g), gp,
                                        mk_letpara(mk_app(mk_var(t),
                                                          mk_bang(mk_var(gp))),
                                                   T, mk_para(chain))))));
  Name k2 = Names::fresh("k");
  Name pr = Names::fresh("p");
  Name tl = Names::fresh("t");
  Name mm = Names::fresh("m");
  Term step = mk_abs(
      k2, mk_abs(pr, mk_let_tensor(
                         mk_var(pr), {tl, mm},
                         mk_tensor({mk_app(mk_app(cons, mk_var(k2)), mk_var(tl)),
                                    mk_app(subject(lal_succ()), mk_var(mm))}))));
  Term base = mk_para(mk_tensor({mk_nil(), mk_nat(0)}));
  Name lv = Names::fresh("l");
  return mk_abs(lv, mk_app(mk_app(mk_app(mk_fold(), mk_bang(step)), base),
                           mk_var(lv)));
}

}  // namespace

Plumbing build_data_plumbing(const Machine& m) {
  Plumbing p;
  p.length = lal_length();
  p.init = init_deriv(m);
  p.extract = extract_deriv(m);
  if (m.structure.finite_carrier()) {
    p.ilength = ilength_deriv(m);
    p.ilength_term = subject(*p.ilength);
  } else {
    p.ilength_term = ilength_term_dynamic();
  }
  return p;
}

namespace {

// ---- term-level assembly of u (used directly for infinite carriers) ------

struct TermPipeline {
  Term ilength, tP, c2c, init, extract;
  int k = 0;
};

Term assemble_u_term(const TermPipeline& tp) {
  Name l = Names::fresh("l");
  // final stage: the list is split once more inside the iteration box so
  // that its binder sits at the same depth as its use
  auto final_stage = [&](Term m_term, Name lv) {
    Name F = Names::fresh("F");
    Name z = Names::fresh("z");
    Name lf = Names::fresh("l");
    Name junk = Names::fresh("n");
    Term c0 = mk_app(tp.init, mk_var(lf));
    Term content = mk_app(tp.extract, mk_app(mk_var(F), c0));
    Term opened = mk_let_tensor(mk_var(z), {lf, junk}, content);
    Term boxed = mk_letpara(mk_app(m_term, mk_bang(tp.c2c)), F, mk_para(opened));
    return mk_letpara(mk_app(tp.ilength, mk_var(lv)), z, boxed);
  };
  std::function<Term(int, Name, Term)> stage = [&](int j, Name lj,
                                                   Term yscrut) -> Term {
    if (j > tp.k) return final_stage(yscrut, lj);
    Name lnext = Names::fresh("l");
    Name junk = Names::fresh("n");
    Name ynext = Names::fresh("y");
    Name zj = Names::fresh("z");
    Term inner = stage(j + 1, lnext, mk_var(ynext));
    Term opened = mk_let_tensor(mk_var(zj), {lnext, junk}, inner);
    Term body = mk_letpara(yscrut, ynext, mk_para(opened));
    return mk_letpara(mk_app(tp.ilength, mk_var(lj)), zj, body);
  };
  Name l1 = Names::fresh("l");
  Name nn = Names::fresh("n");
  Term top_inner;
  if (tp.k == 0) {
    top_inner = final_stage(mk_app(tp.tP, mk_var(nn)), l1);
  } else {
    // stage 1 consumes (tP) n directly
    Name lnext = Names::fresh("l");
    Name junk = Names::fresh("n");
    Name ynext = Names::fresh("y");
    Name zj = Names::fresh("z");
    Term inner = stage(2, lnext, mk_var(ynext));
    Term opened = mk_let_tensor(mk_var(zj), {lnext, junk}, inner);
    Term body = mk_letpara(mk_app(tp.tP, mk_var(nn)), ynext, mk_para(opened));
    top_inner = mk_letpara(mk_app(tp.ilength, mk_var(l1)), zj, body);
  }
  Name z0 = Names::fresh("z");
  Term top_opened = mk_let_tensor(mk_var(z0), {l1, nn}, top_inner);
  Term top = mk_letpara(mk_app(tp.ilength, mk_var(l)), z0, mk_para(top_opened));
  return mk_abs(l, top);
}

// ---- derivation-level assembly (finite carriers) --------------------------

struct DerivPipeline {
  Deriv ilength, tP, c2c, init, extract;
  int k = 0;
  Formula list = f_list(f_kappa());
};

Deriv assemble_u_deriv(const DerivPipeline& dp) {
  auto final_stage = [&](const Deriv& m_deriv, Name lv) {
    Name F = Names::fresh("F");
    Name z = Names::fresh("z");
    Name lf = Names::fresh("l");
    Name junk = Names::fresh("n");
    Formula cc = concl(dp.c2c).type;          // C -o C
    Formula C = expand(cc)->a;
    Deriv c0 = d_app(dp.init, d_id(lf, dp.list));
    Deriv content = d_app(dp.extract, d_app(d_id(F, cc), c0));
    content = d_weak(content, {{junk, f_nat(), Discharge::None}});
    Deriv opened = d_let_tensor(d_id(z, f_tensor(dp.list, f_nat())),
                                {lf, junk}, content);
    Deriv iter = d_app(d_inst(m_deriv, C), d_bang(dp.c2c));
    Deriv boxed = d_letpara(iter, F, d_para(opened));
    return d_letpara(d_app(dp.ilength, d_id(lv, dp.list)), z, boxed);
  };
  // Explicit loop to keep the scrutinee wiring straight.
  std::function<Deriv(int, Name, const Deriv&)> build =
      [&](int j, Name lj, const Deriv& yscrut) -> Deriv {
    if (j > dp.k) return final_stage(yscrut, lj);
    Name lnext = Names::fresh("l");
    Name junk = Names::fresh("n");
    Name ynext = Names::fresh("y");
    Name zj = Names::fresh("z");
    Formula ytype = f_para_n(f_nat(), dp.k - j);
    Deriv inner = build(j + 1, lnext, d_id(ynext, ytype));
    inner = d_weak(inner, {{junk, f_nat(), Discharge::None}});
    Deriv opened = d_let_tensor(d_id(zj, f_tensor(dp.list, f_nat())),
                                {lnext, junk}, inner);
    Deriv body = d_letpara(yscrut, ynext, d_para(opened));
    return d_letpara(d_app(dp.ilength, d_id(lj, dp.list)), zj, body);
  };
  Name l = Names::fresh("l");
  Name l1 = Names::fresh("l");
  Name nn = Names::fresh("n");
  Name z0 = Names::fresh("z");
  Deriv top_inner;
  if (dp.k == 0) {
    top_inner = final_stage(d_app(dp.tP, d_id(nn, f_nat())), l1);
  } else {
    Name lnext = Names::fresh("l");
    Name junk = Names::fresh("n");
    Name ynext = Names::fresh("y");
    Name zj = Names::fresh("z");
    Formula ytype = f_para_n(f_nat(), dp.k - 1);
    Deriv inner = build(2, lnext, d_id(ynext, ytype));
    inner = d_weak(inner, {{junk, f_nat(), Discharge::None}});
    Deriv opened = d_let_tensor(d_id(zj, f_tensor(dp.list, f_nat())),
                                {lnext, junk}, inner);
    Deriv body = d_letpara(d_app(dp.tP, d_id(nn, f_nat())), ynext,
                           d_para(opened));
    top_inner = d_letpara(d_app(dp.ilength, d_id(l1, dp.list)), zj, body);
  }
  Deriv top_opened = d_let_tensor(d_id(z0, f_tensor(dp.list, f_nat())),
                                  {l1, nn}, top_inner);
  Deriv top = d_letpara(d_app(dp.ilength, d_id(l, dp.list)), z0,
                        d_para(top_opened));
  return d_lam(l, top);
}

}  // namespace

CompiledMachine compile_machine(const Machine& m) {
  MachineReport v = validate_machine(m);
  if (!v.ok()) throw CompilationError("machine invalid: " + v.entries[0]);
  auto sample = sample_inputs(m, 4, 2024, 3);
  MachineReport b = step_count_bound_check(m, sample);
  if (!b.ok())
    throw CompilationError("polynomial bound check failed: " + b.entries[0]);

  CompiledMachine out;
  TPoly tp = lal_t_poly(m.polynomial);
  out.tP = subject(tp.deriv);
  out.tP_k = tp.k;
  Deriv c2cD = build_c2c_deriv(m);
  out.c2c = subject(c2cD);
  out.c2cw = build_c2cw(m);
  Plumbing plumbing = build_data_plumbing(m);
  for (const auto& st : m.all_states()) {
    out.state_terms[st] = encode_state(m, st);
    out.action_terms[st] = compile_action(m, st);
  }
  out.d = tp.k + 2;

  if (m.structure.finite_carrier()) {
    DerivPipeline dp;
    dp.ilength = *plumbing.ilength;
    dp.tP = tp.deriv;
    dp.c2c = c2cD;
    dp.init = plumbing.init;
    dp.extract = plumbing.extract;
    dp.k = tp.k;
    Deriv u = assemble_u_deriv(dp);
    try {
      check_derivation(u, &m.structure);
    } catch (const CheckError& e) {
      throw CompilationError(std::string("compiled derivation rejected: ") +
                             e.what());
    }
    Formula want = f_lolli(f_list(f_kappa()),
                           f_para_n(f_list(f_kappa()), out.d));
    if (!formula_equal(concl(u).type, want))
      throw CompilationError("compiled term has unexpected type " +
                             print_formula(concl(u).type));
    out.derivation = u;
    out.term = subject(u);
  } else {
    TermPipeline tpl;
    tpl.ilength = plumbing.ilength_term;
    tpl.tP = out.tP;
    tpl.c2c = out.c2c;
    tpl.init = subject(plumbing.init);
    tpl.extract = subject(plumbing.extract);
    tpl.k = tp.k;
    out.term = assemble_u_term(tpl);
    out.derivation_note =
        "list splitting over an infinite carrier has no derivation under the "
        "sequent rules (the generic conser binds a kappa under $); the "
        "emitted term follows the same pipeline and is checked dynamically";
  }
  WfReport wf = well_formed(out.term);
  if (!wf.ok())
    throw CompilationError("compiled term ill-formed: " + wf.violations[0]);
  return out;
}

std::map<std::string, Deriv> library_derivations(const Machine& m) {
  std::map<std::string, Deriv> out;
  out.emplace("true", lal_true());
  out.emplace("false", lal_false());
  out.emplace("zero", lal_zero());
  out.emplace("succ", lal_succ());
  out.emplace("add", lal_add());
  out.emplace("mult", lal_mult_banged());
  out.emplace("flat", lal_flat());
  out.emplace("regen", lal_regen());
  out.emplace("length", lal_length());
  out.emplace("nil", lal_nil(f_kappa()));
  Name fa = Names::global("'A");
  Name fb = Names::global("'B");
  out.emplace("fold", lal_fold(f_tvar(fa), f_tvar(fb)));
  out.emplace("tP_n", lal_t_poly({0, 1}).deriv);
  out.emplace("tP_2n+2", lal_t_poly({2, 2}).deriv);
  out.emplace("tP_n^2", lal_t_poly({0, 0, 1}).deriv);
  out.emplace("c2cw", build_c2cw_deriv(m));
  out.emplace("c2c", build_c2c_deriv(m));
  Plumbing p = build_data_plumbing(m);
  out.emplace("init", p.init);
  out.emplace("extract", p.extract);
  if (p.ilength) out.emplace("ilength", *p.ilength);
  for (const auto& st : m.all_states())
    out.emplace("state_" + st, encode_state_deriv(m, st));
  return out;
}

Deriv config_deriv(const Machine& m, const Configuration& c) {
  const int n = q_count(m);
  Name a = Names::fresh("a");
  Formula av = f_tvar(a);
  Formula it = it_type(av);
  Name gv = Names::fresh("g");
  Name xn = Names::fresh("x");
  Name xp = Names::fresh("x'");
  Name xhn = Names::fresh("xh");
  Name xhp = Names::fresh("xh'");
  std::vector<Name> gs;
  auto chain = [&](const std::vector<KElement>& cells, Name endpoint) {
    Deriv core = d_id(endpoint, av);
    for (size_t i = cells.size(); i-- > 0;) {
      Name g = Names::fresh("g");
      gs.push_back(g);
      Deriv cell = cells[i].is_blank() ? d_ax_star() : d_ax_k(cells[i]);
      core = d_app(d_app(d_id(g, it), cell), core);
    }
    return core;
  };
  Deriv neg = chain(c.neg, xhn);
  Deriv pos = chain(c.pos, xhp);
  Deriv payload = d_tensor_n({neg, pos, encode_state_deriv(m, c.state)});
  Deriv boxed = d_para(payload, std::set<Name>(gs.begin(), gs.end()));
  Name g0;
  if (gs.empty()) {
    g0 = Names::fresh("g");
    boxed = d_weak(boxed, {{g0, it, Discharge::Bang}});
  } else {
    g0 = gs[0];
    for (size_t i = 1; i < gs.size(); ++i) boxed = d_contract(boxed, g0, gs[i], g0);
  }
  Deriv after_xp = d_letpara(d_id(xp, f_para(av)), xhp, boxed);
  Deriv after_xn = d_letpara(d_id(xn, f_para(av)), xhn, after_xp);
  Deriv after_g = d_letbang(d_id(gv, f_bang(it)), g0, after_xn);
  return d_gen(d_lam(gv, d_lam(xn, d_lam(xp, after_g))), a);
}

DecodedConfig decode_config(const Term& conf, int n_states, uint64_t fuel) {
  Name G = Names::fresh("%g");
  Name X = Names::fresh("%x");
  Name Xp = Names::fresh("%x'");
  Term applied = mk_app(mk_app(mk_app(erase(conf).t, mk_var(G)), mk_var(X)),
                        mk_var(Xp));
  Term nf = normalize_untyped(UntypedTerm{applied}, fuel).t;
  // expect \y.((y) NEG) (\y'.((y') POS) SEL)
  auto open_pair = [](const Term& t, Term& l, Term& r) {
    if (t->kind != TermKind::Abs) throw IllFormedSpineError("not a pair");
    const TermNode* b = t->a.get();
    if (b->kind != TermKind::App || b->a->kind != TermKind::App ||
        b->a->a->kind != TermKind::Var || b->a->a->var != t->var)
      throw IllFormedSpineError("not a pair");
    l = b->a->b;
    r = b->b;
  };
  auto read_list = [&](Term t, Name endpoint) {
    std::vector<KElement> out;
    const TermNode* cur = t.get();
    while (true) {
      if (cur->kind == TermKind::Var && cur->var == endpoint) return out;
      if (cur->kind == TermKind::App && cur->a->kind == TermKind::App &&
          cur->a->a->kind == TermKind::Var && cur->a->a->var == G &&
          cur->a->b->kind == TermKind::Const) {
        const Constant& k = cur->a->b->cnst;
        out.push_back(k.kind == ConstKind::Star ? KElement::blank() : k.value);
        cur = cur->b.get();
        continue;
      }
      throw IllFormedSpineError("tape spine malformed");
    }
  };
  Term negpos, selwrap, negt, post;
  open_pair(nf, negt, selwrap);
  Term sel;
  open_pair(selwrap, post, sel);
  (void)negpos;
  DecodedConfig out;
  out.neg = read_list(negt, X);
  out.pos = read_list(post, Xp);
  // selector: \x0...\x_{n-1}.\v.(x_i) v
  const TermNode* cur = sel.get();
  std::vector<Name> binders;
  while (cur->kind == TermKind::Abs) {
    binders.push_back(cur->var);
    cur = cur->a.get();
  }
  if (binders.size() != static_cast<size_t>(n_states) + 1 ||
      cur->kind != TermKind::App || cur->a->kind != TermKind::Var ||
      cur->b->kind != TermKind::Var || cur->b->var != binders.back())
    throw IllFormedSpineError("state selector malformed");
  for (size_t i = 0; i + 1 < binders.size(); ++i)
    if (binders[i] == cur->a->var) out.state_index = static_cast<int>(i);
  if (out.state_index < 0) throw IllFormedSpineError("state selector malformed");
  return out;
}

std::vector<KElement> trim_blanks(std::vector<KElement> v) {
  while (!v.empty() && v.back().is_blank()) v.pop_back();
  return v;
}

Term apply_compiled(const CompiledMachine& cm, const std::vector<KElement>& w) {
  return mk_app(cm.term, mk_klist(w));
}

CompiledRun run_compiled(const CompiledMachine& cm, const Machine& m,
                         const std::vector<KElement>& w) {
  Term applied = apply_compiled(cm, w);
  NormalizeResult res = normalize_standard(applied, m.structure);
  CompiledRun out;
  out.output = trim_blanks(decode_klist(erase(res.term), 1u << 22));
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace lak
