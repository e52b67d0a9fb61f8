#include "lak/derivation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lak/encodings.hpp"
#include "lak/errors.hpp"
#include "lak/syntax.hpp"

namespace lak {

const char* rule_tag(Rule r) {
  switch (r) {
    case Rule::Id: return "Id";
    case Rule::Cut: return "Cut";
    case Rule::Weak: return "Weak";
    case Rule::Cntr: return "Cntr";
    case Rule::LolliL: return "LolliL";
    case Rule::LolliR: return "LolliR";
    case Rule::AllL: return "AllL";
    case Rule::AllR: return "AllR";
    case Rule::BangL: return "BangL";
    case Rule::BangR: return "BangR";
    case Rule::ParaL: return "ParaL";
    case Rule::ParaR: return "ParaR";
    case Rule::TensL: return "TensL";
    case Rule::TensR: return "TensR";
    case Rule::Ite: return "Ite";
    case Rule::AxK: return "AxK";
    case Rule::AxStar: return "AxStar";
    case Rule::AxDup: return "AxDup";
    case Rule::AxOp: return "AxOp";
    case Rule::AxRho: return "AxRho";
  }
  return "?";
}

Deriv mk_dnode(Rule rule, Judgment conclusion, std::vector<Deriv> premises) {
  auto d = std::make_shared<DNode>();
  d->rule = rule;
  d->conclusion = std::move(conclusion);
  d->premises = std::move(premises);
  return Deriv(d);
}

size_t derivation_size(const Deriv& d) {
  size_t n = 1;
  for (const auto& p : d->premises) n += derivation_size(p);
  return n;
}

namespace {

using Ctx = std::vector<ContextEntry>;

const ContextEntry* find_entry(const Ctx& ctx, Name x) {
  for (const auto& e : ctx)
    if (e.var == x) return &e;
  return nullptr;
}

bool entry_equal(const ContextEntry& a, const ContextEntry& b) {
  return a.var == b.var && a.discharge == b.discharge &&
         formula_equal(a.formula, b.formula);
}

bool ctx_equal(const Ctx& a, const Ctx& b) {
  if (a.size() != b.size()) return false;
  for (const auto& e : a) {
    const ContextEntry* o = find_entry(b, e.var);
    if (!o || !entry_equal(e, *o)) return false;
  }
  return true;
}

// a == b (+) extra, as multisets keyed by variable name
bool ctx_is_union(const Ctx& whole, const Ctx& part1, const Ctx& part2) {
  if (whole.size() != part1.size() + part2.size()) return false;
  for (const auto& e : whole) {
    const ContextEntry* o = find_entry(part1, e.var);
    if (!o) o = find_entry(part2, e.var);
    if (!o || !entry_equal(e, *o)) return false;
  }
  for (const auto& e : part1)
    if (find_entry(part2, e.var)) return false;
  return true;
}

Ctx ctx_without(const Ctx& ctx, Name x) {
  Ctx out;
  for (const auto& e : ctx)
    if (e.var != x) out.push_back(e);
  return out;
}

std::vector<Name> ctx_minus_names(const Ctx& a, const Ctx& b) {
  std::vector<Name> out;
  for (const auto& e : a)
    if (!find_entry(b, e.var)) out.push_back(e.var);
  return out;
}

struct Checker {
  const Structure* structure;

  [[noreturn]] void fail(const std::string& path, const std::string& reason) {
    throw CheckError(path, reason);
  }

  void need(bool cond, const std::string& path, const std::string& reason) {
    if (!cond) fail(path, reason);
  }

  Judgment check(const Deriv& d, const std::string& path) {
    std::vector<Judgment> prem;
    for (size_t i = 0; i < d->premises.size(); ++i)
      prem.push_back(check(d->premises[i], path + "." + std::to_string(i)));
    const Judgment& c = d->conclusion;
    switch (d->rule) {
      case Rule::Id: {
        need(prem.empty(), path, "Id takes no premises");
        need(c.ctx.size() == 1 && c.ctx[0].discharge == Discharge::None, path,
             "Id needs exactly one plain context entry");
        need(c.subject->kind == TermKind::Var && c.subject->var == c.ctx[0].var,
             path, "Id subject must be its context variable");
        need(formula_equal(c.type, c.ctx[0].formula), path,
             "Id type differs from the hypothesis");
        break;
      }
      case Rule::AxK: {
        need(prem.empty() && c.ctx.empty(), path, "axiom with context");
        need(c.subject->kind == TermKind::Const &&
                 c.subject->cnst.kind == ConstKind::KVal,
             path, "kappa axiom subject must be a value constant");
        need(formula_equal(c.type, f_kappa()), path, "kappa axiom types K");
        break;
      }
      case Rule::AxStar: {
        need(prem.empty() && c.ctx.empty(), path, "axiom with context");
        need(c.subject->kind == TermKind::Const &&
                 c.subject->cnst.kind == ConstKind::Star,
             path, "star axiom subject must be star");
        need(formula_equal(c.type, f_kappa()), path, "star axiom types K");
        break;
      }
      case Rule::AxDup: {
        need(prem.empty() && c.ctx.empty(), path, "axiom with context");
        need(c.subject->kind == TermKind::Const &&
                 c.subject->cnst.kind == ConstKind::Dup,
             path, "dup axiom subject must be dup");
        need(formula_equal(c.type,
                           f_lolli(f_kappa(), f_tensor(f_kappa(), f_kappa()))),
             path, "dup must be typed K -o K * K");
        break;
      }
      case Rule::AxOp:
      case Rule::AxRho: {
        need(prem.empty() && c.ctx.empty(), path, "axiom with context");
        need(structure != nullptr, path, "op/rho axioms need an active structure");
        bool is_op = d->rule == Rule::AxOp;
        need(c.subject->kind == TermKind::Const &&
                 c.subject->cnst.kind ==
                     (is_op ? ConstKind::Op : ConstKind::Rho),
             path, "axiom subject constant mismatch");
        int idx = c.subject->cnst.index;
        size_t count = is_op ? structure->ops().size() : structure->rels().size();
        need(idx >= 0 && static_cast<size_t>(idx) < count, path,
             "constant index out of range for the structure");
        Formula want = is_op ? f_kappa() : f_bool();
        for (int k = 0; k < structure->p(); ++k) want = f_lolli(f_kappa(), want);
        need(formula_equal(c.type, want), path,
             is_op ? "op must be typed K^p -o K" : "rho must be typed K^p -o Bool");
        break;
      }
      case Rule::Cut: {
        need(prem.size() == 2, path, "Cut takes two premises");
        const Judgment& u = prem[0];
        const Judgment& t = prem[1];
        need(formula_equal(c.type, t.type), path, "Cut changes the type");
        bool found = false;
        for (const auto& e : t.ctx) {
          if (e.discharge != Discharge::None) continue;
          if (!formula_equal(e.formula, u.type)) continue;
          if (find_entry(c.ctx, e.var)) continue;
          if (!ctx_is_union(c.ctx, u.ctx, ctx_without(t.ctx, e.var))) continue;
          if (!alpha_equal(c.subject, substitute(t.subject, e.var, u.subject)))
            continue;
          found = true;
          break;
        }
        need(found, path, "no cut variable explains the conclusion");
        break;
      }
      case Rule::Weak: {
        need(prem.size() == 1, path, "Weak takes one premise");
        const Judgment& p = prem[0];
        need(alpha_equal(c.subject, p.subject), path, "Weak changes the subject");
        need(formula_equal(c.type, p.type), path, "Weak changes the type");
        need(c.ctx.size() >= p.ctx.size(), path, "Weak shrank the context");
        for (const auto& e : p.ctx) {
          const ContextEntry* o = find_entry(c.ctx, e.var);
          need(o && entry_equal(e, *o), path,
               "Weak altered an existing hypothesis");
        }
        break;
      }
      case Rule::Cntr: {
        need(prem.size() == 1, path, "Cntr takes one premise");
        const Judgment& p = prem[0];
        need(formula_equal(c.type, p.type), path, "Cntr changes the type");
        auto gone = ctx_minus_names(p.ctx, c.ctx);
        auto added = ctx_minus_names(c.ctx, p.ctx);
        Name x = 0, y = 0, z = 0;
        if (gone.size() == 2 && added.size() == 1) {
          x = gone[0];
          y = gone[1];
          z = added[0];
        } else if (gone.size() == 1 && added.empty()) {
          y = gone[0];
          x = z = 0;  // resolved below: z is a premise entry kept in c
        } else {
          fail(path, "Cntr must merge exactly two hypotheses");
        }
        auto try_merge = [&](Name xx, Name yy, Name zz) {
          const ContextEntry* ex = find_entry(p.ctx, xx);
          const ContextEntry* ey = find_entry(p.ctx, yy);
          const ContextEntry* ez = find_entry(c.ctx, zz);
          if (!ex || !ey || !ez) return false;
          if (ex->discharge != Discharge::Bang ||
              ey->discharge != Discharge::Bang ||
              ez->discharge != Discharge::Bang)
            return false;
          if (!formula_equal(ex->formula, ey->formula) ||
              !formula_equal(ex->formula, ez->formula))
            return false;
          if (!ctx_equal(ctx_without(ctx_without(p.ctx, xx), yy),
                         ctx_without(c.ctx, zz)))
            return false;
          Term merged = substitute(substitute(p.subject, xx, mk_var(zz)), yy,
                                   mk_var(zz));
          return alpha_equal(c.subject, merged);
        };
        bool ok = false;
        if (z != 0 || (gone.size() == 2)) {
          ok = try_merge(x, y, z) || try_merge(y, x, z);
        } else {
          for (const auto& e : p.ctx) {
            if (e.var == y || e.discharge != Discharge::Bang) continue;
            if (try_merge(e.var, y, e.var) || try_merge(y, e.var, e.var)) {
              ok = true;
              break;
            }
          }
        }
        need(ok, path, "contraction does not explain the conclusion");
        break;
      }
      case Rule::LolliR: {
        need(prem.size() == 1, path, "LolliR takes one premise");
        const Judgment& p = prem[0];
        Formula t = expand(c.type);
        need(t->kind == FKind::Lolli, path, "LolliR type is not an arrow");
        auto gone = ctx_minus_names(p.ctx, c.ctx);
        need(gone.size() == 1, path, "LolliR must bind exactly one hypothesis");
        const ContextEntry* e = find_entry(p.ctx, gone[0]);
        need(e->discharge == Discharge::None, path,
             "cannot abstract a discharged hypothesis");
        need(formula_equal(e->formula, t->a), path,
             "bound hypothesis type mismatch");
        need(formula_equal(p.type, t->b), path, "body type mismatch");
        need(ctx_equal(c.ctx, ctx_without(p.ctx, e->var)), path,
             "LolliR context mismatch");
        need(alpha_equal(c.subject, mk_abs(e->var, p.subject)), path,
             "LolliR subject is not the abstraction of its premise");
        break;
      }
      case Rule::LolliL: {
        need(prem.size() == 2, path, "LolliL takes two premises");
        const Judgment& u = prem[0];
        const Judgment& t = prem[1];
        need(formula_equal(c.type, t.type), path, "LolliL changes the type");
        bool found = false;
        for (const auto& ex : t.ctx) {
          if (ex.discharge != Discharge::None) continue;
          if (find_entry(c.ctx, ex.var)) continue;
          Formula arrow = f_lolli(u.type, ex.formula);
          for (const auto& ey : c.ctx) {
            if (ey.discharge != Discharge::None) continue;
            if (find_entry(u.ctx, ey.var) || find_entry(t.ctx, ey.var)) continue;
            if (!formula_equal(ey.formula, arrow)) continue;
            Ctx rest = ctx_without(c.ctx, ey.var);
            if (!ctx_is_union(rest, u.ctx, ctx_without(t.ctx, ex.var))) continue;
            Term replaced = substitute(
                t.subject, ex.var, mk_app(mk_var(ey.var), u.subject));
            if (!alpha_equal(c.subject, replaced)) continue;
            found = true;
            break;
          }
          if (found) break;
        }
        need(found, path, "no arrow hypothesis explains the conclusion");
        break;
      }
      case Rule::AllL: {
        need(prem.size() == 1, path, "AllL takes one premise");
        const Judgment& p = prem[0];
        need(formula_equal(c.type, p.type), path, "AllL changes the type");
        need(alpha_equal(c.subject, p.subject), path, "AllL changes the subject");
        bool found = false;
        for (const auto& ce : c.ctx) {
          Formula cf = expand(ce.formula);
          if (cf->kind != FKind::Forall) continue;
          const ContextEntry* pe = find_entry(p.ctx, ce.var);
          if (!pe || pe->discharge != ce.discharge) continue;
          if (!ctx_equal(ctx_without(c.ctx, ce.var),
                         ctx_without(p.ctx, ce.var)))
            continue;
          if (match_instance(cf->a, cf->var, pe->formula).ok) {
            found = true;
            break;
          }
        }
        need(found, path, "no universal hypothesis explains the instance");
        break;
      }
      case Rule::AllR: {
        need(prem.size() == 1, path, "AllR takes one premise");
        const Judgment& p = prem[0];
        need(alpha_equal(c.subject, p.subject), path, "AllR changes the subject");
        need(ctx_equal(c.ctx, p.ctx), path, "AllR changes the context");
        Formula t = expand(c.type);
        need(t->kind == FKind::Forall, path, "AllR type is not universal");
        MatchResult m = match_instance(t->a, t->var, p.type);
        need(m.ok, path, "premise is not an instance of the universal body");
        Name eigen = 0;
        if (m.instance) {
          need(m.instance->kind == FKind::TVar, path,
               "generalization must abstract a type variable");
          eigen = m.instance->var;
          need(!tvar_free_in(c.type, eigen), path,
               "eigenvariable escapes into the conclusion type");
        }
        if (eigen != 0)
          for (const auto& e : c.ctx)
            need(!tvar_free_in(e.formula, eigen), path,
                 "eigenvariable occurs free in the context");
        break;
      }
      case Rule::BangR: {
        need(prem.size() == 1, path, "BangR takes one premise");
        const Judgment& p = prem[0];
        need(p.ctx.size() <= 1, path, "BangR premise allows at most one entry");
        Formula t = expand(c.type);
        need(t->kind == FKind::Bang, path, "BangR type is not banged");
        need(formula_equal(t->a, p.type), path, "BangR body type mismatch");
        need(alpha_equal(c.subject, mk_bang(p.subject)), path,
             "BangR subject is not !premise");
        need(c.ctx.size() == p.ctx.size(), path, "BangR context size mismatch");
        if (!p.ctx.empty()) {
          need(p.ctx[0].discharge == Discharge::None, path,
               "BangR premise entry must be plain");
          need(c.ctx.size() == 1 && c.ctx[0].var == p.ctx[0].var &&
                   c.ctx[0].discharge == Discharge::Bang &&
                   formula_equal(c.ctx[0].formula, p.ctx[0].formula),
               path, "BangR must !-discharge its single hypothesis");
        }
        break;
      }
      case Rule::ParaR: {
        need(prem.size() == 1, path, "ParaR takes one premise");
        const Judgment& p = prem[0];
        Formula t = expand(c.type);
        need(t->kind == FKind::Para, path, "ParaR type is not $-ed");
        need(formula_equal(t->a, p.type), path, "ParaR body type mismatch");
        need(alpha_equal(c.subject, mk_para(p.subject)), path,
             "ParaR subject is not $premise");
        need(c.ctx.size() == p.ctx.size(), path, "ParaR context size mismatch");
        for (const auto& e : p.ctx) {
          need(e.discharge == Discharge::None, path,
               "ParaR premise entries must be plain");
          const ContextEntry* o = find_entry(c.ctx, e.var);
          need(o != nullptr, path, "ParaR lost a hypothesis");
          need(o->discharge != Discharge::None, path,
               "ParaR must discharge every hypothesis");
          need(formula_equal(o->formula, e.formula), path,
               "ParaR changed a hypothesis type");
        }
        break;
      }
      case Rule::BangL:
      case Rule::ParaL: {
        bool is_bang = d->rule == Rule::BangL;
        need(prem.size() == 1, path, "let rule takes one premise");
        const Judgment& p = prem[0];
        need(formula_equal(c.type, p.type), path, "let rule changes the type");
        auto added = ctx_minus_names(c.ctx, p.ctx);
        auto gone = ctx_minus_names(p.ctx, c.ctx);
        need(added.size() == 1 && gone.size() == 1, path,
             "let rule must swap one hypothesis");
        const ContextEntry* ny = find_entry(c.ctx, added[0]);
        const ContextEntry* nx = find_entry(p.ctx, gone[0]);
        need(ny->discharge == Discharge::None, path,
             "let scrutinee hypothesis must be plain");
        need(nx->discharge == (is_bang ? Discharge::Bang : Discharge::Para),
             path, "let-bound hypothesis has the wrong discharge");
        Formula yt = expand(ny->formula);
        need(yt->kind == (is_bang ? FKind::Bang : FKind::Para), path,
             "let scrutinee type lacks its exponential");
        need(formula_equal(yt->a, nx->formula), path,
             "let-bound hypothesis type mismatch");
        need(ctx_equal(ctx_without(c.ctx, ny->var), ctx_without(p.ctx, nx->var)),
             path, "let rule altered the shared context");
        Term want = is_bang
                        ? mk_letbang(mk_var(ny->var), nx->var, p.subject)
                        : mk_letpara(mk_var(ny->var), nx->var, p.subject);
        need(alpha_equal(c.subject, want), path,
             "let subject shape mismatch");
        break;
      }
      case Rule::TensR: {
        need(prem.size() == 2, path, "TensR takes two premises");
        const Judgment& a = prem[0];
        const Judgment& b = prem[1];
        Formula t = expand(c.type);
        // expanded tensors are Forall(c, (A -o B -o c) -o c)
        need(formula_equal(c.type, f_tensor(a.type, b.type)), path,
             "TensR type is not the tensor of its premises");
        (void)t;
        need(ctx_is_union(c.ctx, a.ctx, b.ctx), path,
             "TensR context is not the disjoint union");
        need(alpha_equal(c.subject, mk_tensor({a.subject, b.subject})), path,
             "TensR subject is not the tensor pairing");
        break;
      }
      case Rule::TensL: {
        need(prem.size() == 1, path, "TensL takes one premise");
        const Judgment& p = prem[0];
        need(formula_equal(c.type, p.type), path, "TensL changes the type");
        auto added = ctx_minus_names(c.ctx, p.ctx);
        auto gone = ctx_minus_names(p.ctx, c.ctx);
        need(added.size() == 1 && gone.size() == 2, path,
             "TensL must replace two hypotheses by one");
        const ContextEntry* nz = find_entry(c.ctx, added[0]);
        need(nz->discharge == Discharge::None, path,
             "TensL scrutinee must be plain");
        bool ok = false;
        for (int order = 0; order < 2 && !ok; ++order) {
          Name x = gone[order], y = gone[1 - order];
          const ContextEntry* ex = find_entry(p.ctx, x);
          const ContextEntry* ey = find_entry(p.ctx, y);
          if (ex->discharge != Discharge::None ||
              ey->discharge != Discharge::None)
            continue;
          if (!formula_equal(nz->formula, f_tensor(ex->formula, ey->formula)))
            continue;
          if (!ctx_equal(ctx_without(c.ctx, nz->var),
                         ctx_without(ctx_without(p.ctx, x), y)))
            continue;
          Term want = mk_let_tensor(mk_var(nz->var), {x, y}, p.subject);
          if (!alpha_equal(c.subject, want)) continue;
          ok = true;
        }
        need(ok, path, "TensL does not explain the conclusion");
        break;
      }
      case Rule::Ite: {
        need(prem.size() == 3, path, "Ite takes three premises");
        const Judgment& b = prem[0];
        const Judgment& u1 = prem[1];
        const Judgment& u2 = prem[2];
        need(formula_equal(b.type, f_bool()), path,
             "Ite guard premise must type Bool");
        need(formula_equal(u1.type, c.type) && formula_equal(u2.type, c.type),
             path, "Ite branch types mismatch");
        need(ctx_equal(u1.ctx, u2.ctx), path,
             "Ite branches must share one context");
        need(ctx_is_union(c.ctx, b.ctx, u1.ctx), path,
             "Ite context mismatch");
        Term want = mk_if(b.subject, u1.subject, u2.subject);
        need(alpha_equal(c.subject, want), path,
             "Ite subject is not the conditional expansion");
        break;
      }
    }
    return c;
  }
};

}  // namespace

Judgment check_derivation(const Deriv& d, const Structure* s) {
  Checker checker{s};
  return checker.check(d, "root");
}

// ---------------------------------------------------------------------------
// textual format: s-expressions with {...} atoms holding term/formula syntax

namespace {

struct SexpWriter {
  std::ostringstream out;

  void entry(const ContextEntry& e) {
    out << "(" << Names::base_of(e.var) << "_" << e.var;
    if (e.discharge == Discharge::Bang) out << " !";
    if (e.discharge == Discharge::Para) out << " $";
    out << " {" << print_formula_qualified(e.formula) << "})";
  }

  void node(const Deriv& d, int indent) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    out << pad << "(" << rule_tag(d->rule) << " (";
    for (size_t i = 0; i < d->conclusion.ctx.size(); ++i) {
      if (i) out << " ";
      entry(d->conclusion.ctx[i]);
    }
    out << ") {" << print_term_qualified(d->conclusion.subject) << "} {"
        << print_formula_qualified(d->conclusion.type) << "}";
    if (d->premises.empty()) {
      out << ")\n";
      return;
    }
    out << "\n";
    for (const auto& p : d->premises) node(p, indent + 1);
    out << pad << ")\n";
  }
};

struct Sexp {
  std::string atom;           // nonempty for leaves
  std::vector<Sexp> children; // for lists
  bool is_atom() const { return !atom.empty(); }
};

struct SexpParser {
  std::string_view src;
  size_t i = 0;

  void ws() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
  }

  Sexp parse() {
    ws();
    if (i >= src.size()) throw ParseError("unexpected end of derivation file");
    if (src[i] == '(') {
      ++i;
      Sexp list;
      list.atom.clear();
      while (true) {
        ws();
        if (i >= src.size()) throw ParseError("unterminated s-expression");
        if (src[i] == ')') {
          ++i;
          return list;
        }
        list.children.push_back(parse());
      }
    }
    if (src[i] == '{') {
      size_t depth = 0;
      size_t start = ++i;
      while (i < src.size()) {
        if (src[i] == '{') ++depth;
        if (src[i] == '}') {
          if (depth == 0) break;
          --depth;
        }
        ++i;
      }
      if (i >= src.size()) throw ParseError("unterminated {...} atom");
      Sexp s;
      s.atom = "{" + std::string(src.substr(start, i - start));
      ++i;
      return s;
    }
    size_t start = i;
    while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) &&
           src[i] != '(' && src[i] != ')')
      ++i;
    Sexp s;
    s.atom = std::string(src.substr(start, i - start));
    return s;
  }
};

Rule rule_from_tag(const std::string& tag) {
  for (int r = 0; r <= static_cast<int>(Rule::AxRho); ++r)
    if (tag == rule_tag(static_cast<Rule>(r))) return static_cast<Rule>(r);
  throw ParseError("unknown rule tag '" + tag + "'");
}

std::string braced(const Sexp& s, const char* what) {
  if (!s.is_atom() || s.atom.empty() || s.atom[0] != '{')
    throw ParseError(std::string("expected {...} for ") + what);
  return s.atom.substr(1);
}

Deriv sexp_to_deriv(const Sexp& s, std::map<std::string, Name>& vars) {
  if (s.is_atom() || s.children.size() < 4)
    throw ParseError("malformed derivation node");
  Rule rule = rule_from_tag(s.children[0].atom);
  Judgment j;
  const Sexp& ctx = s.children[1];
  if (ctx.is_atom()) throw ParseError("malformed context");
  for (const auto& e : ctx.children) {
    if (e.is_atom() || e.children.size() < 2)
      throw ParseError("malformed context entry");
    ContextEntry entry;
    std::string vname = e.children[0].atom;
    auto it = vars.find(vname);
    if (it == vars.end()) {
      size_t us = vname.rfind('_');
      std::string base = us == std::string::npos ? vname : vname.substr(0, us);
      it = vars.emplace(vname, Names::fresh(base)).first;
    }
    entry.var = it->second;
    size_t k = 1;
    if (e.children[k].is_atom() && e.children[k].atom == "!") {
      entry.discharge = Discharge::Bang;
      ++k;
    } else if (e.children[k].is_atom() && e.children[k].atom == "$") {
      entry.discharge = Discharge::Para;
      ++k;
    }
    entry.formula = parse_formula(braced(e.children[k], "context formula"));
    j.ctx.push_back(std::move(entry));
  }
  // subjects reuse the context variable ids: rewire the printed names
  Term subject = parse_term(braced(s.children[2], "subject"));
  for (const auto& [printed, id] : vars)
    subject = substitute(subject, Names::global(printed), mk_var(id));
  j.subject = subject;
  j.type = parse_formula(braced(s.children[3], "type"));
  std::vector<Deriv> premises;
  for (size_t k = 4; k < s.children.size(); ++k)
    premises.push_back(sexp_to_deriv(s.children[k], vars));
  return mk_dnode(rule, std::move(j), std::move(premises));
}

}  // namespace

std::string print_judgment(const Judgment& j) {
  std::string out;
  for (size_t i = 0; i < j.ctx.size(); ++i) {
    if (i) out += ", ";
    const auto& e = j.ctx[i];
    out += Names::base_of(e.var) + "_" + std::to_string(e.var);
    if (e.discharge == Discharge::Bang) out += " :! ";
    else if (e.discharge == Discharge::Para) out += " :$ ";
    else out += " : ";
    out += print_formula(e.formula);
  }
  out += " |- " + print_term(j.subject) + " : " + print_formula(j.type);
  return out;
}

std::string print_derivation(const Deriv& d) {
  SexpWriter w;
  w.node(d, 0);
  return w.out.str();
}

Deriv parse_derivation(std::string_view text) {
  SexpParser p{text};
  Sexp s = p.parse();
  std::map<std::string, Name> vars;
  return sexp_to_deriv(s, vars);
}

}  // namespace lak
