#include "lak/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "lak/errors.hpp"

namespace lak {

namespace {

Formula node(FKind k, Name v, Formula a, Formula b) {
  auto f = std::make_shared<FNode>();
  f->kind = k;
  f->var = v;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

}  // namespace

Formula f_tvar(Name a) { return node(FKind::TVar, a, {}, {}); }
Formula f_lolli(Formula a, Formula b) {
  return node(FKind::Lolli, 0, std::move(a), std::move(b));
}
Formula f_bang(Formula a) { return node(FKind::Bang, 0, std::move(a), {}); }
Formula f_para(Formula a) { return node(FKind::Para, 0, std::move(a), {}); }
Formula f_para_n(Formula a, int n) {
  Formula out = std::move(a);
  for (int i = 0; i < n; ++i) out = f_para(out);
  return out;
}
Formula f_forall(Name v, Formula a) {
  return node(FKind::Forall, v, std::move(a), {});
}
Formula f_kappa() { return node(FKind::Kappa, 0, {}, {}); }
Formula f_bool() { return node(FKind::BoolT, 0, {}, {}); }
Formula f_nat() { return node(FKind::NatT, 0, {}, {}); }
Formula f_list(Formula a) { return node(FKind::ListT, 0, std::move(a), {}); }
Formula f_tensor(Formula a, Formula b) {
  return node(FKind::TensorT, 0, std::move(a), std::move(b));
}

Formula f_tensor_n(const std::vector<Formula>& parts) {
  if (parts.empty()) throw Error("empty tensor type");
  Formula acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = f_tensor(parts[i], acc);
  return acc;
}

Formula f_kappa_pow(int p) {
  if (p < 1) throw Error("kappa power needs p >= 1");
  std::vector<Formula> parts(static_cast<size_t>(p), f_kappa());
  return f_tensor_n(parts);
}

Formula expand(const Formula& f) {
  switch (f->kind) {
    case FKind::TVar:
    case FKind::Kappa:
      return f;
    case FKind::Lolli: {
      Formula a = expand(f->a), b = expand(f->b);
      return (a == f->a && b == f->b) ? f : f_lolli(a, b);
    }
    case FKind::Bang: {
      Formula a = expand(f->a);
      return a == f->a ? f : f_bang(a);
    }
    case FKind::Para: {
      Formula a = expand(f->a);
      return a == f->a ? f : f_para(a);
    }
    case FKind::Forall: {
      Formula a = expand(f->a);
      return a == f->a ? f : f_forall(f->var, a);
    }
    case FKind::BoolT: {
      Name a = Names::fresh("a");
      return f_forall(a, f_lolli(f_tvar(a), f_lolli(f_tvar(a), f_tvar(a))));
    }
    case FKind::NatT: {
      Name a = Names::fresh("a");
      Formula step = f_lolli(f_tvar(a), f_tvar(a));
      return f_forall(a, f_lolli(f_bang(step), f_para(step)));
    }
    case FKind::ListT: {
      Name a = Names::fresh("a");
      Formula elem = expand(f->a);
      Formula step = f_lolli(elem, f_lolli(f_tvar(a), f_tvar(a)));
      return f_forall(a, f_lolli(f_bang(step),
                                 f_para(f_lolli(f_tvar(a), f_tvar(a)))));
    }
    case FKind::TensorT: {
      Name c = Names::fresh("c");
      Formula a = expand(f->a), b = expand(f->b);
      return f_forall(
          c, f_lolli(f_lolli(a, f_lolli(b, f_tvar(c))), f_tvar(c)));
    }
  }
  return f;
}

namespace {

bool alpha_eq(const Formula& x, const Formula& y,
              std::vector<std::pair<Name, Name>>& env) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case FKind::TVar: {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == x->var || it->second == y->var)
          return it->first == x->var && it->second == y->var;
      return x->var == y->var;
    }
    case FKind::Kappa:
    case FKind::BoolT:
    case FKind::NatT:
      return true;
    case FKind::Lolli:
    case FKind::TensorT:
      return alpha_eq(x->a, y->a, env) && alpha_eq(x->b, y->b, env);
    case FKind::Bang:
    case FKind::Para:
    case FKind::ListT:
      return alpha_eq(x->a, y->a, env);
    case FKind::Forall: {
      env.emplace_back(x->var, y->var);
      bool ok = alpha_eq(x->a, y->a, env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool formula_equal(const Formula& x, const Formula& y) {
  std::vector<std::pair<Name, Name>> env;
  Formula ex = expand(x), ey = expand(y);
  return alpha_eq(ex, ey, env);
}

Formula subst_tvar(const Formula& f, Name v, const Formula& b) {
  switch (f->kind) {
    case FKind::TVar:
      return f->var == v ? b : f;
    case FKind::Kappa:
    case FKind::BoolT:
    case FKind::NatT:
      return f;
    case FKind::Lolli:
      return f_lolli(subst_tvar(f->a, v, b), subst_tvar(f->b, v, b));
    case FKind::TensorT:
      return f_tensor(subst_tvar(f->a, v, b), subst_tvar(f->b, v, b));
    case FKind::Bang:
      return f_bang(subst_tvar(f->a, v, b));
    case FKind::Para:
      return f_para(subst_tvar(f->a, v, b));
    case FKind::ListT:
      return f_list(subst_tvar(f->a, v, b));
    case FKind::Forall: {
      if (f->var == v) return f;
      if (tvar_free_in(b, f->var)) {
        Name fresh = Names::fresh_like(f->var);
        Formula renamed = subst_tvar(f->a, f->var, f_tvar(fresh));
        return f_forall(fresh, subst_tvar(renamed, v, b));
      }
      return f_forall(f->var, subst_tvar(f->a, v, b));
    }
  }
  return f;
}

namespace {

void collect_free(const Formula& f, std::vector<Name>& bound,
                  std::vector<Name>& out) {
  switch (f->kind) {
    case FKind::TVar:
      if (std::find(bound.begin(), bound.end(), f->var) == bound.end())
        out.push_back(f->var);
      return;
    case FKind::Forall:
      bound.push_back(f->var);
      collect_free(f->a, bound, out);
      bound.pop_back();
      return;
    default:
      if (f->a) collect_free(f->a, bound, out);
      if (f->b) collect_free(f->b, bound, out);
  }
}

}  // namespace

std::vector<Name> free_tvars(const Formula& f) {
  std::vector<Name> bound, out;
  collect_free(f, bound, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool tvar_free_in(const Formula& f, Name v) {
  auto frees = free_tvars(f);
  return std::binary_search(frees.begin(), frees.end(), v);
}

namespace {

struct Matcher {
  Name hole;
  std::vector<std::pair<Name, Name>> env;  // pattern binder <-> target binder
  std::vector<Formula> candidates;

  bool go(const Formula& p, const Formula& t) {
    if (p->kind == FKind::TVar && p->var == hole) {
      bool shadowed = false;
      for (auto& e : env)
        if (e.first == hole) shadowed = true;
      if (!shadowed) {
        // the captured subformula must not depend on target-side binders
        for (auto& e : env)
          if (tvar_free_in(t, e.second)) return false;
        candidates.push_back(t);
        return true;
      }
    }
    if (p->kind != t->kind) return false;
    switch (p->kind) {
      case FKind::TVar: {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->first == p->var || it->second == t->var)
            return it->first == p->var && it->second == t->var;
        return p->var == t->var;
      }
      case FKind::Kappa:
      case FKind::BoolT:
      case FKind::NatT:
        return true;
      case FKind::Lolli:
      case FKind::TensorT:
        return go(p->a, t->a) && go(p->b, t->b);
      case FKind::Bang:
      case FKind::Para:
      case FKind::ListT:
        return go(p->a, t->a);
      case FKind::Forall: {
        env.emplace_back(p->var, t->var);
        bool ok = go(p->a, t->a);
        env.pop_back();
        return ok;
      }
    }
    return false;
  }
};

}  // namespace

MatchResult match_instance(const Formula& pattern, Name hole,
                           const Formula& target) {
  Matcher m{hole, {}, {}};
  if (!m.go(expand(pattern), expand(target))) return {};
  MatchResult out;
  out.ok = true;
  if (!m.candidates.empty()) {
    out.instance = m.candidates[0];
    for (const auto& c : m.candidates)
      if (!formula_equal(c, out.instance)) return {};
  }
  return out;
}

Formula erase_formula(const Formula& f) {
  Formula e = expand(f);
  switch (e->kind) {
    case FKind::TVar:
    case FKind::Kappa:
      return e;
    case FKind::Bang:
    case FKind::Para:
      return erase_formula(e->a);
    case FKind::Lolli:
      return f_lolli(erase_formula(e->a), erase_formula(e->b));
    case FKind::Forall:
      return f_forall(e->var, erase_formula(e->a));
    default:
      throw Error("erase_formula: unexpanded alias");
  }
}

namespace {

struct FPrinter {
  std::map<Name, std::string> display;
  bool qualified = false;

  void scan(const Formula& f) {
    if (f->kind == FKind::TVar || f->kind == FKind::Forall) {
      if (!display.count(f->var)) {
        std::string base = Names::base_of(f->var);
        if (!base.empty() && base[0] == '\'') base = base.substr(1);
        if (qualified) {
          base += "_" + std::to_string(f->var);
        } else {
          for (auto& [id, nm] : display)
            if (nm == base) {
              base += "_" + std::to_string(f->var);
              break;
            }
        }
        display[f->var] = base;
      }
    }
    if (f->a) scan(f->a);
    if (f->b) scan(f->b);
  }

  std::string atom(const Formula& f) {
    switch (f->kind) {
      case FKind::TVar: return display.at(f->var);
      case FKind::Kappa: return "K";
      case FKind::BoolT: return "Bool";
      case FKind::NatT: return "N";
      case FKind::ListT: return "List(" + print(f->a) + ")";
      case FKind::Bang: return "!" + atom(f->a);
      case FKind::Para: return "$" + atom(f->a);
      default: return "(" + print(f) + ")";
    }
  }

  std::string tensor(const Formula& f) {
    if (f->kind == FKind::TensorT) return atom(f->a) + " * " + tensor(f->b);
    return atom(f);
  }

  std::string print(const Formula& f) {
    if (f->kind == FKind::Forall)
      return "forall " + display.at(f->var) + ". " + print(f->a);
    if (f->kind == FKind::Lolli) return tensor(f->a) + " -o " + print(f->b);
    return tensor(f);
  }
};

struct FParser {
  std::string_view src;
  size_t i = 0;
  std::vector<std::pair<std::string, Name>> scope;

  void ws() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
  }
  bool eat(std::string_view tok) {
    ws();
    if (src.substr(i, tok.size()) == tok) {
      // words must not run into identifier characters
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t end = i + tok.size();
        if (end < src.size() &&
            (std::isalnum(static_cast<unsigned char>(src[end])) ||
             src[end] == '_' || src[end] == '\''))
          return false;
      }
      i += tok.size();
      return true;
    }
    return false;
  }
  std::string ident() {
    ws();
    size_t start = i;
    while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                              src[i] == '_' || src[i] == '\''))
      ++i;
    if (start == i) throw ParseError("expected type variable in formula");
    return std::string(src.substr(start, i - start));
  }

  Name lookup(const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    return Names::global("'" + name);  // type variables live in their own space
  }

  Formula formula() {
    ws();
    if (eat("forall")) {
      std::string v = ident();
      ws();
      if (!eat(".")) throw ParseError("expected '.' after forall binder");
      Name id = Names::fresh(v);
      scope.emplace_back(v, id);
      Formula body = formula();
      scope.pop_back();
      return f_forall(id, body);
    }
    Formula left = tensor();
    ws();
    if (eat("-o")) return f_lolli(left, formula());
    return left;
  }

  Formula tensor() {
    Formula left = atom();
    ws();
    if (i < src.size() && src[i] == '*') {
      ++i;
      return f_tensor(left, tensor());
    }
    return left;
  }

  Formula atom() {
    ws();
    if (i >= src.size()) throw ParseError("unexpected end of formula");
    char c = src[i];
    if (c == '(') {
      ++i;
      Formula f = formula();
      ws();
      if (i >= src.size() || src[i] != ')') throw ParseError("expected ')'");
      ++i;
      return f;
    }
    if (c == '!') {
      ++i;
      return f_bang(atom());
    }
    if (c == '$') {
      ++i;
      return f_para(atom());
    }
    if (eat("List")) {
      ws();
      if (i >= src.size() || src[i] != '(')
        throw ParseError("List needs a parenthesized argument");
      ++i;
      Formula a = formula();
      ws();
      if (i >= src.size() || src[i] != ')') throw ParseError("expected ')'");
      ++i;
      return f_list(a);
    }
    if (eat("Bool")) return f_bool();
    if (eat("K")) return f_kappa();
    if (eat("N")) return f_nat();
    return f_tvar(lookup(ident()));
  }
};

}  // namespace

std::string print_formula(const Formula& f) {
  FPrinter p;
  p.scan(f);
  return p.print(f);
}

std::string print_formula_qualified(const Formula& f) {
  FPrinter p;
  p.qualified = true;
  p.scan(f);
  return p.print(f);
}

Formula parse_formula(std::string_view text) {
  FParser p{text};
  Formula f = p.formula();
  p.ws();
  if (p.i != text.size()) throw ParseError("trailing characters in formula");
  return f;
}

}  // namespace lak
