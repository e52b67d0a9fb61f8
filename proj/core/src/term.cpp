#include "lak/term.hpp"

#include <algorithm>

#include "lak/errors.hpp"

namespace lak {

Name Names::fresh(std::string base) {
  Names& n = instance();
  std::lock_guard<std::mutex> lock(n.mu_);
  n.bases_.push_back(std::move(base));
  return static_cast<Name>(n.bases_.size() - 1);
}

std::string Names::base_of(Name id) {
  Names& n = instance();
  std::lock_guard<std::mutex> lock(n.mu_);
  return n.bases_.at(id);
}

Name Names::global(const std::string& base) {
  Names& n = instance();
  std::lock_guard<std::mutex> lock(n.mu_);
  auto it = n.globals_.find(base);
  if (it != n.globals_.end()) return it->second;
  n.bases_.push_back(base);
  Name id = static_cast<Name>(n.bases_.size() - 1);
  n.globals_.emplace(base, id);
  return id;
}

Names& Names::instance() {
  static Names names;
  return names;
}

bool TermNode::has_free(Name x) const {
  return std::binary_search(free_.begin(), free_.end(), x);
}

namespace {

std::vector<Name> merge_free(const std::vector<Name>& a,
                             const std::vector<Name>& b) {
  std::vector<Name> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Name> remove_name(std::vector<Name> v, Name x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
  return v;
}

uint64_t shift_mask(uint64_t m, bool deeper) {
  if (!deeper) return m;
  uint64_t top = m & (1ull << 63);
  return (m << 1) | top | ((m & (1ull << 62)) ? (1ull << 63) : 0);
}

bool literal(const Term& t) {
  return t->kind == TermKind::Const && (t->cnst.kind == ConstKind::KVal ||
                                        t->cnst.kind == ConstKind::Star);
}

// A node that may be contracted at its own position (op/rho spines are
// treated as potential redexes regardless of arity; the reduction engine
// re-checks against the active structure).
bool redex_root(const TermNode& n, bool& is_bang_kind) {
  is_bang_kind = false;
  switch (n.kind) {
    case TermKind::App: {
      if (n.a->kind == TermKind::Abs) return true;
      if (n.a->kind == TermKind::LetBang || n.a->kind == TermKind::LetPara)
        return true;  // (com2)
      // dup / op / rho spines of literals
      const TermNode* cur = &n;
      int args = 0;
      bool all_lit = true;
      while (cur->kind == TermKind::App) {
        if (!literal(cur->b)) all_lit = false;
        ++args;
        cur = cur->a.get();
      }
      if (!all_lit || cur->kind != TermKind::Const) return false;
      if (cur->cnst.kind == ConstKind::Dup) return args == 1;
      if (cur->cnst.kind == ConstKind::Op || cur->cnst.kind == ConstKind::Rho)
        return true;
      return false;
    }
    case TermKind::LetBang:
      if (n.a->kind == TermKind::Bang) {
        is_bang_kind = true;
        return true;
      }
      return n.a->kind == TermKind::LetBang || n.a->kind == TermKind::LetPara;
    case TermKind::LetPara:
      return n.a->kind == TermKind::Para || n.a->kind == TermKind::LetBang ||
             n.a->kind == TermKind::LetPara;
    default:
      return false;
  }
}

}  // namespace

Term make_node(TermNode&& n) {
  bool deeper = n.kind == TermKind::Bang || n.kind == TermKind::Para;
  uint64_t nb = 0, bg = 0;
  uint32_t size = 1, depth = 0;
  uint64_t measure = 0;
  std::vector<Name> free;

  switch (n.kind) {
    case TermKind::Var:
      measure = 1;
      free = {n.var};
      break;
    case TermKind::Const:
      switch (n.cnst.kind) {
        case ConstKind::KVal:
        case ConstKind::Star: measure = 1; break;
        case ConstKind::Op: measure = 2; break;
        case ConstKind::Rho: measure = 4; break;
        case ConstKind::Dup: measure = 5; break;
      }
      break;
    case TermKind::Abs:
      size += n.a->size();
      measure = n.a->measure() + 1;
      depth = n.a->depth();
      nb = n.a->redex_mask_nonbang();
      bg = n.a->redex_mask_bang();
      free = remove_name(n.a->free_vars(), n.var);
      break;
    case TermKind::Bang:
    case TermKind::Para:
      size += n.a->size();
      measure = n.a->measure() + 1;
      depth = n.a->depth() + 1;
      nb = shift_mask(n.a->redex_mask_nonbang(), true);
      bg = shift_mask(n.a->redex_mask_bang(), true);
      free = n.a->free_vars();
      break;
    case TermKind::App:
      size += n.a->size() + n.b->size();
      measure = n.a->measure() + n.b->measure() + 1;
      depth = std::max(n.a->depth(), n.b->depth());
      nb = n.a->redex_mask_nonbang() | n.b->redex_mask_nonbang();
      bg = n.a->redex_mask_bang() | n.b->redex_mask_bang();
      free = merge_free(n.a->free_vars(), n.b->free_vars());
      break;
    case TermKind::LetBang:
    case TermKind::LetPara:
      size += n.a->size() + n.b->size();
      measure = n.a->measure() + n.b->measure() + 1;
      depth = std::max(n.a->depth(), n.b->depth());
      nb = n.a->redex_mask_nonbang() | n.b->redex_mask_nonbang();
      bg = n.a->redex_mask_bang() | n.b->redex_mask_bang();
      free = merge_free(n.a->free_vars(), remove_name(n.b->free_vars(), n.var));
      break;
  }
  (void)deeper;

  bool bang_kind = false;
  if (redex_root(n, bang_kind)) {
    if (bang_kind)
      bg |= 1;
    else
      nb |= 1;
  }

  auto out = std::make_shared<TermNode>(std::move(n));
  auto* m = const_cast<TermNode*>(out.get());
  m->size_ = size;
  m->measure_ = measure;
  m->depth_ = depth;
  m->mask_nonbang_ = nb;
  m->mask_bang_ = bg;
  m->free_ = std::move(free);
  return out;
}

Term mk_var(Name x) {
  TermNode n;
  n.kind = TermKind::Var;
  n.var = x;
  return make_node(std::move(n));
}

Term mk_abs(Name x, Term body) {
  TermNode n;
  n.kind = TermKind::Abs;
  n.var = x;
  n.a = std::move(body);
  return make_node(std::move(n));
}

Term mk_app(Term fun, Term arg) {
  TermNode n;
  n.kind = TermKind::App;
  n.a = std::move(fun);
  n.b = std::move(arg);
  return make_node(std::move(n));
}

Term mk_bang(Term body) {
  TermNode n;
  n.kind = TermKind::Bang;
  n.a = std::move(body);
  return make_node(std::move(n));
}

Term mk_para(Term body) {
  TermNode n;
  n.kind = TermKind::Para;
  n.a = std::move(body);
  return make_node(std::move(n));
}

Term mk_letbang(Term scrutinee, Name x, Term body) {
  TermNode n;
  n.kind = TermKind::LetBang;
  n.var = x;
  n.a = std::move(scrutinee);
  n.b = std::move(body);
  return make_node(std::move(n));
}

Term mk_letpara(Term scrutinee, Name x, Term body) {
  TermNode n;
  n.kind = TermKind::LetPara;
  n.var = x;
  n.a = std::move(scrutinee);
  n.b = std::move(body);
  return make_node(std::move(n));
}

Term mk_const(Constant c) {
  TermNode n;
  n.kind = TermKind::Const;
  n.cnst = std::move(c);
  return make_node(std::move(n));
}

Term mk_kval(const KElement& v) {
  if (v.is_blank()) return mk_star();
  Constant c;
  c.kind = ConstKind::KVal;
  c.value = v;
  return mk_const(std::move(c));
}

Term mk_star() {
  Constant c;
  c.kind = ConstKind::Star;
  return mk_const(std::move(c));
}

Term mk_dup() {
  Constant c;
  c.kind = ConstKind::Dup;
  return mk_const(std::move(c));
}

Term mk_op(int i) {
  Constant c;
  c.kind = ConstKind::Op;
  c.index = i;
  return mk_const(std::move(c));
}

Term mk_rho(int i) {
  Constant c;
  c.kind = ConstKind::Rho;
  c.index = i;
  return mk_const(std::move(c));
}

bool is_value_literal(const Term& t) { return literal(t); }

Term substitute(const Term& t, Name x, const Term& u) {
  if (!t->has_free(x)) return t;
  switch (t->kind) {
    case TermKind::Var:
      return u;
    case TermKind::Abs: {
      Name y = t->var;
      Term body = t->a;
      if (u->has_free(y)) {
        Name y2 = Names::fresh_like(y);
        body = substitute(body, y, mk_var(y2));
        y = y2;
      }
      return mk_abs(y, substitute(body, x, u));
    }
    case TermKind::App:
      return mk_app(substitute(t->a, x, u), substitute(t->b, x, u));
    case TermKind::Bang:
      return mk_bang(substitute(t->a, x, u));
    case TermKind::Para:
      return mk_para(substitute(t->a, x, u));
    case TermKind::LetBang:
    case TermKind::LetPara: {
      Term scrut = substitute(t->a, x, u);
      Name y = t->var;
      Term body = t->b;
      if (y == x) {
        // binder shadows x; only the scrutinee changes
      } else {
        if (u->has_free(y)) {
          Name y2 = Names::fresh_like(y);
          body = substitute(body, y, mk_var(y2));
          y = y2;
        }
        body = substitute(body, x, u);
      }
      return t->kind == TermKind::LetBang ? mk_letbang(scrut, y, body)
                                          : mk_letpara(scrut, y, body);
    }
    case TermKind::Const:
      return t;
  }
  return t;
}

namespace {

bool alpha_eq(const Term& s, const Term& t, std::vector<std::pair<Name, Name>>& env) {
  if (s->kind != t->kind) return false;
  auto lookup = [&](Name a, Name b) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == a || it->second == b)
        return it->first == a && it->second == b;
    }
    return a == b;  // both free
  };
  switch (s->kind) {
    case TermKind::Var:
      return lookup(s->var, t->var);
    case TermKind::Const:
      return s->cnst == t->cnst;
    case TermKind::Abs: {
      env.emplace_back(s->var, t->var);
      bool ok = alpha_eq(s->a, t->a, env);
      env.pop_back();
      return ok;
    }
    case TermKind::App:
      return alpha_eq(s->a, t->a, env) && alpha_eq(s->b, t->b, env);
    case TermKind::Bang:
    case TermKind::Para:
      return alpha_eq(s->a, t->a, env);
    case TermKind::LetBang:
    case TermKind::LetPara: {
      if (!alpha_eq(s->a, t->a, env)) return false;
      env.emplace_back(s->var, t->var);
      bool ok = alpha_eq(s->b, t->b, env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const Term& s, const Term& t) {
  std::vector<std::pair<Name, Name>> env;
  return alpha_eq(s, t, env);
}

uint32_t count_occurrences(const Term& t, Name x) {
  if (!t->has_free(x)) return 0;
  switch (t->kind) {
    case TermKind::Var:
      return t->var == x ? 1 : 0;
    case TermKind::Const:
      return 0;
    case TermKind::Abs:
    case TermKind::Bang:
    case TermKind::Para:
      return count_occurrences(t->a, x);
    case TermKind::App:
      return count_occurrences(t->a, x) + count_occurrences(t->b, x);
    case TermKind::LetBang:
    case TermKind::LetPara: {
      uint32_t c = count_occurrences(t->a, x);
      if (t->var != x) c += count_occurrences(t->b, x);
      return c;
    }
  }
  return 0;
}

uint32_t depth_of(const Term& t, const std::vector<uint8_t>& position) {
  const TermNode* cur = t.get();
  uint32_t d = 0;
  for (uint8_t step : position) {
    if (cur->kind == TermKind::Bang || cur->kind == TermKind::Para) ++d;
    const Term& next = step == 0 ? cur->a : cur->b;
    if (!next) throw Error("invalid position");
    cur = next.get();
  }
  return d;
}

namespace {

uint32_t free_occurrence_count(const Term& t) {
  uint32_t total = 0;
  for (Name x : t->free_vars()) total += count_occurrences(t, x);
  return total;
}

void check_wf(const Term& t, std::string path, WfReport& report) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return;
    case TermKind::Bang:
      if (free_occurrence_count(t->a) > 1)
        report.violations.push_back(path + ": !-subterm has " +
                                    std::to_string(free_occurrence_count(t->a)) +
                                    " free variable occurrences");
      check_wf(t->a, path + ".0", report);
      return;
    case TermKind::Para:
      check_wf(t->a, path + ".0", report);
      return;
    case TermKind::Abs:
      if (count_occurrences(t->a, t->var) > 1)
        report.violations.push_back(path + ": lambda-bound '" +
                                    Names::base_of(t->var) +
                                    "' occurs more than once");
      check_wf(t->a, path + ".0", report);
      return;
    case TermKind::App:
      check_wf(t->a, path + ".0", report);
      check_wf(t->b, path + ".1", report);
      return;
    case TermKind::LetBang:
      check_wf(t->a, path + ".0", report);
      check_wf(t->b, path + ".1", report);
      return;
    case TermKind::LetPara:
      if (count_occurrences(t->b, t->var) > 1)
        report.violations.push_back(path + ": $-bound '" +
                                    Names::base_of(t->var) +
                                    "' occurs more than once");
      check_wf(t->a, path + ".0", report);
      check_wf(t->b, path + ".1", report);
      return;
  }
}

}  // namespace

WfReport well_formed(const Term& t) {
  WfReport report;
  check_wf(t, "root", report);
  return report;
}

namespace {

Term erase_term(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return t;
    case TermKind::Abs: {
      Term body = erase_term(t->a);
      return body == t->a ? t : mk_abs(t->var, body);
    }
    case TermKind::App: {
      Term f = erase_term(t->a);
      Term a = erase_term(t->b);
      return (f == t->a && a == t->b) ? t : mk_app(f, a);
    }
    case TermKind::Bang:
    case TermKind::Para:
      return erase_term(t->a);
    case TermKind::LetBang:
    case TermKind::LetPara:
      return substitute(erase_term(t->b), t->var, erase_term(t->a));
  }
  return t;
}

}  // namespace

UntypedTerm erase(const Term& t) { return UntypedTerm{erase_term(t)}; }

}  // namespace lak
