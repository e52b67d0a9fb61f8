#include "lak/reduction.hpp"

#include <algorithm>

#include "lak/encodings.hpp"
#include "lak/errors.hpp"

namespace lak {

Term make_node(TermNode&& n);  // term.cpp

const char* rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Beta: return "beta";
    case RuleKind::BangLet: return "bang";
    case RuleKind::ParaLet: return "para";
    case RuleKind::Com1: return "com1";
    case RuleKind::Com2: return "com2";
    case RuleKind::Dup: return "dup";
    case RuleKind::Op: return "op";
    case RuleKind::Rho: return "rho";
  }
  return "?";
}

namespace {

struct Spine {
  const TermNode* head = nullptr;
  std::vector<const TermNode*> args;  // outermost-last
};

Spine spine_of(const TermNode* n) {
  Spine s;
  const TermNode* cur = n;
  while (cur->kind == TermKind::App) {
    s.args.push_back(cur->b.get());
    cur = cur->a.get();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

bool all_literals(const Spine& s) {
  for (const TermNode* a : s.args)
    if (!(a->kind == TermKind::Const && (a->cnst.kind == ConstKind::KVal ||
                                         a->cnst.kind == ConstKind::Star)))
      return false;
  return true;
}

// Exact redex classification against the active structure.
std::optional<RuleKind> classify(const TermNode* n, const Structure& s) {
  switch (n->kind) {
    case TermKind::App: {
      if (n->a->kind == TermKind::Abs) return RuleKind::Beta;
      if (n->a->kind == TermKind::LetBang || n->a->kind == TermKind::LetPara)
        return RuleKind::Com2;
      Spine sp = spine_of(n);
      if (sp.head->kind != TermKind::Const || !all_literals(sp)) return {};
      const Constant& c = sp.head->cnst;
      if (c.kind == ConstKind::Dup && sp.args.size() == 1) return RuleKind::Dup;
      if (c.kind == ConstKind::Op &&
          c.index >= 0 && static_cast<size_t>(c.index) < s.ops().size() &&
          sp.args.size() == static_cast<size_t>(s.ops()[c.index].arity))
        return RuleKind::Op;
      if (c.kind == ConstKind::Rho &&
          c.index >= 0 && static_cast<size_t>(c.index) < s.rels().size() &&
          sp.args.size() == static_cast<size_t>(s.rels()[c.index].arity))
        return RuleKind::Rho;
      return {};
    }
    case TermKind::LetBang:
      if (n->a->kind == TermKind::Bang) return RuleKind::BangLet;
      if (n->a->kind == TermKind::LetBang || n->a->kind == TermKind::LetPara)
        return RuleKind::Com1;
      return {};
    case TermKind::LetPara:
      if (n->a->kind == TermKind::Para) return RuleKind::ParaLet;
      if (n->a->kind == TermKind::LetBang || n->a->kind == TermKind::LetPara)
        return RuleKind::Com1;
      return {};
    default:
      return {};
  }
}

void collect(const TermNode* n, const Structure& s, uint32_t depth,
             std::vector<uint8_t>& path, std::vector<Redex>& out) {
  if (auto k = classify(n, s)) out.push_back({path, *k, depth});
  uint32_t child_depth =
      depth + (n->kind == TermKind::Bang || n->kind == TermKind::Para ? 1 : 0);
  if (n->a) {
    path.push_back(0);
    collect(n->a.get(), s, child_depth, path, out);
    path.pop_back();
  }
  if (n->b) {
    path.push_back(1);
    collect(n->b.get(), s, child_depth, path, out);
    path.pop_back();
  }
}

bool mask_may_have(const TermNode* n, uint32_t rel_depth, int which) {
  uint64_t m = 0;
  if (which != 1) m |= n->redex_mask_nonbang();
  if (which != 0) m |= n->redex_mask_bang();
  if (rel_depth >= 63) return ((m >> 63) & 1) != 0;
  return ((m >> rel_depth) & 1) != 0;
}

// which: 0 = non-bang kinds, 1 = bang kind, 2 = any
bool find_first(const TermNode* n, const Structure& s, uint32_t target,
                uint32_t depth, int which, std::vector<uint8_t>& path) {
  if (depth > target) return false;
  if (!mask_may_have(n, target - depth, which)) return false;
  if (depth == target) {
    if (auto k = classify(n, s)) {
      bool is_bang = *k == RuleKind::BangLet;
      if (which == 2 || (which == 1) == is_bang) return true;
    }
  }
  uint32_t child_depth =
      depth + (n->kind == TermKind::Bang || n->kind == TermKind::Para ? 1 : 0);
  if (n->a) {
    path.push_back(0);
    if (find_first(n->a.get(), s, target, child_depth, which, path)) return true;
    path.pop_back();
  }
  if (n->b) {
    path.push_back(1);
    if (find_first(n->b.get(), s, target, child_depth, which, path)) return true;
    path.pop_back();
  }
  return false;
}

Term contract(const Term& t, RuleKind kind, const Structure& s) {
  auto expect = [&](bool cond) {
    if (!cond)
      throw InvalidRedexError(std::string("position does not match rule ") +
                              rule_name(kind));
  };
  switch (kind) {
    case RuleKind::Beta:
      expect(t->kind == TermKind::App && t->a->kind == TermKind::Abs);
      return substitute(t->a->a, t->a->var, t->b);
    case RuleKind::BangLet:
      expect(t->kind == TermKind::LetBang && t->a->kind == TermKind::Bang);
      return substitute(t->b, t->var, t->a->a);
    case RuleKind::ParaLet:
      expect(t->kind == TermKind::LetPara && t->a->kind == TermKind::Para);
      return substitute(t->b, t->var, t->a->a);
    case RuleKind::Com1: {
      expect((t->kind == TermKind::LetBang || t->kind == TermKind::LetPara) &&
             (t->a->kind == TermKind::LetBang || t->a->kind == TermKind::LetPara));
      Term inner = t->a;
      Name x = inner->var;
      Term t1 = inner->b;
      if (t->b->has_free(x) || x == t->var) {
        Name x2 = Names::fresh_like(x);
        t1 = substitute(t1, x, mk_var(x2));
        x = x2;
      }
      Term moved = t->kind == TermKind::LetBang ? mk_letbang(t1, t->var, t->b)
                                                : mk_letpara(t1, t->var, t->b);
      return inner->kind == TermKind::LetBang ? mk_letbang(inner->a, x, moved)
                                              : mk_letpara(inner->a, x, moved);
    }
    case RuleKind::Com2: {
      expect(t->kind == TermKind::App && (t->a->kind == TermKind::LetBang ||
                                          t->a->kind == TermKind::LetPara));
      Term let = t->a;
      Name x = let->var;
      Term t1 = let->b;
      if (t->b->has_free(x)) {
        Name x2 = Names::fresh_like(x);
        t1 = substitute(t1, x, mk_var(x2));
        x = x2;
      }
      Term app = mk_app(t1, t->b);
      return let->kind == TermKind::LetBang ? mk_letbang(let->a, x, app)
                                            : mk_letpara(let->a, x, app);
    }
    case RuleKind::Dup: {
      expect(t->kind == TermKind::App && is_value_literal(t->b));
      return mk_tensor({t->b, t->b});
    }
    case RuleKind::Op:
    case RuleKind::Rho: {
      Spine sp = spine_of(t.get());
      expect(sp.head->kind == TermKind::Const);
      std::vector<KElement> args;
      for (const TermNode* a : sp.args) {
        expect(a->kind == TermKind::Const);
        args.push_back(a->cnst.kind == ConstKind::Star ? KElement::blank()
                                                       : a->cnst.value);
      }
      if (kind == RuleKind::Op)
        return mk_kval(apply_op(s, sp.head->cnst.index, args));
      return mk_bool(apply_rel(s, sp.head->cnst.index, args));
    }
  }
  throw InvalidRedexError("unknown rule");
}

Term rebuild(const Term& t, const uint8_t* path, size_t len, RuleKind kind,
             const Structure& s) {
  if (len == 0) return contract(t, kind, s);
  Term child = path[0] == 0 ? t->a : t->b;
  if (!child) throw InvalidRedexError("invalid redex position");
  Term replaced = rebuild(child, path + 1, len - 1, kind, s);
  TermNode n;
  n.kind = t->kind;
  n.var = t->var;
  n.cnst = t->cnst;
  n.a = path[0] == 0 ? replaced : t->a;
  n.b = t->b ? (path[0] == 1 ? replaced : t->b) : Term{};
  return make_node(std::move(n));
}

}  // namespace


std::vector<Redex> find_redexes(const Term& t, const Structure& s) {
  std::vector<Redex> out;
  std::vector<uint8_t> path;
  collect(t.get(), s, 0, path, out);
  return out;
}

Term step(const Term& t, const Redex& r, const Structure& s) {
  return rebuild(t, r.position.data(), r.position.size(), r.kind, s);
}

BigInt standard_fuel(const Term& t) {
  uint32_t d = t->depth();
  uint32_t exp_pow = d + 2 > 24 ? 24u : d + 1;  // cap: bound never binds anyway
  BigInt exponent = BigInt(1) << exp_pow;
  BigInt base = t->measure();
  BigInt out = 1;
  // fast exponentiation over BigInt exponent
  BigInt e = exponent;
  BigInt b = base;
  while (e > 0) {
    if ((e & 1) != 0) out *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return out;
}

NormalizeResult normalize_standard(const Term& t, const Structure& s,
                                   std::optional<uint64_t> fuel_override) {
  BigInt fuel = fuel_override ? BigInt(*fuel_override) : standard_fuel(t);
  ReductionTrace trace;
  trace.initial = t;
  Term cur = t;
  uint64_t steps = 0;

  auto run_phase = [&](uint32_t j, int which) {
    size_t first = trace.steps.size();
    while (true) {
      std::vector<uint8_t> path;
      if (!find_first(cur.get(), s, j, 0, which, path)) break;
      const TermNode* node = cur.get();
      for (uint8_t c : path) node = (c == 0 ? node->a : node->b).get();
      auto k = classify(node, s);
      if (!k) throw InvalidRedexError("internal: stale redex mask");
      Redex r{path, *k, j};
      if (BigInt(steps) >= fuel) {
        trace.rounds.push_back({j, which == 1 ? Phase::Bang : Phase::NonBang,
                                first, trace.steps.size()});
        throw FuelExhaustedError("standard reduction exceeded fuel after " +
                                 std::to_string(steps) + " steps");
      }
      cur = step(cur, r, s);
      ++steps;
      trace.steps.push_back({std::move(r), cur->measure()});
    }
    trace.rounds.push_back(
        {j, which == 1 ? Phase::Bang : Phase::NonBang, first, trace.steps.size()});
  };

  uint32_t j = 0;
  while (true) {
    run_phase(j, 0);
    run_phase(j, 1);
    if (j >= cur->depth()) {
      auto remaining = find_redexes(cur, s);
      if (remaining.empty()) break;
      uint32_t lowest = remaining[0].depth;
      for (const auto& r : remaining) lowest = std::min(lowest, r.depth);
      if (lowest <= j) {
        j = lowest;  // ill-stratified input; keep reducing, fuel guards us
        continue;
      }
    }
    ++j;
  }
  return {cur, std::move(trace)};
}

namespace {

// Leftmost-outermost search over all depths.
bool find_any(const TermNode* n, const Structure& s,
              std::vector<uint8_t>& path) {
  if ((n->redex_mask_nonbang() | n->redex_mask_bang()) == 0) return false;
  if (classify(n, s)) return true;
  if (n->a) {
    path.push_back(0);
    if (find_any(n->a.get(), s, path)) return true;
    path.pop_back();
  }
  if (n->b) {
    path.push_back(1);
    if (find_any(n->b.get(), s, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

UntypedTerm normalize_untyped(const UntypedTerm& t, uint64_t fuel,
                              const Structure& s) {
  Term cur = t.t;
  for (uint64_t n = 0;; ++n) {
    std::vector<uint8_t> path;
    if (!find_any(cur.get(), s, path)) return UntypedTerm{cur};
    if (n >= fuel)
      throw FuelExhaustedError("untyped normalization exceeded fuel of " +
                               std::to_string(fuel));
    const TermNode* node = cur.get();
    for (uint8_t c : path) node = (c == 0 ? node->a : node->b).get();
    auto k = classify(node, s);
    if (!k) throw InvalidRedexError("internal: stale redex mask");
    cur = rebuild(cur, path.data(), path.size(), *k, s);
  }
}

UntypedTerm normalize_untyped(const UntypedTerm& t, uint64_t fuel) {
  static const Structure empty = Structure::gf2();
  return normalize_untyped(t, fuel, empty);
}

namespace {

bool find_innermost(const TermNode* n, const Structure& s,
                    std::vector<uint8_t>& path) {
  if ((n->redex_mask_nonbang() | n->redex_mask_bang()) == 0) return false;
  if (n->a) {
    path.push_back(0);
    if (find_innermost(n->a.get(), s, path)) return true;
    path.pop_back();
  }
  if (n->b) {
    path.push_back(1);
    if (find_innermost(n->b.get(), s, path)) return true;
    path.pop_back();
  }
  return classify(n, s).has_value();
}

}  // namespace

Term normalize_innermost(const Term& t, const Structure& s, uint64_t fuel) {
  Term cur = t;
  for (uint64_t n = 0;; ++n) {
    std::vector<uint8_t> path;
    if (!find_innermost(cur.get(), s, path)) return cur;
    if (n >= fuel)
      throw FuelExhaustedError("innermost normalization exceeded fuel");
    const TermNode* node = cur.get();
    for (uint8_t c : path) node = (c == 0 ? node->a : node->b).get();
    cur = rebuild(cur, path.data(), path.size(), *classify(node, s), s);
  }
}

BoundsReport check_bounds(const ReductionTrace& trace) {
  BoundsReport report;
  report.steps = trace.steps.size();
  report.bound = standard_fuel(trace.initial);
  if (BigInt(report.steps) > report.bound)
    report.violations.push_back("total steps exceed the theorem bound");

  uint64_t prev = trace.initial->measure();
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& st = trace.steps[i];
    uint64_t after = st.measure_after;
    switch (st.redex.kind) {
      case RuleKind::Com1:
      case RuleKind::Com2:
        if (after != prev)
          report.violations.push_back("step " + std::to_string(i) +
                                      " (com) changed the measure");
        break;
      case RuleKind::BangLet:
        break;  // may grow
      default:
        if (after >= prev)
          report.violations.push_back("step " + std::to_string(i) + " (" +
                                      rule_name(st.redex.kind) +
                                      ") did not decrease the measure");
        break;
    }
    prev = after;
  }

  auto measure_before_step = [&](size_t idx) -> uint64_t {
    return idx == 0 ? trace.initial->measure()
                    : trace.steps[idx - 1].measure_after;
  };
  for (size_t r = 0; r + 1 < trace.rounds.size(); ++r) {
    const Round& a = trace.rounds[r];
    const Round& b = trace.rounds[r + 1];
    if (a.phase != Phase::NonBang || b.phase != Phase::Bang ||
        a.depth != b.depth)
      continue;
    uint64_t start = measure_before_step(a.first_step);
    uint64_t end = b.end_step == 0 ? start
                   : b.end_step == a.first_step
                       ? start
                       : (b.end_step > 0 && b.end_step - 1 < trace.steps.size()
                              ? trace.steps[b.end_step - 1].measure_after
                              : start);
    if (BigInt(end) > BigInt(start) * BigInt(start))
      report.violations.push_back("round pair at depth " +
                                  std::to_string(a.depth) +
                                  " exceeded the squaring bound");
  }

  uint64_t final_measure = trace.steps.empty()
                               ? trace.initial->measure()
                               : trace.steps.back().measure_after;
  uint64_t m0 = trace.initial->measure();
  report.endpoint_square_holds = BigInt(final_measure) <= BigInt(m0) * BigInt(m0);
  return report;
}

}  // namespace lak
