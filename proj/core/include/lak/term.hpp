#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lak/kelement.hpp"
#include "lak/names.hpp"

namespace lak {

enum class TermKind : uint8_t { Var, Abs, App, Bang, Para, LetBang, LetPara, Const };

enum class ConstKind : uint8_t { KVal, Star, Dup, Op, Rho };

struct Constant {
  ConstKind kind = ConstKind::Star;
  int index = 0;    // Op/Rho index into the active structure
  KElement value;   // KVal payload

  bool operator==(const Constant& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case ConstKind::KVal: return value == o.value;
      case ConstKind::Op:
      case ConstKind::Rho: return index == o.index;
      default: return true;
    }
  }
};

class TermNode;
using Term = std::shared_ptr<const TermNode>;

class TermNode {
 public:
  TermKind kind;
  Name var = 0;    // Var name; binder of Abs/LetBang/LetPara
  Constant cnst;   // Const payload
  Term a, b;       // Abs: a=body. App: a=fun, b=arg. Bang/Para: a=body.
                   // LetBang/LetPara: a=scrutinee, b=body.

  uint32_t size() const { return size_; }
  uint64_t measure() const { return measure_; }
  uint32_t depth() const { return depth_; }
  uint64_t redex_mask_nonbang() const { return mask_nonbang_; }
  uint64_t redex_mask_bang() const { return mask_bang_; }
  const std::vector<Name>& free_vars() const { return free_; }
  bool has_free(Name x) const;
  bool closed() const { return free_.empty(); }

 private:
  friend Term make_node(TermNode&&);
  uint32_t size_ = 0;
  uint64_t measure_ = 0;
  uint32_t depth_ = 0;
  uint64_t mask_nonbang_ = 0;
  uint64_t mask_bang_ = 0;
  std::vector<Name> free_;
};

// Node constructors (caches are computed here).
Term mk_var(Name x);
Term mk_abs(Name x, Term body);
Term mk_app(Term fun, Term arg);
Term mk_bang(Term body);
Term mk_para(Term body);
Term mk_letbang(Term scrutinee, Name x, Term body);
Term mk_letpara(Term scrutinee, Name x, Term body);
Term mk_const(Constant c);
Term mk_kval(const KElement& v);  // blank collapses to star
Term mk_star();
Term mk_dup();
Term mk_op(int i);
Term mk_rho(int i);

inline Term mk_app(Term f, Term a1, Term a2) {
  return mk_app(mk_app(std::move(f), std::move(a1)), std::move(a2));
}
inline Term mk_app(Term f, Term a1, Term a2, Term a3) {
  return mk_app(mk_app(std::move(f), std::move(a1), std::move(a2)), std::move(a3));
}

bool is_value_literal(const Term& t);  // underlined k or star

// Capture-avoiding substitution t[u/x].
Term substitute(const Term& t, Name x, const Term& u);

// Alpha-equivalence (free variables compare by identity).
bool alpha_equal(const Term& s, const Term& t);

// Number of free occurrences of x in t.
uint32_t count_occurrences(const Term& t, Name x);

uint32_t depth_of(const Term& t, const std::vector<uint8_t>& position);

// Well-formedness per the affine conditions: a !-subterm has at most one
// free-variable occurrence; lambda- and let-$-bound variables occur at most
// once (let-!-bound variables are unrestricted).
struct WfReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
WfReport well_formed(const Term& t);

// The erasure: drops ! and $ and substitutes lets away. The result contains
// only Var/Abs/App/Const nodes.
struct UntypedTerm {
  Term t;
};
UntypedTerm erase(const Term& t);

}  // namespace lak
