#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lak/names.hpp"

namespace lak {

enum class FKind : uint8_t {
  TVar, Lolli, Bang, Para, Forall, Kappa, BoolT, NatT, ListT, TensorT
};

class FNode;
using Formula = std::shared_ptr<const FNode>;

class FNode {
 public:
  FKind kind;
  Name var = 0;   // TVar name / Forall binder
  Formula a, b;   // Lolli: a -o b. Bang/Para/ListT: a. Forall: a. TensorT: a (x) b.
};

Formula f_tvar(Name a);
Formula f_lolli(Formula a, Formula b);
Formula f_bang(Formula a);
Formula f_para(Formula a);
Formula f_para_n(Formula a, int n);
Formula f_forall(Name v, Formula a);
Formula f_kappa();
Formula f_bool();
Formula f_nat();
Formula f_list(Formula a);
Formula f_tensor(Formula a, Formula b);
Formula f_tensor_n(const std::vector<Formula>& parts);  // right-nested
Formula f_kappa_pow(int p);

// Expands Bool/N/List/Tensor aliases away (one pass, aliases contain no
// aliases afterwards).
Formula expand(const Formula& f);

// Alpha-equivalence modulo alias expansion.
bool formula_equal(const Formula& x, const Formula& y);

Formula subst_tvar(const Formula& f, Name v, const Formula& b);

std::vector<Name> free_tvars(const Formula& f);
bool tvar_free_in(const Formula& f, Name v);

// Matches expand(pattern)[B/hole] against expand(target). ok is false when no
// B works; instance is empty when the hole does not occur (any B works).
struct MatchResult {
  bool ok = false;
  Formula instance;
};
MatchResult match_instance(const Formula& pattern, Name hole,
                           const Formula& target);

// System-F-style erasure: exponentials dropped, -o read as the function
// arrow, foralls kept.
Formula erase_formula(const Formula& f);

std::string print_formula(const Formula& f);
// every type variable printed as base_<id>; used by the derivation files
std::string print_formula_qualified(const Formula& f);
Formula parse_formula(std::string_view text);

}  // namespace lak
