#pragma once

#include <set>

#include "lak/derivation.hpp"

namespace lak {

// Derivation builders. Each emits primitive rule nodes that check_derivation
// accepts; misuse is reported eagerly as Error. Subjects are determined by
// the premises, so terms fall out of derivations.

Deriv d_id(Name x, Formula a);
Deriv d_ax_k(const KElement& v);
Deriv d_ax_star();
Deriv d_ax_dup();
Deriv d_ax_op(const Structure& s, int i);
Deriv d_ax_rho(const Structure& s, int i);

Deriv d_lam(Name x, const Deriv& body);
Deriv d_app(const Deriv& fun, const Deriv& arg);
Deriv d_inst(const Deriv& d, const Formula& b);   // forall elimination
Deriv d_gen(const Deriv& d, Name alpha);          // forall introduction
Deriv d_bang(const Deriv& d);
Deriv d_para(const Deriv& d, const std::set<Name>& bang_part = {});
Deriv d_letbang(const Deriv& scrut, Name x, const Deriv& body);
Deriv d_letpara(const Deriv& scrut, Name x, const Deriv& body);
Deriv d_contract(const Deriv& d, Name x, Name y, Name z);
Deriv d_weak(const Deriv& d, const std::vector<ContextEntry>& extra);
Deriv d_tensor(const Deriv& a, const Deriv& b);
Deriv d_tensor_n(const std::vector<Deriv>& parts);
Deriv d_let_tensor(const Deriv& scrut, const std::vector<Name>& xs,
                   const Deriv& body);

// Conditional via the ite rule; branch contexts are unified by weakening.
Deriv d_ite(const Deriv& b, const Deriv& u1, const Deriv& u2);
// Conditional via core rules only; branch contexts must be disjoint.
Deriv d_if_core(const Deriv& b, const Deriv& u1, const Deriv& u2);

// let scrut be $(x1 (x) ... (x) xn) in $body  — the payload-opening idiom.
Deriv d_let_para_tensor(const Deriv& scrut, const std::vector<Name>& xs,
                        const Deriv& body, const std::set<Name>& bang_part = {});

inline const Judgment& concl(const Deriv& d) { return d->conclusion; }
inline Term subject(const Deriv& d) { return d->conclusion.subject; }

}  // namespace lak
