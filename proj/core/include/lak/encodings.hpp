#pragma once

#include <vector>

#include "lak/term.hpp"

namespace lak {

// Church/LAL data encodings (all tensor forms are emitted desugared).
Term mk_bool(bool b);
Term mk_nat(uint64_t n);
Term mk_klist(const std::vector<KElement>& values);
Term mk_nil();

// if b then u1 else u2 == (((b) \z.u1) \z.u2) star with z fresh.
Term mk_if(Term b, Term u1, Term u2);

// t1 (x) t2 (x) ... tn, right-nested: \y. ((y) t1) (t2 (x) ... tn)
Term mk_tensor(const std::vector<Term>& parts);

// let u be x1 (x) ... (x) xn in t  ==  (u) \x1. \w. ((w) \x2. ... ) ...
Term mk_let_tensor(Term scrutinee, const std::vector<Name>& names, Term body);

// \x1 (x) ... (x) xn. t
Term mk_abs_tensor(const std::vector<Name>& names, Term body);

// fold over List(A): \F. \b. \l. let (l) F be $g in let b be $b' in $((g) b')
Term mk_fold();

// Readback of erased normal forms: applies the term to inert symbols,
// normalizes under fuel, and reads the constructor spine.
std::vector<KElement> decode_klist(const UntypedTerm& t, uint64_t fuel);
uint64_t decode_nat(const UntypedTerm& t, uint64_t fuel);
bool decode_bool(const UntypedTerm& t, uint64_t fuel);

}  // namespace lak
