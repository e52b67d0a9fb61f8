#pragma once

#include <map>

#include "lak/derive.hpp"

namespace lak {

// Typed combinators, each carried by a full derivation. Conclusions:
//   zero, numeral(n)        : N
//   succ                    : N -o N
//   add                     : N -o N -o N
//   flat                    : List(K) -o N          (length, same level)
//   regen                   : N -o $N
//   length                  : List(K) -o $N
//   mult_banged             : N -o !N -o $N
//   nat_packs(D)            : N -o $T1,  T_l = !N * $T_{l+1}, T_D = !N
//   t_poly(c)               : N -o $^k N, k recorded
//   lal_true / lal_false    : Bool
//   nil(A)                  : List(A)
//   klist(values)           : List(K)
//   fold(A, B)              : !(A -o B -o B) -o $B -o List(A) -o $B
struct TPoly {
  Deriv deriv;
  int k = 0;
};

Deriv lal_true();
Deriv lal_false();
Deriv lal_zero();
Deriv lal_numeral(uint64_t n);
Deriv lal_succ();
Deriv lal_add();
Deriv lal_flat();
Deriv lal_regen();
Deriv lal_length();
Deriv lal_mult_banged();
Formula pack_type(int levels);
Deriv lal_nat_packs(int levels);
TPoly lal_t_poly(const std::vector<uint64_t>& coeffs);
Deriv lal_nil(const Formula& elem);
Deriv lal_klist(const std::vector<KElement>& values);
Deriv lal_fold(const Formula& a, const Formula& b);

}  // namespace lak
