#pragma once

#include <string>
#include <string_view>

#include "lak/term.hpp"

namespace lak {

// Textual term syntax:
//   \x. t            abstraction
//   (t) u            application
//   !t  $t           exponentials
//   let u be !x in t
//   let u be $x in t
//   t * u            tensor (desugared on parse)
//   let u be x * y in t
//   #k  star  dup  op<i>  rho<i>
Term parse_term(std::string_view text);
std::string print_term(const Term& t);

// Every variable printed as base_<id>; used by the derivation file format so
// subjects and context entries agree on names.
std::string print_term_qualified(const Term& t);

}  // namespace lak
