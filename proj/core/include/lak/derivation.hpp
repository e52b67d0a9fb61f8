#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lak/formula.hpp"
#include "lak/structure.hpp"
#include "lak/term.hpp"

namespace lak {

enum class Rule : uint8_t {
  Id, Cut, Weak, Cntr, LolliL, LolliR, AllL, AllR, BangL, BangR, ParaL, ParaR,
  TensL, TensR, Ite, AxK, AxStar, AxDup, AxOp, AxRho
};

const char* rule_tag(Rule r);

enum class Discharge : uint8_t { None, Bang, Para };

struct ContextEntry {
  Name var;
  Formula formula;
  Discharge discharge = Discharge::None;
};

struct Judgment {
  std::vector<ContextEntry> ctx;
  Term subject;
  Formula type;
};

struct DNode;
using Deriv = std::shared_ptr<const DNode>;

struct DNode {
  Rule rule;
  Judgment conclusion;
  std::vector<Deriv> premises;
};

Deriv mk_dnode(Rule rule, Judgment conclusion, std::vector<Deriv> premises);

// Validates every node against its rule schema; returns the root judgment or
// throws CheckError pinpointing the first invalid node (premises first).
Judgment check_derivation(const Deriv& d, const Structure* s);

size_t derivation_size(const Deriv& d);

std::string print_judgment(const Judgment& j);
std::string print_derivation(const Deriv& d);
Deriv parse_derivation(std::string_view text);

}  // namespace lak
