#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lak/structure.hpp"
#include "lak/term.hpp"

namespace lak {

enum class RuleKind : uint8_t { Beta, BangLet, ParaLet, Com1, Com2, Dup, Op, Rho };

const char* rule_name(RuleKind k);

struct Redex {
  std::vector<uint8_t> position;  // 0 = first child, 1 = second child
  RuleKind kind;
  uint32_t depth = 0;
};

struct TraceStep {
  Redex redex;
  uint64_t measure_after = 0;
};

enum class Phase : uint8_t { NonBang, Bang };

struct Round {
  uint32_t depth;
  Phase phase;
  size_t first_step;  // [first_step, end_step)
  size_t end_step;
};

struct ReductionTrace {
  Term initial;
  std::vector<TraceStep> steps;
  std::vector<Round> rounds;
};

// All redex positions in leftmost-outermost (pre-)order. Op/rho spines must
// be fully applied to p value literals to count.
std::vector<Redex> find_redexes(const Term& t, const Structure& s);

// Contracts the redex at r.position. Throws InvalidRedexError when the
// position does not match r.kind, BlankArgumentError from op/rho evaluation.
Term step(const Term& t, const Redex& r, const Structure& s);

// The theorem-derived fuel: measure(t)^(2^(depth(t)+1)) steps.
BigInt standard_fuel(const Term& t);

struct NormalizeResult {
  Term term;
  ReductionTrace trace;
};

// Round-based standard strategy: per depth j, exhaust non-(!) redexes, then
// (!) redexes, leftmost-outermost within a phase. fuel_override replaces the
// theorem bound when set.
NormalizeResult normalize_standard(const Term& t, const Structure& s,
                                   std::optional<uint64_t> fuel_override = {});

// Leftmost-outermost normalization of erased terms (beta + constant rules).
UntypedTerm normalize_untyped(const UntypedTerm& t, uint64_t fuel);
UntypedTerm normalize_untyped(const UntypedTerm& t, uint64_t fuel,
                              const Structure& s);

// Full normalization with a leftmost-innermost strategy; confluence oracle.
Term normalize_innermost(const Term& t, const Structure& s, uint64_t fuel);

struct BoundsReport {
  std::vector<std::string> violations;
  uint64_t steps = 0;
  BigInt bound;
  bool endpoint_square_holds = true;  // <u> <= <t>^2, reported informationally
  bool ok() const { return violations.empty(); }
};

// Checks the measure lemma per step, the per-round-pair squaring, and the
// total step bound against the trace.
BoundsReport check_bounds(const ReductionTrace& trace);

}  // namespace lak
