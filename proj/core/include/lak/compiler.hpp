#pragma once

#include <optional>

#include "lak/derive.hpp"
#include "lak/machine.hpp"
#include "lak/reduction.hpp"

namespace lak {

// Type schemes for the machine encoding. n is |Q'|, p the uniform arity. The
// window carries the head cell twice per half tape (the branch action both
// tests and restores the head; the second copy keeps actions affine and
// confines dup to c2cw).
Formula q_type(int n);
Formula conf_type(int n);
Formula cw_type(int n, int p);

Deriv encode_state_deriv(const Machine& m, const std::string& q);
Term encode_state(const Machine& m, const std::string& q);

struct ActionBuild {
  Deriv deriv;               // WIN(a) -o RES(a), free iterator copies in gs
  std::vector<Name> gs;      // each used exactly once
};
ActionBuild compile_action_build(const Machine& m, const std::string& q,
                                 Name a_var);
Term compile_action(const Machine& m, const std::string& q);

Deriv build_c2cw_deriv(const Machine& m);
Term build_c2cw(const Machine& m);

// \q. (q) t_0 ... t_{n-1} with one fresh pair of iterator variables per
// action left free (they are bound by the enclosing c2c).
Term build_next_conf(const Machine& m);

Deriv build_c2c_deriv(const Machine& m);
Term build_c2c(const Machine& m);

struct TP {
  Term term;
  int k = 0;
};
TP build_tP(const std::vector<uint64_t>& coeffs);

struct Plumbing {
  Deriv length;                    // List(K) -o $N
  Deriv init;                      // List(K) -o C
  Deriv extract;                   // C -o List(K)
  std::optional<Deriv> ilength;    // List(K) -o $(List(K) * N); finite carriers
  Term ilength_term;               // dynamically correct for every carrier
};
Plumbing build_data_plumbing(const Machine& m);

struct CompiledMachine {
  Term term;
  std::map<std::string, Term> state_terms;
  std::map<std::string, Term> action_terms;
  Term c2cw;
  Term c2c;
  Term tP;
  int tP_k = 0;
  int d = 0;                 // result type is List(K) -o $^d List(K)
  // Present for finite carriers. Over infinite carriers the list-splitting
  // combinator has no derivation under the Fig. 1 rules (see the tests);
  // the emitted term is still the full pipeline and computes correctly.
  std::optional<Deriv> derivation;
  std::string derivation_note;
};

// The full embedding; validates the machine and its polynomial bound first.
CompiledMachine compile_machine(const Machine& m);

// The named combinator corpus: every entry carries a checked derivation.
// c2cw/c2c/init/extract are built for the given machine.
std::map<std::string, Deriv> library_derivations(const Machine& m);

// Typed encoded configuration <f-, f+, q> (ground truth for one-step tests).
Deriv config_deriv(const Machine& m, const Configuration& c);

struct DecodedConfig {
  std::vector<KElement> neg, pos;
  int state_index = -1;
};
DecodedConfig decode_config(const Term& conf, int n_states, uint64_t fuel);

// Applies a compiled machine to an input (wrapping it per banged_input),
// normalizes by the standard strategy and decodes the output tape.
struct CompiledRun {
  std::vector<KElement> output;  // trailing blanks trimmed
  ReductionTrace trace;
};
CompiledRun run_compiled(const CompiledMachine& cm, const Machine& m,
                         const std::vector<KElement>& w);

// A compiled term applied to an encoded input, not yet normalized.
Term apply_compiled(const CompiledMachine& cm, const std::vector<KElement>& w);

std::vector<KElement> trim_blanks(std::vector<KElement> v);

}  // namespace lak
