#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lak/structure.hpp"

namespace lak {

struct StateSpec {
  enum class Kind { Computation, Branch, Shift };
  Kind kind = Kind::Shift;
  int op = -1;                 // Computation
  int rel = -1;                // Branch
  std::string next;            // Computation / Shift
  std::string next_true, next_false;  // Branch
  bool shift_left = false;     // Shift direction
};

// A BSS machine over a uniformized structure. Q' is the declared states in
// order followed by the accept and reject nodes.
struct Machine {
  Structure structure;
  std::vector<std::string> order;          // declared state ids, q0 first or not
  std::map<std::string, StateSpec> states;
  std::string initial;
  std::string accept;
  std::string reject;
  std::vector<uint64_t> polynomial;        // P(n) = sum_i c_i n^i

  std::vector<std::string> all_states() const;      // Q' enumeration
  int state_index(const std::string& id) const;     // index into all_states()
  bool is_final(const std::string& id) const {
    return id == accept || id == reject;
  }
};

// Finite configuration <f-, f+, q>; both half tapes are stored nearest-cell
// first and kept with trailing blanks trimmed.
struct Configuration {
  std::vector<KElement> neg;
  std::vector<KElement> pos;
  std::string state;

  void canonicalize();
  bool operator==(const Configuration& o) const {
    return neg == o.neg && pos == o.pos && state == o.state;
  }
};

Configuration initial_config(const Machine& m, const std::vector<KElement>& w);

struct StepResult {
  Configuration config;
  bool halted = false;
};
StepResult step_machine(const Machine& m, const Configuration& c);

enum class OutcomeKind { Accepted, Rejected, Timeout };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Timeout;
  std::vector<KElement> output;  // pos of the final configuration, trimmed
  uint64_t steps = 0;
  Configuration final_config;
};

Outcome run(const Machine& m, const std::vector<KElement>& w, uint64_t max_steps);

struct MachineReport {
  std::vector<std::string> entries;
  bool ok() const { return entries.empty(); }
};

MachineReport validate_machine(const Machine& m);

// Runs every sampled input and reports when the declared polynomial fails to
// bound the step count (or the machine does not halt within it).
MachineReport step_count_bound_check(const Machine& m,
                                     const std::vector<std::vector<KElement>>& inputs);

uint64_t eval_polynomial(const std::vector<uint64_t>& coeffs, uint64_t n);

// Deterministic input sampler used to gate compilation: exhaustive words for
// finite carriers, seeded rational lists otherwise.
std::vector<std::vector<KElement>> sample_inputs(const Machine& m, int max_len,
                                                 uint64_t seed, int per_len);

// Machine file format (JSON).
Machine load_machine(const std::string& path);
Machine parse_machine_json(const std::string& text);
std::string machine_to_json(const Machine& m);

}  // namespace lak
