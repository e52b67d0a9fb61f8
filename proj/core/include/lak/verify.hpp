#pragma once

#include <optional>

#include "lak/compiler.hpp"

namespace lak {

// Machine-vs-term comparison, the subject of the embedding theorem.
struct CompareRow {
  std::vector<KElement> input;
  std::vector<KElement> machine_output;
  std::vector<KElement> term_output;
  bool agree = false;
  uint64_t machine_steps = 0;
  size_t term_steps = 0;
  bool bounds_ok = false;
  std::string error;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  bool all_agree = true;
  size_t agreements = 0;
};

CompareReport compare_machine(const Machine& m, const CompiledMachine& cm,
                              const std::vector<std::vector<KElement>>& inputs);

// Per-term normalization statistics against the step-bound theorem.
struct BenchRow {
  std::string name;
  uint64_t measure = 0;
  uint32_t depth = 0;
  size_t steps = 0;
  BigInt bound;
  bool within_bound = false;
  bool measure_ok = false;   // per-step lemma + round squaring
  bool fuel_exhausted = false;
};

BenchRow bench_term(const std::string& name, const Term& t, const Structure& s);

std::string format_input(const std::vector<KElement>& w);
std::vector<KElement> parse_input(std::string_view text);  // comma separated

}  // namespace lak
