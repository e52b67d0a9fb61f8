#include <benchmark/benchmark.h>

#include "lak/compiler.hpp"
#include "lak/encodings.hpp"
#include "lak/generator.hpp"
#include "lak/library.hpp"
#include "lak/syntax.hpp"

using namespace lak;

namespace {

const Structure& gf2u() {
  static Structure s = uniformize(Structure::gf2());
  return s;
}

Machine all_ones_machine() {
  const char* json = R"({
    "structure": "gf2",
    "states": [
      {"id": "q0", "kind": "branch", "rel": "is_blank", "next_true": "qa", "next_false": "q1"},
      {"id": "q1", "kind": "shift", "direction": "left", "next": "q2"},
      {"id": "q2", "kind": "computation", "op": "const1", "next": "q3"},
      {"id": "q3", "kind": "branch", "rel": "eq", "next_true": "q4", "next_false": "qr"},
      {"id": "q4", "kind": "shift", "direction": "right", "next": "q5"},
      {"id": "q5", "kind": "shift", "direction": "right", "next": "q0"},
      {"id": "qa", "kind": "computation", "op": "const1", "next": "accept"},
      {"id": "qr", "kind": "computation", "op": "const0", "next": "reject"}
    ],
    "initial": "q0", "accept": "accept", "reject": "reject",
    "polynomial": [4, 6]
  })";
  return parse_machine_json(json);
}

void BM_substitute(benchmark::State& state) {
  Term body = parse_term("\\y. ((y) x) ((\\z. z) x')");
  Name x = Names::global("x");
  Term arg = mk_nat(16);
  for (auto _ : state) benchmark::DoNotOptimize(substitute(body, x, arg));
}
BENCHMARK(BM_substitute);

void BM_normalize_numeral_add(benchmark::State& state) {
  Term sum = mk_app(mk_app(subject(lal_add()), mk_nat(state.range(0))),
                    mk_nat(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(normalize_standard(sum, gf2u()).term);
}
BENCHMARK(BM_normalize_numeral_add)->Arg(4)->Arg(16)->Arg(64);

void BM_normalize_generated(benchmark::State& state) {
  auto corpus = generate_corpus(17, 64);
  for (auto _ : state)
    for (const Term& t : corpus)
      benchmark::DoNotOptimize(normalize_standard(t, gf2u()).term);
}
BENCHMARK(BM_normalize_generated);

void BM_check_derivation(benchmark::State& state) {
  Deriv d = lal_t_poly({2, 2}).deriv;
  for (auto _ : state)
    benchmark::DoNotOptimize(check_derivation(d, &gf2u()));
}
BENCHMARK(BM_check_derivation);

void BM_compile_machine(benchmark::State& state) {
  Machine m = all_ones_machine();
  for (auto _ : state) benchmark::DoNotOptimize(compile_machine(m));
}
BENCHMARK(BM_compile_machine);

void BM_compiled_run(benchmark::State& state) {
  Machine m = all_ones_machine();
  CompiledMachine cm = compile_machine(m);
  std::vector<KElement> w(static_cast<size_t>(state.range(0)),
                          KElement::integer(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_compiled(cm, m, w));
}
BENCHMARK(BM_compiled_run)->Arg(1)->Arg(2)->Arg(3);

void BM_machine_simulation(benchmark::State& state) {
  Machine m = all_ones_machine();
  std::vector<KElement> w(static_cast<size_t>(state.range(0)),
                          KElement::integer(1));
  for (auto _ : state) benchmark::DoNotOptimize(run(m, w, 1u << 20));
}
BENCHMARK(BM_machine_simulation)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
