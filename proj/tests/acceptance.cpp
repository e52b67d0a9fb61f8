// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include "lak/compiler.hpp"
#include "lak/encodings.hpp"
#include "lak/generator.hpp"
#include "lak/syntax.hpp"
#include "lak/verify.hpp"

using namespace lak;

namespace {

std::string fixture(const std::string& name) {
  const char* dir = std::getenv("LAK_FIXTURES");
  return (dir ? std::string(dir) : std::string(FIXTURE_DIR)) + "/machines/" + name;
}

std::vector<std::vector<KElement>> words_upto(int max_len) {
  std::vector<std::vector<KElement>> out;
  for (int len = 1; len <= max_len; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::vector<KElement> w;
      for (int i = 0; i < len; ++i)
        w.push_back(KElement::integer((mask >> i) & 1));
      out.push_back(std::move(w));
    }
  return out;
}

std::vector<std::vector<KElement>> random_rational_lists(uint64_t seed,
                                                         int count, int max_len) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  std::uniform_int_distribution<int> len(1, max_len);
  std::vector<std::vector<KElement>> out;
  for (int i = 0; i < count; ++i) {
    std::vector<KElement> w;
    int n = len(rng);
    for (int j = 0; j < n; ++j)
      w.push_back(KElement::rational(num(rng), den(rng)));
    out.push_back(std::move(w));
  }
  return out;
}

// Minimal classical Turing machine over {0,1,blank} deciding 1*.
bool classical_all_ones(const std::vector<KElement>& w) {
  std::vector<int> tape;
  for (const auto& v : w) tape.push_back(v == KElement::integer(1) ? 1 : 0);
  size_t head = 0;
  int state = 0;  // 0 = scanning
  for (int steps = 0; steps < 1000; ++steps) {
    int cell = head < tape.size() ? tape[head] : -1;  // -1 = blank
    if (state == 0) {
      if (cell == 1) {
        ++head;  // move right, stay scanning
      } else if (cell == -1) {
        return true;  // accept at blank
      } else {
        return false;  // reject on 0
      }
    }
  }
  return false;
}

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

}  // namespace

int main() {
  std::vector<Criterion> results;
  Machine ones = load_machine(fixture("all_ones.json"));
  Machine parity = load_machine(fixture("parity.json"));
  Machine sum = load_machine(fixture("running_sum.json"));
  CompiledMachine ones_c = compile_machine(ones);
  CompiledMachine parity_c = compile_machine(parity);
  CompiledMachine sum_c = compile_machine(sum);

  std::vector<std::pair<const Structure*, ReductionTrace>> machine_traces;
  std::vector<const CompiledMachine*> compiled{&ones_c, &parity_c, &sum_c};

  // 1. embedding correctness
  {
    Criterion c{"embedding-correctness (compiled terms vs simulator)"};
    size_t total = 0, agree = 0;
    auto run_set = [&](const Machine& m, const CompiledMachine& cm,
                       const std::vector<std::vector<KElement>>& inputs) {
      CompareReport r = compare_machine(m, cm, inputs);
      for (auto& row : r.rows) {
        ++total;
        if (row.agree && row.error.empty()) ++agree;
      }
      return r;
    };
    auto boolean_inputs = words_upto(4);
    run_set(ones, ones_c, boolean_inputs);
    run_set(parity, parity_c, boolean_inputs);
    run_set(sum, sum_c, random_rational_lists(20240, 20, 5));
    // keep traces of a few runs for criteria 2, 3 and 7
    for (auto& w : words_upto(3)) {
      machine_traces.emplace_back(&ones.structure,
                                  run_compiled(ones_c, ones, w).trace);
      machine_traces.emplace_back(&parity.structure,
                                  run_compiled(parity_c, parity, w).trace);
    }
    for (auto& w : random_rational_lists(7, 6, 3))
      machine_traces.emplace_back(&sum.structure,
                                  run_compiled(sum_c, sum, w).trace);
    c.pass = total == agree && total == 30 + 30 + 20;
    c.detail = std::to_string(agree) + "/" + std::to_string(total) + " agreements";
    results.push_back(c);
  }

  // generated corpus shared by criteria 2-4
  Structure gf2u = uniformize(Structure::gf2());
  auto corpus = generate_corpus(99, 520);
  std::vector<ReductionTrace> corpus_traces;
  size_t fuel_failures = 0;
  for (const Term& t : corpus) {
    try {
      corpus_traces.push_back(normalize_standard(t, gf2u).trace);
    } catch (const FuelExhaustedError&) {
      ++fuel_failures;
    }
  }

  // 2. measure lemma
  {
    Criterion c{"measure-lemma (strict decrease off (!)/(com))"};
    size_t steps = 0, violations = 0;
    auto scan = [&](const ReductionTrace& tr) {
      uint64_t prev = tr.initial->measure();
      for (const auto& st : tr.steps) {
        ++steps;
        switch (st.redex.kind) {
          case RuleKind::Com1:
          case RuleKind::Com2:
            if (st.measure_after != prev) ++violations;
            break;
          case RuleKind::BangLet:
            break;
          default:
            if (st.measure_after >= prev) ++violations;
        }
        prev = st.measure_after;
      }
    };
    for (const auto& tr : corpus_traces) scan(tr);
    for (const auto& [s, tr] : machine_traces) scan(tr);
    c.pass = violations == 0 && corpus_traces.size() >= 500;
    c.detail = std::to_string(violations) + " violations over " +
               std::to_string(steps) + " steps, " +
               std::to_string(corpus_traces.size() + machine_traces.size()) +
               " traces";
    results.push_back(c);
  }

  // 3. step bound + per-round squaring
  {
    Criterion c{"step-bound (steps <= <t>^(2^(d+1)), round squaring)"};
    size_t bound_violations = 0;
    for (const auto& tr : corpus_traces)
      if (!check_bounds(tr).ok()) ++bound_violations;
    for (const auto& [s, tr] : machine_traces)
      if (!check_bounds(tr).ok()) ++bound_violations;
    c.pass = bound_violations == 0 && fuel_failures == 0;
    c.detail = std::to_string(bound_violations) + " bound violations, " +
               std::to_string(fuel_failures) + " fuel exhaustions";
    results.push_back(c);
  }

  // 4. erasure simulation
  {
    Criterion c{"erasure-simulation (erased normal forms agree)"};
    size_t checked = 0, mismatches = 0;
    for (size_t i = 0; i < corpus.size() && checked < 220; ++i) {
      try {
        Term typed_nf = normalize_standard(corpus[i], gf2u).term;
        // generated terms may be stuck on the typed side where the erasure
        // still reduces; normalizing the erased result makes the comparison
        // the confluence instance of the per-step simulation
        UntypedTerm left = normalize_untyped(erase(typed_nf), 1u << 22, gf2u);
        UntypedTerm right = normalize_untyped(erase(corpus[i]), 1u << 22, gf2u);
        ++checked;
        if (!alpha_equal(left.t, right.t)) ++mismatches;
      } catch (const FuelExhaustedError&) {
      }
    }
    // compiled machines on small inputs too
    std::vector<std::pair<const Machine*, const CompiledMachine*>> ms{
        {&ones, &ones_c}, {&parity, &parity_c}, {&sum, &sum_c}};
    for (auto& [m, cm] : ms) {
      std::vector<KElement> w;
      if (m->structure.finite_carrier())
        w = {KElement::integer(1), KElement::integer(0)};
      else
        w = {KElement::rational(1, 2), KElement::rational(1, 3)};
      Term applied = apply_compiled(*cm, w);
      Term typed_nf = normalize_standard(applied, m->structure).term;
      UntypedTerm direct =
          normalize_untyped(erase(applied), 1u << 24, m->structure);
      ++checked;
      if (!alpha_equal(erase(typed_nf).t, direct.t)) ++mismatches;
    }
    c.pass = mismatches == 0 && checked >= 200;
    c.detail = std::to_string(checked - mismatches) + "/" +
               std::to_string(checked) + " agree";
    results.push_back(c);
  }

  // 5. typing soundness of the compiler
  {
    Criterion c{"compiler-typing-soundness (checked derivations)"};
    std::vector<std::string> notes;
    bool ok = true;
    auto check_machine = [&](const char* name, const Machine& m,
                             const CompiledMachine& cm) {
      if (!cm.derivation) {
        ok = false;
        notes.push_back(std::string(name) + ": no derivation (" +
                        cm.derivation_note + ")");
        return;
      }
      try {
        check_derivation(*cm.derivation, &m.structure);
      } catch (const CheckError& e) {
        ok = false;
        notes.push_back(std::string(name) + ": rejected: " + e.what());
        return;
      }
      Formula want =
          f_lolli(f_list(f_kappa()), f_para_n(f_list(f_kappa()), cm.d));
      if (!formula_equal(concl(*cm.derivation).type, want)) {
        ok = false;
        notes.push_back(std::string(name) + ": wrong conclusion type");
      }
    };
    check_machine("all-ones", ones, ones_c);
    check_machine("parity", parity, parity_c);
    check_machine("running-sum", sum, sum_c);
    size_t lib_ok = 0, lib_total = 0;
    for (auto& [name, d] : library_derivations(ones)) {
      ++lib_total;
      try {
        check_derivation(d, &ones.structure);
        ++lib_ok;
      } catch (const CheckError& e) {
        ok = false;
        notes.push_back("library " + name + ": " + e.what());
      }
    }
    c.pass = ok;
    c.detail = std::to_string(lib_ok) + "/" + std::to_string(lib_total) +
               " library combinators accepted";
    for (auto& n : notes) c.detail += "; " + n;
    results.push_back(c);
  }

  // 6. classical subsumption
  {
    Criterion c{"classical-subsumption (gf2 vs classical TM on 1*)"};
    size_t total = 0, agree = 0;
    for (auto& w : words_upto(4)) {
      ++total;
      Outcome out = run(ones, w, 100000);
      bool bss = out.kind == OutcomeKind::Accepted;
      if (bss == classical_all_ones(w)) ++agree;
    }
    c.pass = total == agree;
    c.detail = std::to_string(agree) + "/" + std::to_string(total) +
               " identical verdicts";
    results.push_back(c);
  }

  // 7. dup discipline
  {
    Criterion c{"dup-discipline (value restriction, locality in c2cw)"};
    bool ok = true;
    std::string detail;
    // locality: dup occurs in the compiled term exactly as often as in its
    // c2cw subterm (which is inlined once)
    std::function<int(const Term&)> dups = [&](const Term& t) -> int {
      if (t->kind == TermKind::Const)
        return t->cnst.kind == ConstKind::Dup ? 1 : 0;
      int n = 0;
      if (t->a) n += dups(t->a);
      if (t->b) n += dups(t->b);
      return n;
    };
    for (const CompiledMachine* cm : compiled)
      if (dups(cm->term) != dups(cm->c2cw)) {
        ok = false;
        detail += "dup outside c2cw; ";
      }
    // value restriction: replay the smallest traces and inspect every dup
    size_t dup_steps = 0;
    auto replay = [&](const ReductionTrace& tr, const Structure& s) {
      Term cur = tr.initial;
      for (const auto& st : tr.steps) {
        if (st.redex.kind == RuleKind::Dup) {
          ++dup_steps;
          const TermNode* node = cur.get();
          for (uint8_t step : st.redex.position)
            node = (step == 0 ? node->a : node->b).get();
          if (!is_value_literal(node->b)) {
            ok = false;
            detail += "dup on non-literal; ";
          }
        }
        cur = step(cur, st.redex, s);
      }
    };
    for (size_t i = 0; i < corpus_traces.size(); i += 25)
      replay(corpus_traces[i], gf2u);
    size_t replayed = 0;
    for (const auto& [s, tr] : machine_traces) {
      if (tr.steps.size() > 2000 || replayed > 6) continue;
      ++replayed;
      replay(tr, *s);
    }
    c.pass = ok;
    c.detail = detail.empty()
                   ? ("confined to c2cw; " + std::to_string(dup_steps) +
                      " dup steps replayed, all on literals")
                   : detail;
    results.push_back(c);
  }

  int failures = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    const Criterion& c = results[i];
    if (!c.pass) ++failures;
    std::printf("[%zu/7] %-58s %s (%s)\n", i + 1, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str());
  }
  return failures;
}
