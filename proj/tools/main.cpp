#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lak/derivation.hpp"
#include "lak/encodings.hpp"
#include "lak/generator.hpp"
#include "lak/syntax.hpp"
#include "lak/verify.hpp"

using namespace lak;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

struct Common {
  std::string structure = "gf2";
  uint64_t max_steps = 1u << 20;
  uint64_t fuel = 0;  // 0 = theorem bound
  uint64_t seed = 2024;
  std::string format = "text";
};

Structure active_structure(const Common& c) {
  return uniformize(structure_by_name(c.structure));
}

void emit_trace(const std::string& path, const ReductionTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace '" + path + "'");
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& st = trace.steps[i];
    out << "{\"step\": " << i << ", \"depth\": " << st.redex.depth
        << ", \"rule\": \"" << rule_name(st.redex.kind)
        << "\", \"measure_after\": " << st.measure_after << "}\n";
  }
}

int cmd_check(const std::string& file, const Common& c) {
  Deriv d = parse_derivation(slurp(file));
  Structure s = active_structure(c);
  try {
    Judgment j = check_derivation(d, &s);
    std::cout << "accepted: " << print_judgment(j) << "\n";
    return kExitOk;
  } catch (const CheckError& e) {
    std::cout << "rejected: " << e.what() << "\n";
    return kExitMismatch;
  }
}

int cmd_eval(const std::string& file, const std::string& strategy,
             const std::string& trace_path, const Common& c) {
  Term t = parse_term(slurp(file));
  Structure s = active_structure(c);
  if (strategy == "untyped") {
    UntypedTerm nf = normalize_untyped(erase(t), c.fuel ? c.fuel : c.max_steps, s);
    std::cout << print_term(nf.t) << "\n";
    return kExitOk;
  }
  std::optional<uint64_t> fuel;
  if (c.fuel) fuel = c.fuel;
  NormalizeResult res = normalize_standard(t, s, fuel);
  if (!trace_path.empty()) emit_trace(trace_path, res.trace);
  std::cout << print_term(res.term) << "\n";
  BoundsReport b = check_bounds(res.trace);
  std::cerr << "steps=" << res.trace.steps.size()
            << " measure=" << res.term->measure()
            << " bounds=" << (b.ok() ? "ok" : "violated") << "\n";
  return b.ok() ? kExitOk : kExitMismatch;
}

int cmd_simulate(const std::string& file, const std::string& input,
                 const Common& c) {
  Machine m = load_machine(file);
  auto w = parse_input(input);
  Outcome out = run(m, w, c.max_steps);
  switch (out.kind) {
    case OutcomeKind::Accepted:
      std::cout << "accepted output=" << format_input(out.output)
                << " steps=" << out.steps << "\n";
      break;
    case OutcomeKind::Rejected:
      std::cout << "rejected steps=" << out.steps << "\n";
      break;
    case OutcomeKind::Timeout:
      std::cout << "timeout steps=" << out.steps << "\n";
      break;
  }
  return kExitOk;
}

int cmd_compile(const std::string& file, const std::string& out_path,
                const std::string& deriv_path) {
  Machine m = load_machine(file);
  CompiledMachine cm = compile_machine(m);
  std::string text = print_term(cm.term) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  std::cerr << "d=" << cm.d << " tP_k=" << cm.tP_k << " measure="
            << cm.term->measure() << "\n";
  if (!deriv_path.empty()) {
    if (!cm.derivation) {
      std::cerr << "no derivation: " << cm.derivation_note << "\n";
      return kExitMismatch;
    }
    write_file(deriv_path, print_derivation(*cm.derivation));
  }
  return kExitOk;
}

int cmd_compare(const std::string& file, int exhaustive_len, int random_count,
                int random_len, const std::string& inputs_spec,
                const std::string& term_file, const Common& c) {
  Machine m = load_machine(file);
  CompiledMachine cm = compile_machine(m);
  if (!term_file.empty()) cm.term = parse_term(slurp(term_file));
  std::vector<std::vector<KElement>> inputs;
  if (!inputs_spec.empty()) {
    size_t start = 0;
    std::string spec = inputs_spec;
    while (start <= spec.size()) {
      size_t semi = spec.find(';', start);
      std::string part = semi == std::string::npos ? spec.substr(start)
                                                   : spec.substr(start, semi - start);
      if (!part.empty()) inputs.push_back(parse_input(part));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
  } else if (m.structure.finite_carrier()) {
    inputs = sample_inputs(m, exhaustive_len, c.seed, 0);
  } else {
    inputs = sample_inputs(m, random_len, c.seed, random_count);
  }
  CompareReport report = compare_machine(m, cm, inputs);
  for (const auto& row : report.rows) {
    if (c.format == "records") {
      std::cout << "compare input=" << format_input(row.input)
                << " machine=" << format_input(row.machine_output)
                << " term=" << format_input(row.term_output)
                << " agree=" << (row.agree ? 1 : 0)
                << " machine_steps=" << row.machine_steps
                << " term_steps=" << row.term_steps
                << " bounds=" << (row.bounds_ok ? "ok" : "violated");
      if (!row.error.empty()) std::cout << " error=\"" << row.error << "\"";
      std::cout << "\n";
    } else {
      std::cout << (row.agree ? "  ok " : "FAIL ") << "["
                << format_input(row.input) << "] machine=["
                << format_input(row.machine_output) << "] term=["
                << format_input(row.term_output) << "] steps "
                << row.machine_steps << "/" << row.term_steps;
      if (!row.error.empty()) std::cout << " error: " << row.error;
      std::cout << "\n";
    }
  }
  std::cout << report.agreements << "/" << report.rows.size() << " agreements\n";
  return report.all_agree ? kExitOk : kExitMismatch;
}

int cmd_bench(const std::vector<std::string>& machines, int gen_count,
              int lens, const Common& c) {
  Structure fallback = active_structure(c);
  std::vector<std::tuple<std::string, Term, Structure>> corpus;
  for (const auto& mf : machines) {
    Machine m = load_machine(mf);
    CompiledMachine cm = compile_machine(m);
    auto inputs = sample_inputs(m, lens, c.seed, 2);
    for (const auto& w : inputs)
      corpus.emplace_back(mf + "[" + format_input(w) + "]",
                          apply_compiled(cm, w), m.structure);
  }
  if (gen_count > 0) {
    auto gen = generate_corpus(c.seed, gen_count);
    for (size_t i = 0; i < gen.size(); ++i)
      corpus.emplace_back("gen" + std::to_string(i), gen[i], fallback);
  }
  bool all_ok = true;
  std::cout << "name measure depth steps bound_ok lemma_ok\n";
  for (auto& [name, t, use] : corpus) {
    BenchRow row = bench_term(name, t, use);
    bool ok = row.within_bound && row.measure_ok && !row.fuel_exhausted;
    all_ok = all_ok && ok;
    if (c.format == "records") {
      std::cout << "bench name=" << row.name << " measure=" << row.measure
                << " depth=" << row.depth << " steps=" << row.steps
                << " within_bound=" << row.within_bound
                << " lemma_ok=" << row.measure_ok
                << " fuel_exhausted=" << row.fuel_exhausted << "\n";
    } else {
      std::cout << row.name << " " << row.measure << " " << row.depth << " "
                << row.steps << " " << (row.within_bound ? "yes" : "NO") << " "
                << (row.measure_ok ? "yes" : "NO")
                << (row.fuel_exhausted ? " FUEL" : "") << "\n";
    }
  }
  return all_ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"light affine lambda-calculus over an algebraic structure"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--structure", common.structure, "gf2 or rationals");
  app.add_option("--max-steps", common.max_steps, "simulator step limit");
  app.add_option("--fuel", common.fuel, "reduction fuel override");
  app.add_option("--seed", common.seed, "random input seed");
  app.add_option("--format", common.format)->check(CLI::IsMember({"text", "records"}));

  std::string file, input, output, trace, deriv, strategy = "standard";
  std::string inputs_spec, term_file;
  int exhaustive_len = 3, random_count = 10, random_len = 4;
  int gen_count = 0, lens = 3;
  std::vector<std::string> machines;

  auto* check = app.add_subcommand("check", "check a typing derivation file");
  check->fallthrough();
  check->add_option("file", file)->required();

  auto* eval = app.add_subcommand("eval", "normalize a term file");
  eval->fallthrough();
  eval->add_option("file", file)->required();
  eval->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"standard", "untyped"}));
  eval->add_option("--trace", trace, "write a jsonl step trace");

  auto* sim = app.add_subcommand("simulate", "run a machine on an input");
  sim->fallthrough();
  sim->add_option("file", file)->required();
  sim->add_option("input", input)->required();

  auto* boule = app.add_subcommand("compile", "compile a machine to a term");
  boule->fallthrough();
  boule->add_option("file", file)->required();
  boule->add_option("-o,--output", output);
  boule->add_option("--emit-derivation", deriv);

  auto* cmp = app.add_subcommand("compare", "compiled term vs simulator");
  cmp->fallthrough();
  cmp->add_option("file", file)->required();
  cmp->add_option("--exhaustive", exhaustive_len, "all words up to this length");
  cmp->add_option("--random", random_count, "random inputs per length");
  cmp->add_option("--len", random_len, "max random input length");
  cmp->add_option("--inputs", inputs_spec, "semicolon separated explicit inputs");
  cmp->add_option("--term", term_file, "use this term file instead");

  auto* bench = app.add_subcommand("bench", "normalization statistics");
  bench->fallthrough();
  bench->add_option("--machine", machines, "machine files to compile and run");
  bench->add_option("--gen", gen_count, "generated corpus size");
  bench->add_option("--lens", lens, "input lengths for machines");

  CLI11_PARSE(app, argc, argv);
  try {
    if (check->parsed()) return cmd_check(file, common);
    if (eval->parsed()) return cmd_eval(file, strategy, trace, common);
    if (sim->parsed()) return cmd_simulate(file, input, common);
    if (boule->parsed()) return cmd_compile(file, output, deriv);
    if (cmp->parsed())
      return cmd_compare(file, exhaustive_len, random_count, random_len,
                         inputs_spec, term_file, common);
    if (bench->parsed()) return cmd_bench(machines, gen_count, lens, common);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitInput;
}
