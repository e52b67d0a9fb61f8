#include "lak/verify.hpp"

#include "lak/encodings.hpp"

namespace lak {

CompareReport compare_machine(const Machine& m, const CompiledMachine& cm,
                              const std::vector<std::vector<KElement>>& inputs) {
  CompareReport report;
  for (const auto& w : inputs) {
    CompareRow row;
    row.input = w;
    try {
      Outcome sim = run(m, w, 1u << 20);
      if (sim.kind == OutcomeKind::Timeout) {
        row.error = "simulator timeout";
      } else {
        row.machine_output = trim_blanks(sim.final_config.pos);
        row.machine_steps = sim.steps;
        CompiledRun cr = run_compiled(cm, m, w);
        row.term_output = cr.output;
        row.term_steps = cr.trace.steps.size();
        row.agree = row.machine_output == row.term_output;
        row.bounds_ok = check_bounds(cr.trace).ok();
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (row.agree && row.error.empty() && row.bounds_ok) ++report.agreements;
    if (!row.agree || !row.error.empty()) report.all_agree = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

BenchRow bench_term(const std::string& name, const Term& t, const Structure& s) {
  BenchRow row;
  row.name = name;
  row.measure = t->measure();
  row.depth = t->depth();
  row.bound = standard_fuel(t);
  try {
    NormalizeResult res = normalize_standard(t, s);
    row.steps = res.trace.steps.size();
    BoundsReport b = check_bounds(res.trace);
    row.within_bound = BigInt(row.steps) <= row.bound;
    row.measure_ok = b.ok();
  } catch (const FuelExhaustedError&) {
    row.fuel_exhausted = true;
  }
  return row;
}

std::string format_input(const std::vector<KElement>& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += w[i].to_string();
  }
  return out;
}

std::vector<KElement> parse_input(std::string_view text) {
  std::vector<KElement> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string_view part = comma == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, comma - start);
    size_t a = part.find_first_not_of(" \t");
    size_t b = part.find_last_not_of(" \t");
    if (a != std::string_view::npos)
      out.push_back(KElement::parse(part.substr(a, b - a + 1)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace lak
