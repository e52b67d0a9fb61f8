#include "lak/machine.hpp"

#include <algorithm>
#include <random>

#include "lak/errors.hpp"

namespace lak {

std::vector<std::string> Machine::all_states() const {
  std::vector<std::string> out = order;
  out.push_back(accept);
  out.push_back(reject);
  return out;
}

int Machine::state_index(const std::string& id) const {
  auto all = all_states();
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i] == id) return static_cast<int>(i);
  return -1;
}

void Configuration::canonicalize() {
  while (!neg.empty() && neg.back().is_blank()) neg.pop_back();
  while (!pos.empty() && pos.back().is_blank()) pos.pop_back();
}

Configuration initial_config(const Machine& m, const std::vector<KElement>& w) {
  if (w.empty()) throw MachineError("empty input is not allowed");
  for (const auto& v : w) {
    if (v.is_blank()) throw BlankArgumentError("blank in machine input");
    if (!m.structure.admits(v))
      throw MachineError("input value " + v.to_string() +
                         " is outside the carrier");
  }
  Configuration c;
  c.pos = w;
  c.state = m.initial;
  c.canonicalize();
  return c;
}

StepResult step_machine(const Machine& m, const Configuration& c) {
  if (m.is_final(c.state)) return {c, true};
  auto it = m.states.find(c.state);
  if (it == m.states.end())
    throw MachineError("no transition for state '" + c.state + "'");
  const StateSpec& spec = it->second;
  Configuration out = c;
  const int p = m.structure.p();
  std::vector<KElement> window;
  for (int i = 0; i < p; ++i)
    window.push_back(i < static_cast<int>(c.pos.size()) ? c.pos[i]
                                                        : KElement::blank());
  switch (spec.kind) {
    case StateSpec::Kind::Computation: {
      KElement result = apply_op(m.structure, spec.op, window);
      if (out.pos.empty())
        out.pos.push_back(result);
      else
        out.pos[0] = result;
      out.state = spec.next;
      break;
    }
    case StateSpec::Kind::Branch: {
      bool b = apply_rel(m.structure, spec.rel, window);
      out.state = b ? spec.next_true : spec.next_false;
      break;
    }
    case StateSpec::Kind::Shift: {
      if (spec.shift_left) {
        KElement moved = out.neg.empty() ? KElement::blank() : out.neg.front();
        if (!out.neg.empty()) out.neg.erase(out.neg.begin());
        out.pos.insert(out.pos.begin(), moved);
      } else {
        KElement moved = out.pos.empty() ? KElement::blank() : out.pos.front();
        if (!out.pos.empty()) out.pos.erase(out.pos.begin());
        out.neg.insert(out.neg.begin(), moved);
      }
      out.state = spec.next;
      break;
    }
  }
  out.canonicalize();
  return {out, false};
}

Outcome run(const Machine& m, const std::vector<KElement>& w, uint64_t max_steps) {
  Outcome out;
  Configuration c = initial_config(m, w);
  for (uint64_t n = 0;; ++n) {
    if (m.is_final(c.state)) {
      out.kind = c.state == m.accept ? OutcomeKind::Accepted : OutcomeKind::Rejected;
      out.output = c.pos;
      out.steps = n;
      out.final_config = c;
      return out;
    }
    if (n >= max_steps) {
      out.kind = OutcomeKind::Timeout;
      out.steps = n;
      out.final_config = c;
      return out;
    }
    try {
      c = step_machine(m, c).config;
    } catch (BlankArgumentError& e) {
      throw BlankArgumentError(std::string(e.what()) + " at step " +
                               std::to_string(n));
    }
  }
}

MachineReport validate_machine(const Machine& m) {
  MachineReport report;
  auto note = [&](std::string s) { report.entries.push_back(std::move(s)); };
  if (!m.structure.uniform()) note("structure is not uniformized");
  if (m.accept == m.reject) note("accept and reject nodes coincide");
  if (std::find(m.order.begin(), m.order.end(), m.initial) == m.order.end())
    note("initial state '" + m.initial + "' is not a declared state");
  if (m.states.count(m.accept) || m.states.count(m.reject))
    note("final states must not carry transitions");
  for (const auto& id : m.order)
    if (!m.states.count(id)) note("state '" + id + "' has no transition");
  auto known = [&](const std::string& id) {
    return m.is_final(id) ||
           std::find(m.order.begin(), m.order.end(), id) != m.order.end();
  };
  for (const auto& [id, spec] : m.states) {
    if (std::find(m.order.begin(), m.order.end(), id) == m.order.end())
      note("transition for undeclared state '" + id + "'");
    switch (spec.kind) {
      case StateSpec::Kind::Computation:
        if (spec.op < 0 || spec.op >= static_cast<int>(m.structure.ops().size()))
          note("state '" + id + "': bad op index");
        if (!known(spec.next)) note("state '" + id + "': unknown next state");
        break;
      case StateSpec::Kind::Branch:
        if (spec.rel < 0 || spec.rel >= static_cast<int>(m.structure.rels().size()))
          note("state '" + id + "': bad rel index");
        if (!known(spec.next_true))
          note("state '" + id + "': unknown next_true state");
        if (!known(spec.next_false))
          note("state '" + id + "': unknown next_false state");
        break;
      case StateSpec::Kind::Shift:
        if (!known(spec.next)) note("state '" + id + "': unknown next state");
        break;
    }
  }
  return report;
}

uint64_t eval_polynomial(const std::vector<uint64_t>& coeffs, uint64_t n) {
  uint64_t acc = 0;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * n + coeffs[i];
  return acc;
}

MachineReport step_count_bound_check(
    const Machine& m, const std::vector<std::vector<KElement>>& inputs) {
  MachineReport report;
  for (const auto& w : inputs) {
    uint64_t budget = eval_polynomial(m.polynomial, w.size());
    Outcome out = run(m, w, budget);
    if (out.kind == OutcomeKind::Timeout) {
      std::string ws;
      for (const auto& v : w) ws += v.to_string() + " ";
      report.entries.push_back("input [" + ws + "]: not halted within P(" +
                               std::to_string(w.size()) + ") = " +
                               std::to_string(budget) + " steps");
    }
  }
  return report;
}

std::vector<std::vector<KElement>> sample_inputs(const Machine& m, int max_len,
                                                 uint64_t seed, int per_len) {
  std::vector<std::vector<KElement>> out;
  if (m.structure.finite_carrier()) {
    auto alphabet = m.structure.carrier_elements();
    for (int len = 1; len <= max_len; ++len) {
      std::vector<size_t> idx(static_cast<size_t>(len), 0);
      while (true) {
        std::vector<KElement> w;
        for (size_t i : idx) w.push_back(alphabet[i]);
        out.push_back(std::move(w));
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == alphabet.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  for (int len = 1; len <= max_len; ++len)
    for (int i = 0; i < per_len; ++i) {
      std::vector<KElement> w;
      for (int j = 0; j < len; ++j)
        w.push_back(KElement::rational(num(rng), den(rng)));
      out.push_back(std::move(w));
    }
  return out;
}

}  // namespace lak
