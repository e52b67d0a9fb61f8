#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lak/errors.hpp"
#include "lak/machine.hpp"

namespace lak {

namespace {

using nlohmann::json;

int resolve_op(const Structure& s, const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    int i = s.op_index(v.get<std::string>());
    if (i < 0) throw ParseError("unknown op '" + v.get<std::string>() + "'");
    return i;
  }
  throw ParseError("op must be an index or a name");
}

int resolve_rel(const Structure& s, const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    int i = s.rel_index(v.get<std::string>());
    if (i < 0) throw ParseError("unknown rel '" + v.get<std::string>() + "'");
    return i;
  }
  throw ParseError("rel must be an index or a name");
}

}  // namespace

Machine parse_machine_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("machine file: ") + e.what());
  }
  std::vector<KElement> constants;
  if (doc.contains("constants"))
    for (const auto& c : doc.at("constants"))
      constants.push_back(KElement::parse(c.get<std::string>()));
  Structure base =
      structure_by_name(doc.at("structure").get<std::string>(), constants);
  Machine m{uniformize(base)};
  m.initial = doc.at("initial").get<std::string>();
  m.accept = doc.at("accept").get<std::string>();
  m.reject = doc.at("reject").get<std::string>();
  for (const auto& st : doc.at("states")) {
    std::string id = st.at("id").get<std::string>();
    StateSpec spec;
    std::string kind = st.at("kind").get<std::string>();
    if (kind == "computation") {
      spec.kind = StateSpec::Kind::Computation;
      spec.op = resolve_op(m.structure, st.at("op"));
      spec.next = st.at("next").get<std::string>();
    } else if (kind == "branch") {
      spec.kind = StateSpec::Kind::Branch;
      spec.rel = resolve_rel(m.structure, st.at("rel"));
      spec.next_true = st.at("next_true").get<std::string>();
      spec.next_false = st.at("next_false").get<std::string>();
    } else if (kind == "shift") {
      spec.kind = StateSpec::Kind::Shift;
      std::string dir = st.at("direction").get<std::string>();
      if (dir != "left" && dir != "right")
        throw ParseError("shift direction must be left or right");
      spec.shift_left = dir == "left";
      spec.next = st.at("next").get<std::string>();
    } else {
      throw ParseError("unknown state kind '" + kind + "'");
    }
    if (m.states.count(id)) throw ParseError("duplicate state '" + id + "'");
    m.order.push_back(id);
    m.states.emplace(std::move(id), std::move(spec));
  }
  if (doc.contains("polynomial"))
    for (const auto& c : doc.at("polynomial"))
      m.polynomial.push_back(c.get<uint64_t>());
  if (m.polynomial.empty()) throw ParseError("machine needs a polynomial");
  return m;
}

Machine load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open machine file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_machine_json(buf.str());
}

std::string machine_to_json(const Machine& m) {
  json doc;
  doc["structure"] = m.structure.name();
  json consts = json::array();
  for (const auto& op : m.structure.ops())
    if (op.uses == 0 && op.name.size() > 1 && op.name[0] == 'c' &&
        m.structure.name() == "rationals")
      consts.push_back(op.eval({}).to_string());
  if (!consts.empty()) doc["constants"] = consts;
  json states = json::array();
  for (const auto& id : m.order) {
    const StateSpec& spec = m.states.at(id);
    json st;
    st["id"] = id;
    switch (spec.kind) {
      case StateSpec::Kind::Computation:
        st["kind"] = "computation";
        st["op"] = m.structure.ops()[spec.op].name;
        st["next"] = spec.next;
        break;
      case StateSpec::Kind::Branch:
        st["kind"] = "branch";
        st["rel"] = m.structure.rels()[spec.rel].name;
        st["next_true"] = spec.next_true;
        st["next_false"] = spec.next_false;
        break;
      case StateSpec::Kind::Shift:
        st["kind"] = "shift";
        st["direction"] = spec.shift_left ? "left" : "right";
        st["next"] = spec.next;
        break;
    }
    states.push_back(st);
  }
  doc["states"] = states;
  doc["initial"] = m.initial;
  doc["accept"] = m.accept;
  doc["reject"] = m.reject;
  doc["polynomial"] = m.polynomial;
  return doc.dump(2);
}

}  // namespace lak
