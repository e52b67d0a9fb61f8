#include "lak/structure.hpp"

#include <algorithm>

namespace lak {

KElement KElement::parse(std::string_view text) {
  if (text == "_") return KElement::blank();
  auto bad = [&] { throw ParseError("bad K literal: '" + std::string(text) + "'"); };
  size_t slash = text.find('/');
  auto parse_int = [&](std::string_view part) -> BigInt {
    if (part.empty()) bad();
    size_t i = 0;
    if (part[0] == '-') {
      if (part.size() == 1) bad();
      i = 1;
    }
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') bad();
    return BigInt(std::string(part));
  };
  if (slash == std::string_view::npos)
    return KElement::rational(parse_int(text), 1);
  return KElement::rational(parse_int(text.substr(0, slash)),
                            parse_int(text.substr(slash + 1)));
}

Structure::Structure(std::string name, Carrier carrier, std::vector<OpSpec> ops,
                     std::vector<RelSpec> rels)
    : name_(std::move(name)),
      carrier_(carrier),
      ops_(std::move(ops)),
      rels_(std::move(rels)) {
  if (rels_.empty() || rels_[0].name != "eq")
    throw Error("structure must declare equality as relation 0");
  int p = 1;
  for (const auto& o : ops_) p = std::max(p, o.arity);
  for (const auto& r : rels_) p = std::max(p, r.arity);
  p_ = p;
}

int Structure::op_index(std::string_view name) const {
  for (size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Structure::rel_index(std::string_view name) const {
  for (size_t i = 0; i < rels_.size(); ++i)
    if (rels_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<KElement> Structure::carrier_elements() const {
  if (carrier_ == Carrier::GF2)
    return {KElement::integer(0), KElement::integer(1)};
  throw Error("carrier is not finite");
}

bool Structure::admits(const KElement& v) const {
  if (v.is_blank()) return false;
  if (carrier_ == Carrier::GF2)
    return v == KElement::integer(0) || v == KElement::integer(1);
  return true;
}

Structure uniformize(const Structure& s) {
  Structure u = s;
  for (auto& o : u.ops_) o.arity = u.p_;
  for (auto& r : u.rels_) r.arity = u.p_;
  u.uniform_ = true;
  return u;
}

KElement apply_op(const Structure& s, size_t i, std::span<const KElement> args) {
  if (i >= s.ops().size()) throw IndexOutOfRangeError("op index out of range");
  const OpSpec& op = s.ops()[i];
  if (args.size() != static_cast<size_t>(op.arity))
    throw Error("op '" + op.name + "' expects " + std::to_string(op.arity) +
                " arguments, got " + std::to_string(args.size()));
  for (int k = 0; k < op.uses; ++k)
    if (args[k].is_blank())
      throw BlankArgumentError("op '" + op.name + "': blank in used position " +
                               std::to_string(k));
  return op.eval(args.first(static_cast<size_t>(op.uses)));
}

bool apply_rel(const Structure& s, size_t i, std::span<const KElement> args) {
  if (i >= s.rels().size()) throw IndexOutOfRangeError("rel index out of range");
  const RelSpec& rel = s.rels()[i];
  if (args.size() != static_cast<size_t>(rel.arity))
    throw Error("rel '" + rel.name + "' expects " + std::to_string(rel.arity) +
                " arguments, got " + std::to_string(args.size()));
  if (!rel.blank_ok)
    for (int k = 0; k < rel.uses; ++k)
      if (args[k].is_blank())
        throw BlankArgumentError("rel '" + rel.name +
                                 "': blank in used position " + std::to_string(k));
  return rel.eval(args.first(static_cast<size_t>(rel.uses)));
}

namespace {

RelSpec equality_rel() {
  return {"eq", 2, 2, [](std::span<const KElement> a) { return a[0] == a[1]; },
          false};
}

// End-of-tape detection: machine transitions are total on K~ = K u {blank},
// so a blank test is exposed as a unary relation.
RelSpec blank_rel() {
  return {"is_blank", 1, 1,
          [](std::span<const KElement> a) { return a[0].is_blank(); }, true};
}

OpSpec const_op(std::string name, KElement v) {
  return {std::move(name), 0, 0,
          [v](std::span<const KElement>) { return v; }};
}

}  // namespace

Structure Structure::gf2() {
  auto bit = [](bool b) { return KElement::integer(b ? 1 : 0); };
  std::vector<OpSpec> ops;
  ops.push_back({"or", 2, 2, [bit](std::span<const KElement> a) {
                   return bit(a[0] == KElement::integer(1) ||
                              a[1] == KElement::integer(1));
                 }});
  ops.push_back({"and", 2, 2, [bit](std::span<const KElement> a) {
                   return bit(a[0] == KElement::integer(1) &&
                              a[1] == KElement::integer(1));
                 }});
  ops.push_back(const_op("const0", KElement::integer(0)));
  ops.push_back(const_op("const1", KElement::integer(1)));
  std::vector<RelSpec> rels{equality_rel(), blank_rel()};
  return Structure("gf2", Carrier::GF2, std::move(ops), std::move(rels));
}

Structure Structure::rationals(std::vector<KElement> constants) {
  std::vector<OpSpec> ops;
  ops.push_back({"add", 2, 2, [](std::span<const KElement> a) {
                   return a[0].add(a[1]);
                 }});
  ops.push_back({"sub", 2, 2, [](std::span<const KElement> a) {
                   return a[0].sub(a[1]);
                 }});
  ops.push_back({"mul", 2, 2, [](std::span<const KElement> a) {
                   return a[0].mul(a[1]);
                 }});
  for (size_t i = 0; i < constants.size(); ++i) {
    if (constants[i].is_blank()) throw Error("blank cannot be a constant");
    ops.push_back(const_op("c" + std::to_string(i), constants[i]));
  }
  std::vector<RelSpec> rels;
  rels.push_back(equality_rel());
  rels.push_back({"le", 2, 2,
                  [](std::span<const KElement> a) { return a[0].leq(a[1]); },
                  false});
  rels.push_back(blank_rel());
  return Structure("rationals", Carrier::Rationals, std::move(ops),
                   std::move(rels));
}

Structure structure_by_name(std::string_view name,
                            std::vector<KElement> constants) {
  if (name == "gf2") {
    if (!constants.empty()) throw Error("gf2 takes no extra constants");
    return Structure::gf2();
  }
  if (name == "rationals") return Structure::rationals(std::move(constants));
  throw Error("unknown structure: '" + std::string(name) + "'");
}

}  // namespace lak
