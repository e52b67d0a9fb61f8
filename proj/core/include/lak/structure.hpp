#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lak/kelement.hpp"

namespace lak {

using OpEval = std::function<KElement(std::span<const KElement>)>;
using RelEval = std::function<bool(std::span<const KElement>)>;

struct OpSpec {
  std::string name;
  int arity = 0;  // current (declared or uniformized) arity
  int uses = 0;   // how many leading arguments are actually read
  OpEval eval;
};

struct RelSpec {
  std::string name;
  int arity = 0;
  int uses = 0;
  RelEval eval;
  bool blank_ok = false;  // may be applied to blanks in used positions
};

enum class Carrier { GF2, Rationals };

// An algebraic structure K = (K, op_1..op_n, rel_1..rel_m). rel 0 is always
// the equality. Structures are immutable after construction.
class Structure {
 public:
  Structure(std::string name, Carrier carrier, std::vector<OpSpec> ops,
            std::vector<RelSpec> rels);

  const std::string& name() const { return name_; }
  Carrier carrier() const { return carrier_; }
  const std::vector<OpSpec>& ops() const { return ops_; }
  const std::vector<RelSpec>& rels() const { return rels_; }
  int p() const { return p_; }
  bool uniform() const { return uniform_; }

  int op_index(std::string_view name) const;
  int rel_index(std::string_view name) const;

  // True iff the carrier is finite and small enough to enumerate; the
  // compiler uses this to pick the list-splitting strategy.
  bool finite_carrier() const { return carrier_ == Carrier::GF2; }
  std::vector<KElement> carrier_elements() const;

  // True iff v lies in the carrier (blank excluded).
  bool admits(const KElement& v) const;

  static Structure gf2();
  static Structure rationals(std::vector<KElement> constants = {});

 private:
  friend Structure uniformize(const Structure& s);

  std::string name_;
  Carrier carrier_;
  std::vector<OpSpec> ops_;
  std::vector<RelSpec> rels_;
  int p_;
  bool uniform_ = false;
};

// Lifts every operation and relation to the maximal arity p; the extra
// argument positions are never read.
Structure uniformize(const Structure& s);

KElement apply_op(const Structure& s, size_t i, std::span<const KElement> args);
bool apply_rel(const Structure& s, size_t i, std::span<const KElement> args);

// Looks up the two builtin structures by their external names.
Structure structure_by_name(std::string_view name,
                            std::vector<KElement> constants = {});

}  // namespace lak
