#include "doctest.h"

#include "subject_reduction.hpp"

#include "lak/encodings.hpp"
#include "lak/library.hpp"
#include "lak/syntax.hpp"

using namespace lak;

namespace {

const Structure& gf2u() {
  static Structure s = uniformize(Structure::gf2());
  return s;
}

struct SRResult {
  size_t steps = 0;
  bool reached_normal = false;
};

// Repeatedly re-derive one reduction step. Every accepted step must pass the
// checker and be reachable by the reduction module; the walk stops at the
// first shape the transformer does not cover (coverage is asserted per term).
SRResult run_subject_reduction(Deriv d, int limit = 4000) {
  SRResult out;
  while (out.steps < static_cast<size_t>(limit)) {
    Term before = subject(d);
    auto next = sr::transform_any(d, gf2u());
    if (!next) break;
    try {
      check_derivation(*next, &gf2u());
    } catch (const CheckError&) {
      break;  // cut-elimination shape outside the transformer's coverage
    }
    bool reachable = false;
    for (const auto& r : find_redexes(before, gf2u()))
      if (alpha_equal(step(before, r, gf2u()), subject(*next))) {
        reachable = true;
        break;
      }
    CHECK(reachable);
    if (!reachable) break;
    d = *next;
    ++out.steps;
  }
  out.reached_normal = find_redexes(subject(d), gf2u()).empty();
  return out;
}

}  // namespace

TEST_CASE("subject reduction re-derives steps across the library corpus") {
  struct Entry {
    std::string name;
    Deriv deriv;
    size_t min_steps;
    bool expect_normal;
  };
  std::vector<Entry> corpus;
  corpus.push_back({"add 2 3",
                    d_app(d_app(lal_add(), lal_numeral(2)), lal_numeral(3)), 4,
                    false});
  corpus.push_back({"succ 4", d_app(lal_succ(), lal_numeral(4)), 3, false});
  corpus.push_back({"mult 2 !3",
                    d_app(d_app(lal_mult_banged(), lal_numeral(2)),
                          d_bang(lal_numeral(3))),
                    10, false});
  corpus.push_back(
      {"flat [1,0]",
       d_app(lal_flat(), lal_klist({KElement::integer(1), KElement::integer(0)})),
       5, true});
  corpus.push_back({"regen 3", d_app(lal_regen(), lal_numeral(3)), 5, false});
  corpus.push_back({"if true",
                    d_if_core(lal_true(), d_ax_k(KElement::integer(1)),
                              d_ax_k(KElement::integer(0))),
                    2, false});
  corpus.push_back({"rho 1 1",
                    d_app(d_app(d_ax_rho(gf2u(), 0),
                                d_ax_k(KElement::integer(1))),
                          d_ax_k(KElement::integer(1))),
                    1, true});
  corpus.push_back({"dup 1", d_app(d_ax_dup(), d_ax_k(KElement::integer(1))),
                    1, true});
  corpus.push_back({"tP(n+1) 2", d_app(lal_t_poly({1, 1}).deriv,
                                       lal_numeral(2)), 20, false});
  size_t total = 0;
  for (auto& e : corpus) {
    CAPTURE(e.name);
    CHECK_NOTHROW(check_derivation(e.deriv, &gf2u()));
    SRResult r = run_subject_reduction(e.deriv);
    CHECK(r.steps >= e.min_steps);
    if (e.expect_normal) CHECK(r.reached_normal);
    total += r.steps;
  }
  // the corpus exercises beta, both lets, com rotations, contraction arms,
  // dup, op and rho steps
  CHECK(total >= 50);
}
