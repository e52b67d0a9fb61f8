#pragma once

#include <random>

#include "lak/term.hpp"

namespace lak {

// Random well-formed terms over the gf2 structure. Generated binders respect
// the stratification discipline (lambda-bound variables occur at their
// binder's depth, let-bound ones one level deeper), so the standard strategy
// normalizes them within the theorem fuel.
Term generate_term(std::mt19937_64& rng, int budget);

// count generated terms plus a handful of library shapes, deterministic in
// the seed.
std::vector<Term> generate_corpus(uint64_t seed, int count);

}  // namespace lak
