// Exact semantics over finite models.
//
// truthSet computes the denotation of a formula; angelRegion/demonRegion
// compute the two-goal winning regions ("from which states can this player
// force a run they are happy with"), and dglAngelRegion/dglDemonRegion the
// classical zero-sum regions used by the embedding results and the oracles.
//
// Repetition is computed by iterating monotone functionals to their least /
// greatest fixpoints. The iteration count is capped by fixpointBudget
// (default: |S| + 1, which always suffices on a space with |S| states); a
// cap overrun raises FixpointBudgetExceeded rather than looping.
#pragma once

#include <cstdint>

#include "dglsc/model.hpp"

namespace dglsc {

struct SemContext {
  const Model* model = nullptr;
  uint64_t fixpointBudget = 0;  // 0 means default |S| + 1
  ExecPolicy policy = ExecPolicy::Parallel;
};

SemContext makeContext(const Model& model, uint64_t fixpointBudget = 0,
                       ExecPolicy policy = ExecPolicy::Parallel);

// Denotation of a formula as a state set. Quantifiers range over the finite
// domain of the quantified variable; modalities use the winning regions
// below. Continuous games require a registered flow table
// (MissingFlowTable otherwise).
StateSet truthSet(const SemContext& ctx, const FormulaPtr& f);

// Two-goal winning regions. X is the angel's goal region, Y the demon's.
StateSet angelRegion(const SemContext& ctx, const GamePtr& g,
                     const StateSet& X, const StateSet& Y);
StateSet demonRegion(const SemContext& ctx, const GamePtr& g,
                     const StateSet& X, const StateSet& Y);

// Classical zero-sum regions: the angel forces X / the demon avoids
// everything outside X. dglDemonRegion(g, X) == complement of
// dglAngelRegion(g, complement(X)).
StateSet dglAngelRegion(const SemContext& ctx, const GamePtr& g,
                        const StateSet& X);
StateSet dglDemonRegion(const SemContext& ctx, const GamePtr& g,
                        const StateSet& X);

}  // namespace dglsc
