// Brute-force oracles and randomised checking.
//
// Everything here exists to cross-examine the main evaluator:
//   - lfp/gfpByEnumeration characterise fixpoints extensionally (scan of
//     all 2^|S| subsets) without touching the iterative code path;
//   - genGame / genFormula / genStateSet produce seeded random inputs with
//     a fixed cross-platform draw scheme, so a failing seed reproduces
//     anywhere;
//   - checkLemma replays the library's structural laws (monotonicity,
//     embedding identities, axiom and rule soundness) over seed ranges.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

namespace dglsc {

// ------------------------------------------------------------------- rng

// Deterministic RNG with a pinned draw scheme: all draws go through
// uniform(n) = next() % n so results are identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : mt_(seed) {}
  uint64_t uniform(uint64_t n) { return mt_() % n; }
  // True with probability num/den.
  bool chance(uint64_t num, uint64_t den) { return uniform(den) < num; }

 private:
  std::mt19937_64 mt_;
};

// ---------------------------------------------------- enumeration oracles

// Least fixpoint of a monotone set transformer as the intersection of all
// pre-fixpoints {Z | f(Z) subseteq Z}, by scanning every subset of an
// n-state space. SpaceTooLarge for n > 16. Never touches the iterative
// fixpoint engine.
StateSet lfpByEnumeration(uint64_t n,
                          const std::function<StateSet(const StateSet&)>& f);

// Greatest fixpoint as the union of all post-fixpoints {Z | Z subseteq
// f(Z)}; same contract.
StateSet gfpByEnumeration(uint64_t n,
                          const std::function<StateSet(const StateSet&)>& f);

// ---------------------------------------------------- random generation

struct GenOptions {
  uint64_t gameDepth = 2;     // nesting budget for generated games
  uint64_t formulaDepth = 2;  // nesting budget for generated formulas
  bool allowContinuous = false;
  // Derivative constants with registered flow tables ("x'=c" for every
  // variable x and every c listed here).
  std::vector<long long> contConsts;
};

// Random game over the space's variables. Root constructor frequencies at
// positive depth: choice .20, seq .20, dual .175, repeat .175, atomic .25.
GamePtr genGame(Rng& rng, const StateSpace& space, const GenOptions& opt);

// Random formula; may contain quantifiers and modalities over genGame
// games (depth permitting).
FormulaPtr genFormula(Rng& rng, const StateSpace& space,
                      const GenOptions& opt);

// Random modality- and quantifier-free formula (used for goals that will
// be substituted into).
FormulaPtr genPropFormula(Rng& rng, const StateSpace& space, uint64_t depth);

// Random term over the space's variables; in strict mode sticks to domain
// constants and variables so assignments stay in range.
TermPtr genTerm(Rng& rng, const StateSpace& space, uint64_t depth);

StateSet genStateSet(Rng& rng, uint64_t n);

// Characteristic formula of a state set: a disjunction of full state
// descriptions. Exact: truthSet(ctx, stateSetToFormula(space, s)) == s.
FormulaPtr stateSetToFormula(const StateSpace& space, const StateSet& s);

// Builds the model checkLemma evaluates on: the given space plus Euler
// flow tables "v'=c" (unit step) for every variable v and every constant
// c in `derivConsts`.
Model buildLemmaModel(const StateSpace& space,
                      const std::vector<long long>& derivConsts);

// ---------------------------------------------------------- lemma checks

// Lemma / law identifiers accepted by checkLemma:
//   L1, L2, L3, Cor-det, L4, Cor-coop, L5, CA1, CA2
//   axiom-soundness(<id>) with <id> one of
//     assignA contA testA choiceA seqA dualA iterA
//     assignD contD testD choiceD seqD dualD iterD det
//     M1 M2 FP cut andAD iterAD FP2 ind impAD spA id reA reD
std::vector<std::string> lemmaIds();

struct LemmaReport {
  std::string lemmaId;
  uint64_t seedLo = 0;
  uint64_t seedHi = 0;
  uint64_t passed = 0;
  uint64_t failed = 0;
  std::vector<std::string> lines;  // "<seed>,pass" or "<seed>,fail,<detail>"
  bool allPassed() const { return failed == 0; }
};

// Replays `lemmaId` for every seed in [seedLo, seedHi] on the given space.
// Seeds are independent; with ExecPolicy::Parallel they run under OpenMP
// (per-seed evaluation itself stays serial). axiom-soundness(contA/contD)
// require a modular space with a uniform modulus and at least two
// variables.
LemmaReport checkLemma(const std::string& lemmaId, uint64_t seedLo,
                       uint64_t seedHi, const StateSpace& space,
                       ExecPolicy pol = ExecPolicy::Parallel);

// -------------------------------------------- axiom / rule instantiation

// A randomly instantiated axiom or rule, packaged for a semantic check.
struct OracleInstance {
  enum class Kind {
    Equiv,    // truth(lhs) == truth(rhs)
    Implies,  // truth(lhs) subseteq truth(rhs)
    Rule      // all premises valid => conclusion valid (premises are
              // generated valid-by-construction and re-asserted)
  };
  Kind kind = Kind::Equiv;
  FormulaPtr lhs, rhs;                // Equiv / Implies
  std::vector<FormulaPtr> premises;   // Rule
  FormulaPtr conclusion;              // Rule
};

// Builds a random instance of the named axiom/rule on the context's model.
// Exposed so tests can cross-check the proof checker's rewrites against
// independently built right-hand sides.
OracleInstance axiomInstance(const std::string& id, Rng& rng,
                             const SemContext& ctx, const GenOptions& opt);

}  // namespace dglsc
