// Proof-script checker: axiom rewrites, rule application, sequent
// bookkeeping and leaf discharge.
//
// The kernel is a checker, not a prover: every step names its rule, its
// position and any content the rule cannot read off the sequent
// (instantiation map), and applyRule computes the premise sequents
// deterministically — there is no unification search.
//
// Rule identifiers
//   axioms (directed equivalences, direction inferred from which side
//   matches the redex):
//     assignA contA testA choiceA seqA dualA iterA
//     assignD contD testD choiceD seqD dualD iterD det
//   derived laws (explicit instantiation required):
//     andAD iterAD id reA reD        (equivalences)
//     impAD spA                      (implications)
//   rules: M1 M2 FP FP2 ind cut
//   first-order / structural: fol(notL) fol(notR) fol(andL) fol(andR)
//     fol(orL) fol(orR1) fol(orR2) fol(implyR) fol(existsR) fol(weakL)
//     fol(weakR) fol(id)
//   leaves: prop(taut) leafArith leafModel
//
// Positions
//   "-"            the whole sequent (cut, fol(id), leaves, and the
//                  sequent form  A0 |- S0  of M1/M2/FP/FP2/ind)
//   "A<i>"/"S<i>"  i-th antecedent/succedent formula
//   "S<i>.j.k"     descend into subformulas: !F and quantifiers have child
//                  0; F & G children 0,1; modalities child 0 = angel goal,
//                  1 = demon goal. Derived connectives are addressed
//                  through their encodings (P | Q is !(!P & !Q)).
//   Rewrites under an odd number of negations are rejected; equivalence
//   axioms may be used on either side of the sequent, implication laws
//   obey polarity (succedent: replace right-hand side by left; antecedent:
//   left by right).
//
// A one-step proof of an axiom instance is supported: applying an axiom at
// a succedent formula  L <-> R  where the axiom rewrites L to R (or R to L)
// closes the goal with no premises. The same works for the equivalence-shaped
// derived laws given their instantiation.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglsc/ast.hpp"
#include "dglsc/model.hpp"

namespace dglsc {

// ----------------------------------------------------------------- sequents

struct Sequent {
  std::vector<FormulaPtr> antecedent;
  std::vector<FormulaPtr> succedent;
};

bool structEq(const Sequent& a, const Sequent& b);
std::string print(const Sequent& s);
// And of the antecedent (empty: true) implies Or of the succedent
// (empty: false), as one formula.
FormulaPtr sequentFormula(const Sequent& s);

// -------------------------------------------------------------- proof steps

// Metavariable values, separated by syntactic category. Script files fill
// these by trying formula, then game, then term on each `name := value`
// entry.
struct Instantiation {
  std::map<std::string, FormulaPtr> formulas;
  std::map<std::string, GamePtr> games;
  std::map<std::string, TermPtr> terms;

  bool empty() const {
    return formulas.empty() && games.empty() && terms.empty();
  }
};

struct ProofStep {
  std::string ruleId;      // e.g. "seqA", "fol(andR)", "leafArith"
  std::string position;    // e.g. "-", "S0", "S0.0.1"
  Instantiation inst;
  std::vector<ProofStep> premises;
  std::string label;       // script step id, for diagnostics; may be empty
};

struct ProofScript {
  Sequent goal;
  ProofStep root;
  std::optional<std::string> modelRef;  // model file for leaf discharge
  std::optional<std::string> baseDir;   // resolves a relative modelRef
};

// --------------------------------------------------------------- the kernel

// Computes the premise sequents step demands when applied to s. Axioms,
// rules and structural steps are validated here; the model-dependent
// leaves (leafArith with free variables, leafModel) are only
// shape-checked and return no premises — checkProof discharges them.
// Throws RuleError (or SubstitutionError) when the step does not apply.
std::vector<Sequent> applyRule(const Sequent& s, const ProofStep& step);

// Left- and right-hand side of one deviation law (andAD, iterAD, impAD,
// id, spA, reA, reD) instantiated with the given games and goal formulas.
// beta may be null for the single-game laws. "reD-alt" builds the variant
// with a plain alpha modality in the right-hand side's first disjunct; it
// is not a rule of the calculus (it has countermodels) and exists for
// tests only.
std::pair<FormulaPtr, FormulaPtr> deviationLawSides(const std::string& id,
                                                    const GamePtr& alpha,
                                                    const GamePtr& beta,
                                                    const FormulaPtr& p,
                                                    const FormulaPtr& q);

struct Verdict {
  bool accepted = false;
  std::string stepPath;  // dotted premise path from the root, e.g. "0.1"
  std::string reason;    // empty when accepted
};

// Depth-first validation of the whole script: every step's applyRule
// output must line up with its recorded premises, and every leaf must
// discharge. `model` overrides the script's modelRef when given.
Verdict checkProof(const ProofScript& script, const Model* model = nullptr);

// ------------------------------------------------------------- script files

// Line-oriented format ('#' comments):
//   model "path/to.model"            (optional)
//   goal  P, Q |- R
//   step <id> <ruleId> at <pos> [with {x := v, ...}] [premises [i, j]]
// Step ids are positive integers; exactly one step is referenced by no
// other step and becomes the root. `path` in `model` is resolved relative
// to the script file's directory by loadProofScript.
ProofScript parseProofScript(const std::string& text);
ProofScript loadProofScript(const std::string& path);

// ------------------------------------------------------------ derived rules

// Demon monotonicity is not a primitive rule; it expands into the dual
// axiom and the angel monotonicity rules. The expansion proves
//   [game](p1, q1) -> [game](p2, q2)
// from premise proofs of   |- q1 -> q2   and of   |- p1 -> p2   (M1) or
// |- q1 & p1 -> false  (M2, p2 arbitrary).
struct DemonMonotonicityInput {
  GamePtr game;
  FormulaPtr p1, q1, p2, q2;
  bool useM2 = false;
  ProofStep premise1;  // proves |- q1 -> q2
  ProofStep premise2;  // proves |- p1 -> p2, or the M2 disjointness premise
};
ProofScript deriveDemonMonotonicity(const DemonMonotonicityInput& in);

// Kernel proof of one complementarization instance:
//   angel:  <g>(P,Q) <-> <sysg>(P & Q) | <g>P
//   demon:  [g](P,Q) <-> <sysg>(P & Q) | [g]Q
// (sysg = systematize(g)). Supported for games built from assignments,
// tests, choice and dual; other constructors throw RuleError (they are
// covered semantically, not syntactically).
ProofScript deriveComplementarization(bool angel, const GamePtr& g,
                                      const FormulaPtr& p,
                                      const FormulaPtr& q);

}  // namespace dglsc
