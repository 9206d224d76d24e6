// Source-to-source transforms on games and formulas.
//
// systematize(g): strips every dual operator homomorphically — choices,
// sequences and repetitions keep their structure, `^d` disappears, atomic
// games (assignments, differential equations, tests) are untouched. The
// result is the "everyone cooperates" variant of the game: both players'
// choices end up under the angel's control.
//
// complementarize(f): rewrites every two-goal modality into an equivalent
// combination of modalities whose goal pairs are complementary — each
// angel modality in the output is of the shape <g>(R, !R) and each demon
// modality [g](!R, R). Semi-competitive content is expressed through
// systematized copies of the games.
//
// goalsToTests(f): for a modality formula, pushes both goals into the game
// as trailing tests, leaving trivial goals:
//   <a>(P,Q)  ->  <a; ?P; (?Q)^d>(true,true) & <a; (?Q)^d; ?P>(true,true)
// and the same shape with [.] for a demon modality.
#pragma once

#include "dglsc/ast.hpp"

namespace dglsc {

GamePtr systematize(const GamePtr& g);

FormulaPtr complementarize(const FormulaPtr& f);

// True when every modality in f carries a complementary goal pair — the
// shape complementarize guarantees.
bool hasComplementaryGoals(const FormulaPtr& f);

// f must be an angel or demon modality; throws DglscError otherwise.
FormulaPtr goalsToTests(const FormulaPtr& f);

}  // namespace dglsc
