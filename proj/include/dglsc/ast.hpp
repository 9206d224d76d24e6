// Abstract syntax for terms, hybrid games and two-goal formulas.
//
// The core grammar is deliberately small:
//
//   terms     e ::= x | c | e+e | e-e | e*e | -e
//   games     g ::= x:=e | {x'=e & F} | ?F | g++g | g;g | g^d | g*
//   formulas  F ::= true | false | e>=e | !F | F&F | forall x F
//               | exists x F | <g>(F,F) | [g](F,F)
//
// Everything else (|, ->, <->, =, <=, <, >, single-goal modalities) is
// surface syntax that desugars into the core at construction/parse time and
// is never re-printed. Modalities always carry both goals: the first is the
// goal the angel pursues, the second the goal the demon pursues.
//
// Nodes are immutable and shared via shared_ptr<const ...>; structural
// equality (not pointer identity) is the notion of sameness everywhere.
#pragma once

#include <memory>
#include <set>
#include <string>

#include "dglsc/errors.hpp"
#include "dglsc/rational.hpp"

namespace dglsc {

struct Term;
struct HybridGame;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using GamePtr = std::shared_ptr<const HybridGame>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Term {
  enum class Kind { Variable, Constant, Add, Sub, Mul, Neg };
  Kind kind;
  std::string name;  // Variable
  Rat value;         // Constant
  TermPtr l, r;      // Add/Sub/Mul use l,r; Neg uses l
};

struct HybridGame {
  enum class Kind { Assign, Continuous, Test, Choice, Seq, Dual, Repeat };
  Kind kind;
  std::string var;  // Assign target / Continuous evolved variable
  TermPtr term;     // Assign rhs / Continuous derivative
  FormulaPtr fml;   // Continuous evolution constraint / Test condition
  GamePtr l, r;     // Choice/Seq use l,r; Dual/Repeat use l
};

struct Formula {
  enum class Kind {
    True,
    False,
    Geq,
    Not,
    And,
    Forall,
    Exists,
    AngelModal,
    DemonModal
  };
  Kind kind;
  TermPtr tl, tr;   // Geq
  std::string var;  // Forall/Exists binder
  FormulaPtr l, r;  // Not/Forall/Exists use l; And uses l,r;
                    // modalities: l = angel goal, r = demon goal
  GamePtr game;     // modalities
};

// ---------------------------------------------------------------- factories

TermPtr tVar(std::string name);
TermPtr tConst(Rat value);
TermPtr tAdd(TermPtr l, TermPtr r);
TermPtr tSub(TermPtr l, TermPtr r);
TermPtr tMul(TermPtr l, TermPtr r);
TermPtr tNeg(TermPtr t);

GamePtr gAssign(std::string var, TermPtr rhs);
// constraint may be null, meaning `true`.
GamePtr gContinuous(std::string var, TermPtr derivative, FormulaPtr constraint);
GamePtr gTest(FormulaPtr condition);
GamePtr gChoice(GamePtr l, GamePtr r);
GamePtr gSeq(GamePtr l, GamePtr r);
GamePtr gDual(GamePtr g);
GamePtr gRepeat(GamePtr g);

FormulaPtr fTrue();
FormulaPtr fFalse();
FormulaPtr fGeq(TermPtr l, TermPtr r);
FormulaPtr fNot(FormulaPtr f);
FormulaPtr fAnd(FormulaPtr l, FormulaPtr r);
FormulaPtr fForall(std::string var, FormulaPtr body);
FormulaPtr fExists(std::string var, FormulaPtr body);
FormulaPtr fAngel(GamePtr g, FormulaPtr angelGoal, FormulaPtr demonGoal);
FormulaPtr fDemon(GamePtr g, FormulaPtr angelGoal, FormulaPtr demonGoal);

// ------------------------------------------------- sugar (desugars at once)

FormulaPtr fOr(FormulaPtr l, FormulaPtr r);       // !(!l & !r)
FormulaPtr fImplies(FormulaPtr l, FormulaPtr r);  // !(l & !r)
FormulaPtr fEquiv(FormulaPtr l, FormulaPtr r);    // (l->r) & (r->l)
FormulaPtr fEq(TermPtr l, TermPtr r);             // l>=r & r>=l
FormulaPtr fLeq(TermPtr l, TermPtr r);            // r>=l
FormulaPtr fLt(TermPtr l, TermPtr r);             // !(l>=r)
FormulaPtr fGt(TermPtr l, TermPtr r);             // !(r>=l)
FormulaPtr fAngel1(GamePtr g, FormulaPtr goal);   // <g>P  = <g>(P,!P)
FormulaPtr fDemon1(GamePtr g, FormulaPtr goal);   // [g]Q  = [g](!Q,Q)

// Recognisers for the desugared encodings. `matchOr` accepts !(!a & !b) and
// yields (a,b); `matchImplies` accepts !(a & !b) and yields (a,b). The two
// shapes overlap (an Or is also an Implies of a negation) — callers choose
// the reading they need; both are classically faithful.
bool matchOr(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b);
bool matchImplies(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b);

// ----------------------------------------------------------------- queries

bool structEq(const TermPtr& a, const TermPtr& b);
bool structEq(const GamePtr& a, const GamePtr& b);
bool structEq(const FormulaPtr& a, const FormulaPtr& b);

// All variable names occurring anywhere (free, bound, binders, targets).
void collectVars(const TermPtr& t, std::set<std::string>& out);
void collectVars(const GamePtr& g, std::set<std::string>& out);
void collectVars(const FormulaPtr& f, std::set<std::string>& out);
std::set<std::string> varsOf(const TermPtr& t);
std::set<std::string> varsOf(const GamePtr& g);
std::set<std::string> varsOf(const FormulaPtr& f);

// Variables a game may write: assignment targets and evolved variables,
// collected through the whole game tree.
std::set<std::string> boundGameVars(const GamePtr& g);

// True if the formula contains a modality / quantifier anywhere.
bool hasModality(const FormulaPtr& f);
bool hasQuantifier(const FormulaPtr& f);

// ------------------------------------------------------------ substitution
//
// Capture-avoiding substitution of `replacement` for free occurrences of
// `var`. Refuses (SubstitutionError) to substitute below a quantifier that
// binds `var`'s replacement's variables (capture), or into a modality whose
// game may write `var` or any variable of the replacement — uniform
// substitution's soundness condition on games.

TermPtr substitute(const TermPtr& t, const std::string& var,
                   const TermPtr& replacement);
FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                      const TermPtr& replacement);
GamePtr substitute(const GamePtr& g, const std::string& var,
                   const TermPtr& replacement);

// ---------------------------------------------------------------- printing
//
// Prints core syntax only, with minimal parentheses; parse(print(x)) == x
// structurally for every well-formed node.

std::string print(const TermPtr& t);
std::string print(const GamePtr& g);
std::string print(const FormulaPtr& f);

}  // namespace dglsc
