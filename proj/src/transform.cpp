#include "dglsc/transform.hpp"

namespace dglsc {

GamePtr systematize(const GamePtr& g) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
    case HybridGame::Kind::Continuous:
    case HybridGame::Kind::Test:
      return g;
    case HybridGame::Kind::Choice: {
      GamePtr l = systematize(g->l);
      GamePtr r = systematize(g->r);
      if (l == g->l && r == g->r) return g;
      return gChoice(std::move(l), std::move(r));
    }
    case HybridGame::Kind::Seq: {
      GamePtr l = systematize(g->l);
      GamePtr r = systematize(g->r);
      if (l == g->l && r == g->r) return g;
      return gSeq(std::move(l), std::move(r));
    }
    case HybridGame::Kind::Dual:
      return systematize(g->l);  // the dual evaporates
    case HybridGame::Kind::Repeat: {
      GamePtr l = systematize(g->l);
      if (l == g->l) return g;
      return gRepeat(std::move(l));
    }
  }
  return g;
}

namespace {

// complementarize recursion over games: only the formulas nested inside
// tests and constraints change.
GamePtr complementarizeGame(const GamePtr& g) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      return g;
    case HybridGame::Kind::Continuous: {
      // Constraints are quantifier- and modality-free, so nothing changes;
      // recurse anyway to keep the traversal total.
      FormulaPtr c = complementarize(g->fml);
      if (c == g->fml) return g;
      return gContinuous(g->var, g->term, std::move(c));
    }
    case HybridGame::Kind::Test: {
      FormulaPtr c = complementarize(g->fml);
      if (c == g->fml) return g;
      return gTest(std::move(c));
    }
    case HybridGame::Kind::Choice: {
      GamePtr l = complementarizeGame(g->l);
      GamePtr r = complementarizeGame(g->r);
      if (l == g->l && r == g->r) return g;
      return gChoice(std::move(l), std::move(r));
    }
    case HybridGame::Kind::Seq: {
      GamePtr l = complementarizeGame(g->l);
      GamePtr r = complementarizeGame(g->r);
      if (l == g->l && r == g->r) return g;
      return gSeq(std::move(l), std::move(r));
    }
    case HybridGame::Kind::Dual: {
      GamePtr l = complementarizeGame(g->l);
      if (l == g->l) return g;
      return gDual(std::move(l));
    }
    case HybridGame::Kind::Repeat: {
      GamePtr l = complementarizeGame(g->l);
      if (l == g->l) return g;
      return gRepeat(std::move(l));
    }
  }
  return g;
}

bool gameHasComplementaryGoals(const GamePtr& g) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      return true;
    case HybridGame::Kind::Continuous:
    case HybridGame::Kind::Test:
      return hasComplementaryGoals(g->fml);
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq:
      return gameHasComplementaryGoals(g->l) &&
             gameHasComplementaryGoals(g->r);
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      return gameHasComplementaryGoals(g->l);
  }
  return true;
}

}  // namespace

FormulaPtr complementarize(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Geq:
      return f;
    case Formula::Kind::Not: {
      FormulaPtr l = complementarize(f->l);
      return l == f->l ? f : fNot(std::move(l));
    }
    case Formula::Kind::And: {
      FormulaPtr l = complementarize(f->l);
      FormulaPtr r = complementarize(f->r);
      if (l == f->l && r == f->r) return f;
      return fAnd(std::move(l), std::move(r));
    }
    case Formula::Kind::Forall: {
      FormulaPtr l = complementarize(f->l);
      return l == f->l ? f : fForall(f->var, std::move(l));
    }
    case Formula::Kind::Exists: {
      FormulaPtr l = complementarize(f->l);
      return l == f->l ? f : fExists(f->var, std::move(l));
    }
    case Formula::Kind::AngelModal: {
      const GamePtr g = complementarizeGame(f->game);
      const FormulaPtr p = complementarize(f->l);
      const FormulaPtr q = complementarize(f->r);
      // <g>(P,Q)  ->  <g^{-d}>(P&Q) | <g>P, both with complementary goals.
      const FormulaPtr joint = fAngel1(systematize(g), fAnd(p, q));
      return fOr(joint, fAngel1(g, p));
    }
    case Formula::Kind::DemonModal: {
      const GamePtr g = complementarizeGame(f->game);
      const FormulaPtr p = complementarize(f->l);
      const FormulaPtr q = complementarize(f->r);
      // [g](P,Q)  ->  <g^{-d}>(P&Q) | [g]Q.
      const FormulaPtr joint = fAngel1(systematize(g), fAnd(p, q));
      return fOr(joint, fDemon1(g, q));
    }
  }
  return f;
}

bool hasComplementaryGoals(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Geq:
      return true;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return hasComplementaryGoals(f->l);
    case Formula::Kind::And:
      return hasComplementaryGoals(f->l) && hasComplementaryGoals(f->r);
    case Formula::Kind::AngelModal: {
      // Expect <g>(R, !R).
      const bool shape = f->r->kind == Formula::Kind::Not &&
                         structEq(f->r->l, f->l);
      return shape && hasComplementaryGoals(f->l) &&
             gameHasComplementaryGoals(f->game);
    }
    case Formula::Kind::DemonModal: {
      // Expect [g](!R, R).
      const bool shape = f->l->kind == Formula::Kind::Not &&
                         structEq(f->l->l, f->r);
      return shape && hasComplementaryGoals(f->r) &&
             gameHasComplementaryGoals(f->game);
    }
  }
  return true;
}

FormulaPtr goalsToTests(const FormulaPtr& f) {
  if (f->kind != Formula::Kind::AngelModal &&
      f->kind != Formula::Kind::DemonModal) {
    throw DglscError("goalsToTests expects a modality, got " + print(f));
  }
  const GamePtr& a = f->game;
  const FormulaPtr& p = f->l;
  const FormulaPtr& q = f->r;
  const GamePtr pThenQ = gSeq(a, gSeq(gTest(p), gDual(gTest(q))));
  const GamePtr qThenP = gSeq(a, gSeq(gDual(gTest(q)), gTest(p)));
  if (f->kind == Formula::Kind::AngelModal) {
    return fAnd(fAngel(pThenQ, fTrue(), fTrue()),
                fAngel(qThenP, fTrue(), fTrue()));
  }
  return fAnd(fDemon(pThenQ, fTrue(), fTrue()),
              fDemon(qThenP, fTrue(), fTrue()));
}

}  // namespace dglsc
