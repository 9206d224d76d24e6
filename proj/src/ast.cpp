#include "dglsc/ast.hpp"

#include <cassert>
#include <utility>

namespace dglsc {

namespace {

TermPtr mkTerm(Term t) { return std::make_shared<const Term>(std::move(t)); }
GamePtr mkGame(HybridGame g) {
  return std::make_shared<const HybridGame>(std::move(g));
}
FormulaPtr mkFml(Formula f) {
  return std::make_shared<const Formula>(std::move(f));
}

}  // namespace

// ---------------------------------------------------------------- factories

TermPtr tVar(std::string name) {
  assert(!name.empty());
  Term t{};
  t.kind = Term::Kind::Variable;
  t.name = std::move(name);
  return mkTerm(std::move(t));
}

TermPtr tConst(Rat value) {
  Term t{};
  t.kind = Term::Kind::Constant;
  t.value = value;
  return mkTerm(std::move(t));
}

static TermPtr tBinary(Term::Kind k, TermPtr l, TermPtr r) {
  assert(l && r);
  Term t{};
  t.kind = k;
  t.l = std::move(l);
  t.r = std::move(r);
  return mkTerm(std::move(t));
}

TermPtr tAdd(TermPtr l, TermPtr r) {
  return tBinary(Term::Kind::Add, std::move(l), std::move(r));
}
TermPtr tSub(TermPtr l, TermPtr r) {
  return tBinary(Term::Kind::Sub, std::move(l), std::move(r));
}
TermPtr tMul(TermPtr l, TermPtr r) {
  return tBinary(Term::Kind::Mul, std::move(l), std::move(r));
}

TermPtr tNeg(TermPtr t) {
  assert(t);
  Term n{};
  n.kind = Term::Kind::Neg;
  n.l = std::move(t);
  return mkTerm(std::move(n));
}

GamePtr gAssign(std::string var, TermPtr rhs) {
  assert(!var.empty() && rhs);
  HybridGame g{};
  g.kind = HybridGame::Kind::Assign;
  g.var = std::move(var);
  g.term = std::move(rhs);
  return mkGame(std::move(g));
}

GamePtr gContinuous(std::string var, TermPtr derivative,
                    FormulaPtr constraint) {
  assert(!var.empty() && derivative);
  HybridGame g{};
  g.kind = HybridGame::Kind::Continuous;
  g.var = std::move(var);
  g.term = std::move(derivative);
  g.fml = constraint ? std::move(constraint) : fTrue();
  return mkGame(std::move(g));
}

GamePtr gTest(FormulaPtr condition) {
  assert(condition);
  HybridGame g{};
  g.kind = HybridGame::Kind::Test;
  g.fml = std::move(condition);
  return mkGame(std::move(g));
}

static GamePtr gBinary(HybridGame::Kind k, GamePtr l, GamePtr r) {
  assert(l && r);
  HybridGame g{};
  g.kind = k;
  g.l = std::move(l);
  g.r = std::move(r);
  return mkGame(std::move(g));
}

GamePtr gChoice(GamePtr l, GamePtr r) {
  return gBinary(HybridGame::Kind::Choice, std::move(l), std::move(r));
}
GamePtr gSeq(GamePtr l, GamePtr r) {
  return gBinary(HybridGame::Kind::Seq, std::move(l), std::move(r));
}

static GamePtr gUnary(HybridGame::Kind k, GamePtr g) {
  assert(g);
  HybridGame n{};
  n.kind = k;
  n.l = std::move(g);
  return mkGame(std::move(n));
}

GamePtr gDual(GamePtr g) { return gUnary(HybridGame::Kind::Dual, std::move(g)); }
GamePtr gRepeat(GamePtr g) {
  return gUnary(HybridGame::Kind::Repeat, std::move(g));
}

FormulaPtr fTrue() {
  static const FormulaPtr singleton = [] {
    Formula f{};
    f.kind = Formula::Kind::True;
    return mkFml(std::move(f));
  }();
  return singleton;
}

FormulaPtr fFalse() {
  static const FormulaPtr singleton = [] {
    Formula f{};
    f.kind = Formula::Kind::False;
    return mkFml(std::move(f));
  }();
  return singleton;
}

FormulaPtr fGeq(TermPtr l, TermPtr r) {
  assert(l && r);
  Formula f{};
  f.kind = Formula::Kind::Geq;
  f.tl = std::move(l);
  f.tr = std::move(r);
  return mkFml(std::move(f));
}

FormulaPtr fNot(FormulaPtr p) {
  assert(p);
  Formula f{};
  f.kind = Formula::Kind::Not;
  f.l = std::move(p);
  return mkFml(std::move(f));
}

FormulaPtr fAnd(FormulaPtr l, FormulaPtr r) {
  assert(l && r);
  Formula f{};
  f.kind = Formula::Kind::And;
  f.l = std::move(l);
  f.r = std::move(r);
  return mkFml(std::move(f));
}

static FormulaPtr fQuant(Formula::Kind k, std::string var, FormulaPtr body) {
  assert(!var.empty() && body);
  Formula f{};
  f.kind = k;
  f.var = std::move(var);
  f.l = std::move(body);
  return mkFml(std::move(f));
}

FormulaPtr fForall(std::string var, FormulaPtr body) {
  return fQuant(Formula::Kind::Forall, std::move(var), std::move(body));
}
FormulaPtr fExists(std::string var, FormulaPtr body) {
  return fQuant(Formula::Kind::Exists, std::move(var), std::move(body));
}

static FormulaPtr fModal(Formula::Kind k, GamePtr g, FormulaPtr angelGoal,
                         FormulaPtr demonGoal) {
  assert(g && angelGoal && demonGoal);
  Formula f{};
  f.kind = k;
  f.game = std::move(g);
  f.l = std::move(angelGoal);
  f.r = std::move(demonGoal);
  return mkFml(std::move(f));
}

FormulaPtr fAngel(GamePtr g, FormulaPtr angelGoal, FormulaPtr demonGoal) {
  return fModal(Formula::Kind::AngelModal, std::move(g), std::move(angelGoal),
                std::move(demonGoal));
}
FormulaPtr fDemon(GamePtr g, FormulaPtr angelGoal, FormulaPtr demonGoal) {
  return fModal(Formula::Kind::DemonModal, std::move(g), std::move(angelGoal),
                std::move(demonGoal));
}

// ------------------------------------------------------------------- sugar

FormulaPtr fOr(FormulaPtr l, FormulaPtr r) {
  return fNot(fAnd(fNot(std::move(l)), fNot(std::move(r))));
}
FormulaPtr fImplies(FormulaPtr l, FormulaPtr r) {
  return fNot(fAnd(std::move(l), fNot(std::move(r))));
}
FormulaPtr fEquiv(FormulaPtr l, FormulaPtr r) {
  return fAnd(fImplies(l, r), fImplies(r, l));
}
FormulaPtr fEq(TermPtr l, TermPtr r) {
  return fAnd(fGeq(l, r), fGeq(r, l));
}
FormulaPtr fLeq(TermPtr l, TermPtr r) {
  return fGeq(std::move(r), std::move(l));
}
FormulaPtr fLt(TermPtr l, TermPtr r) {
  return fNot(fGeq(std::move(l), std::move(r)));
}
FormulaPtr fGt(TermPtr l, TermPtr r) {
  return fNot(fGeq(std::move(r), std::move(l)));
}
FormulaPtr fAngel1(GamePtr g, FormulaPtr goal) {
  FormulaPtr neg = fNot(goal);
  return fAngel(std::move(g), std::move(goal), std::move(neg));
}
FormulaPtr fDemon1(GamePtr g, FormulaPtr goal) {
  FormulaPtr neg = fNot(goal);
  return fDemon(std::move(g), std::move(neg), std::move(goal));
}

bool matchOr(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b) {
  if (f->kind != Formula::Kind::Not) return false;
  const FormulaPtr& body = f->l;
  if (body->kind != Formula::Kind::And) return false;
  if (body->l->kind != Formula::Kind::Not) return false;
  if (body->r->kind != Formula::Kind::Not) return false;
  a = body->l->l;
  b = body->r->l;
  return true;
}

bool matchImplies(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b) {
  if (f->kind != Formula::Kind::Not) return false;
  const FormulaPtr& body = f->l;
  if (body->kind != Formula::Kind::And) return false;
  if (body->r->kind != Formula::Kind::Not) return false;
  a = body->l;
  b = body->r->l;
  return true;
}

// ---------------------------------------------------------------- equality

bool structEq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Variable:
      return a->name == b->name;
    case Term::Kind::Constant:
      return a->value == b->value;
    case Term::Kind::Neg:
      return structEq(a->l, b->l);
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Mul:
      return structEq(a->l, b->l) && structEq(a->r, b->r);
  }
  return false;
}

bool structEq(const GamePtr& a, const GamePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case HybridGame::Kind::Assign:
      return a->var == b->var && structEq(a->term, b->term);
    case HybridGame::Kind::Continuous:
      return a->var == b->var && structEq(a->term, b->term) &&
             structEq(a->fml, b->fml);
    case HybridGame::Kind::Test:
      return structEq(a->fml, b->fml);
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq:
      return structEq(a->l, b->l) && structEq(a->r, b->r);
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      return structEq(a->l, b->l);
  }
  return false;
}

bool structEq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Geq:
      return structEq(a->tl, b->tl) && structEq(a->tr, b->tr);
    case Formula::Kind::Not:
      return structEq(a->l, b->l);
    case Formula::Kind::And:
      return structEq(a->l, b->l) && structEq(a->r, b->r);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return a->var == b->var && structEq(a->l, b->l);
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal:
      return structEq(a->game, b->game) && structEq(a->l, b->l) &&
             structEq(a->r, b->r);
  }
  return false;
}

// ----------------------------------------------------------------- queries

void collectVars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Variable:
      out.insert(t->name);
      return;
    case Term::Kind::Constant:
      return;
    case Term::Kind::Neg:
      collectVars(t->l, out);
      return;
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Mul:
      collectVars(t->l, out);
      collectVars(t->r, out);
      return;
  }
}

void collectVars(const GamePtr& g, std::set<std::string>& out) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      out.insert(g->var);
      collectVars(g->term, out);
      return;
    case HybridGame::Kind::Continuous:
      out.insert(g->var);
      collectVars(g->term, out);
      collectVars(g->fml, out);
      return;
    case HybridGame::Kind::Test:
      collectVars(g->fml, out);
      return;
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq:
      collectVars(g->l, out);
      collectVars(g->r, out);
      return;
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      collectVars(g->l, out);
      return;
  }
}

void collectVars(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Geq:
      collectVars(f->tl, out);
      collectVars(f->tr, out);
      return;
    case Formula::Kind::Not:
      collectVars(f->l, out);
      return;
    case Formula::Kind::And:
      collectVars(f->l, out);
      collectVars(f->r, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out.insert(f->var);
      collectVars(f->l, out);
      return;
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal:
      collectVars(f->game, out);
      collectVars(f->l, out);
      collectVars(f->r, out);
      return;
  }
}

std::set<std::string> varsOf(const TermPtr& t) {
  std::set<std::string> out;
  collectVars(t, out);
  return out;
}
std::set<std::string> varsOf(const GamePtr& g) {
  std::set<std::string> out;
  collectVars(g, out);
  return out;
}
std::set<std::string> varsOf(const FormulaPtr& f) {
  std::set<std::string> out;
  collectVars(f, out);
  return out;
}

static void collectBoundGameVars(const GamePtr& g, std::set<std::string>& out) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
    case HybridGame::Kind::Continuous:
      out.insert(g->var);
      return;
    case HybridGame::Kind::Test:
      return;  // tests never write state
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq:
      collectBoundGameVars(g->l, out);
      collectBoundGameVars(g->r, out);
      return;
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      collectBoundGameVars(g->l, out);
      return;
  }
}

std::set<std::string> boundGameVars(const GamePtr& g) {
  std::set<std::string> out;
  collectBoundGameVars(g, out);
  return out;
}

bool hasModality(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Geq:
      return false;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return hasModality(f->l);
    case Formula::Kind::And:
      return hasModality(f->l) || hasModality(f->r);
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal:
      return true;
  }
  return false;
}

static bool gameHasQuantifier(const GamePtr& g) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      return false;
    case HybridGame::Kind::Continuous:
    case HybridGame::Kind::Test:
      return hasQuantifier(g->fml);
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq:
      return gameHasQuantifier(g->l) || gameHasQuantifier(g->r);
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      return gameHasQuantifier(g->l);
  }
  return false;
}

bool hasQuantifier(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Geq:
      return false;
    case Formula::Kind::Not:
      return hasQuantifier(f->l);
    case Formula::Kind::And:
      return hasQuantifier(f->l) || hasQuantifier(f->r);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return true;
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal:
      // Quantifiers hiding in goals, test conditions or evolution
      // constraints all count.
      return hasQuantifier(f->l) || hasQuantifier(f->r) ||
             gameHasQuantifier(f->game);
  }
  return false;
}

// ------------------------------------------------------------ substitution

TermPtr substitute(const TermPtr& t, const std::string& var,
                   const TermPtr& replacement) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return t->name == var ? replacement : t;
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Neg: {
      TermPtr l = substitute(t->l, var, replacement);
      return l == t->l ? t : tNeg(std::move(l));
    }
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Mul: {
      TermPtr l = substitute(t->l, var, replacement);
      TermPtr r = substitute(t->r, var, replacement);
      if (l == t->l && r == t->r) return t;
      if (t->kind == Term::Kind::Add) return tAdd(std::move(l), std::move(r));
      if (t->kind == Term::Kind::Sub) return tSub(std::move(l), std::move(r));
      return tMul(std::move(l), std::move(r));
    }
  }
  return t;
}

GamePtr substitute(const GamePtr& g, const std::string& var,
                   const TermPtr& replacement) {
  switch (g->kind) {
    case HybridGame::Kind::Assign: {
      if (g->var == var) {
        throw SubstitutionError("cannot substitute for '" + var +
                                "': it is an assignment target in " +
                                print(g));
      }
      TermPtr rhs = substitute(g->term, var, replacement);
      return rhs == g->term ? g : gAssign(g->var, std::move(rhs));
    }
    case HybridGame::Kind::Continuous: {
      if (g->var == var) {
        throw SubstitutionError("cannot substitute for '" + var +
                                "': it evolves in " + print(g));
      }
      TermPtr d = substitute(g->term, var, replacement);
      FormulaPtr c = substitute(g->fml, var, replacement);
      if (d == g->term && c == g->fml) return g;
      return gContinuous(g->var, std::move(d), std::move(c));
    }
    case HybridGame::Kind::Test: {
      FormulaPtr c = substitute(g->fml, var, replacement);
      return c == g->fml ? g : gTest(std::move(c));
    }
    case HybridGame::Kind::Choice:
    case HybridGame::Kind::Seq: {
      GamePtr l = substitute(g->l, var, replacement);
      GamePtr r = substitute(g->r, var, replacement);
      if (l == g->l && r == g->r) return g;
      return g->kind == HybridGame::Kind::Choice
                 ? gChoice(std::move(l), std::move(r))
                 : gSeq(std::move(l), std::move(r));
    }
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat: {
      GamePtr l = substitute(g->l, var, replacement);
      if (l == g->l) return g;
      return g->kind == HybridGame::Kind::Dual ? gDual(std::move(l))
                                               : gRepeat(std::move(l));
    }
  }
  return g;
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                      const TermPtr& replacement) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Geq: {
      TermPtr l = substitute(f->tl, var, replacement);
      TermPtr r = substitute(f->tr, var, replacement);
      if (l == f->tl && r == f->tr) return f;
      return fGeq(std::move(l), std::move(r));
    }
    case Formula::Kind::Not: {
      FormulaPtr l = substitute(f->l, var, replacement);
      return l == f->l ? f : fNot(std::move(l));
    }
    case Formula::Kind::And: {
      FormulaPtr l = substitute(f->l, var, replacement);
      FormulaPtr r = substitute(f->r, var, replacement);
      if (l == f->l && r == f->r) return f;
      return fAnd(std::move(l), std::move(r));
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (f->var == var) return f;  // occurrences below are bound
      if (!varsOf(f->l).count(var)) return f;
      if (varsOf(replacement).count(f->var)) {
        throw SubstitutionError("substituting " + print(replacement) +
                                " for '" + var + "' would be captured by '" +
                                f->var + "'");
      }
      FormulaPtr body = substitute(f->l, var, replacement);
      return f->kind == Formula::Kind::Forall ? fForall(f->var, std::move(body))
                                              : fExists(f->var, std::move(body));
    }
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal: {
      if (!varsOf(f).count(var)) return f;
      std::set<std::string> written = boundGameVars(f->game);
      if (written.count(var)) {
        throw SubstitutionError("cannot substitute for '" + var +
                                "' below " + print(f->game) +
                                " which may rewrite it");
      }
      for (const std::string& w : written) {
        if (varsOf(replacement).count(w)) {
          throw SubstitutionError("substituting " + print(replacement) +
                                  " for '" + var + "' below " +
                                  print(f->game) + " would capture '" + w +
                                  "'");
        }
      }
      GamePtr g = substitute(f->game, var, replacement);
      FormulaPtr l = substitute(f->l, var, replacement);
      FormulaPtr r = substitute(f->r, var, replacement);
      if (g == f->game && l == f->l && r == f->r) return f;
      return f->kind == Formula::Kind::AngelModal
                 ? fAngel(std::move(g), std::move(l), std::move(r))
                 : fDemon(std::move(g), std::move(l), std::move(r));
    }
  }
  return f;
}

// ---------------------------------------------------------------- printing
//
// Precedence schemes (higher binds tighter):
//   terms:    Add/Sub 0   Mul 1   Neg 2   atoms 3      (+,-,* left-assoc)
//   formulas: And 0       !/forall/exists 1   atoms 2  (& right-assoc)
//   games:    Choice 0    Seq 1   Dual/Repeat 2   atoms 3  (++,; right-assoc)

namespace {

int termPrec(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub:
      return 0;
    case Term::Kind::Mul:
      return 1;
    case Term::Kind::Neg:
      return 2;
    default:
      return 3;
  }
}

void printTerm(const TermPtr& t, int minPrec, std::string& out) {
  const bool parens = termPrec(*t) < minPrec;
  if (parens) out += '(';
  switch (t->kind) {
    case Term::Kind::Variable:
      out += t->name;
      break;
    case Term::Kind::Constant:
      // A negative constant in operand position gets parentheses so the
      // reparse folds the sign back into the literal.
      if (t->value < Rat(0) && !parens && minPrec > 0) {
        out += '(';
        out += showRat(t->value);
        out += ')';
      } else {
        out += showRat(t->value);
      }
      break;
    case Term::Kind::Add:
      printTerm(t->l, 0, out);
      out += '+';
      printTerm(t->r, 1, out);
      break;
    case Term::Kind::Sub:
      printTerm(t->l, 0, out);
      out += '-';
      printTerm(t->r, 1, out);
      break;
    case Term::Kind::Mul:
      printTerm(t->l, 1, out);
      out += '*';
      printTerm(t->r, 2, out);
      break;
    case Term::Kind::Neg:
      out += '-';
      // -(3) keeps the negation node distinct from a negative literal.
      if (t->l->kind == Term::Kind::Constant && t->l->value >= Rat(0)) {
        out += '(';
        out += showRat(t->l->value);
        out += ')';
      } else {
        printTerm(t->l, 2, out);
      }
      break;
  }
  if (parens) out += ')';
}

int gamePrec(const HybridGame& g) {
  switch (g.kind) {
    case HybridGame::Kind::Choice:
      return 0;
    case HybridGame::Kind::Seq:
      return 1;
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat:
      return 2;
    default:
      return 3;
  }
}

void printFormula(const FormulaPtr& f, int minPrec, std::string& out);

void printGame(const GamePtr& g, int minPrec, std::string& out) {
  const bool parens = gamePrec(*g) < minPrec;
  if (parens) out += '(';
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      out += g->var;
      out += ":=";
      printTerm(g->term, 0, out);
      break;
    case HybridGame::Kind::Continuous:
      out += '{';
      out += g->var;
      out += "'=";
      printTerm(g->term, 0, out);
      if (g->fml->kind != Formula::Kind::True) {
        out += " & ";
        printFormula(g->fml, 0, out);
      }
      out += '}';
      break;
    case HybridGame::Kind::Test:
      out += '?';
      printFormula(g->fml, 0, out);
      break;
    case HybridGame::Kind::Choice:
      printGame(g->l, 1, out);
      out += " ++ ";
      printGame(g->r, 0, out);
      break;
    case HybridGame::Kind::Seq:
      printGame(g->l, 2, out);
      out += "; ";
      printGame(g->r, 1, out);
      break;
    case HybridGame::Kind::Dual:
    case HybridGame::Kind::Repeat: {
      // Postfix operators glue to their operand; anything that is not
      // already self-delimiting (braces) or itself postfix gets wrapped so
      // the `*` / `^d` cannot be read as part of a term or test formula.
      const HybridGame::Kind ok = g->l->kind;
      const bool wrap = ok == HybridGame::Kind::Assign ||
                        ok == HybridGame::Kind::Test ||
                        ok == HybridGame::Kind::Choice ||
                        ok == HybridGame::Kind::Seq;
      if (wrap) out += '(';
      printGame(g->l, wrap ? 0 : 2, out);
      if (wrap) out += ')';
      out += g->kind == HybridGame::Kind::Dual ? "^d" : "*";
      break;
    }
  }
  if (parens) out += ')';
}

int formulaPrec(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::And:
      return 0;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return 1;
    default:
      return 2;
  }
}

void printFormula(const FormulaPtr& f, int minPrec, std::string& out) {
  const bool parens = formulaPrec(*f) < minPrec;
  if (parens) out += '(';
  switch (f->kind) {
    case Formula::Kind::True:
      out += "true";
      break;
    case Formula::Kind::False:
      out += "false";
      break;
    case Formula::Kind::Geq:
      printTerm(f->tl, 0, out);
      out += ">=";
      printTerm(f->tr, 0, out);
      break;
    case Formula::Kind::Not:
      out += '!';
      printFormula(f->l, 1, out);
      break;
    case Formula::Kind::And:
      printFormula(f->l, 1, out);
      out += " & ";
      printFormula(f->r, 0, out);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f->kind == Formula::Kind::Forall ? "forall " : "exists ";
      out += f->var;
      out += ' ';
      printFormula(f->l, 1, out);
      break;
    case Formula::Kind::AngelModal:
      out += '<';
      printGame(f->game, 0, out);
      out += ">(";
      printFormula(f->l, 0, out);
      out += ", ";
      printFormula(f->r, 0, out);
      out += ')';
      break;
    case Formula::Kind::DemonModal:
      out += '[';
      printGame(f->game, 0, out);
      out += "](";
      printFormula(f->l, 0, out);
      out += ", ";
      printFormula(f->r, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const TermPtr& t) {
  std::string out;
  printTerm(t, 0, out);
  return out;
}

std::string print(const GamePtr& g) {
  std::string out;
  printGame(g, 0, out);
  return out;
}

std::string print(const FormulaPtr& f) {
  std::string out;
  printFormula(f, 0, out);
  return out;
}

}  // namespace dglsc
