// Proof-script kernel: rule application, script parsing, leaf discharge and
// the derived-rule macros.

#include "dglsc/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <map>
#include <sstream>
#include <utility>

#include "dglsc/errors.hpp"
#include "dglsc/parser.hpp"
#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

namespace dglsc {

// ----------------------------------------------------------------- sequents

bool structEq(const Sequent& a, const Sequent& b) {
  if (a.antecedent.size() != b.antecedent.size() ||
      a.succedent.size() != b.succedent.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.antecedent.size(); ++i) {
    if (!structEq(a.antecedent[i], b.antecedent[i])) return false;
  }
  for (std::size_t i = 0; i < a.succedent.size(); ++i) {
    if (!structEq(a.succedent[i], b.succedent[i])) return false;
  }
  return true;
}

std::string print(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) os << ", ";
    os << print(s.antecedent[i]);
  }
  os << (s.antecedent.empty() ? "|-" : " |-");
  for (std::size_t i = 0; i < s.succedent.size(); ++i) {
    os << (i ? ", " : " ") << print(s.succedent[i]);
  }
  return os.str();
}

FormulaPtr sequentFormula(const Sequent& s) {
  FormulaPtr ante = nullptr;
  for (const FormulaPtr& f : s.antecedent) {
    ante = ante ? fAnd(ante, f) : f;
  }
  FormulaPtr succ = nullptr;
  for (const FormulaPtr& f : s.succedent) {
    succ = succ ? fOr(succ, f) : f;
  }
  if (!ante) return succ ? succ : fFalse();
  return fImplies(ante, succ ? succ : fFalse());
}

// ------------------------------------------------------------------- shared

namespace {

// "P <-> Q" is stored as (P -> Q) & (Q -> P).
bool matchEquiv(const FormulaPtr& f, FormulaPtr& l, FormulaPtr& r) {
  if (!f || f->kind != Formula::Kind::And) return false;
  FormulaPtr a1, b1, a2, b2;
  if (!matchImplies(f->l, a1, b1) || !matchImplies(f->r, a2, b2)) {
    return false;
  }
  if (!structEq(a1, b2) || !structEq(b1, a2)) return false;
  l = a1;
  r = b1;
  return true;
}

// ----------------------------------------------------------------- position

struct Pos {
  enum class Kind { Whole, Ante, Succ };
  Kind kind = Pos::Kind::Whole;
  std::size_t index = 0;
  std::vector<std::size_t> path;
};

Pos parsePosition(const std::string& text, const Sequent& s) {
  if (text == "-") return {};
  Pos pos;
  if (text.empty() || (text[0] != 'A' && text[0] != 'S')) {
    throw RuleError("bad position '" + text + "' (want -, A<i> or S<i>)");
  }
  pos.kind = text[0] == 'A' ? Pos::Kind::Ante : Pos::Kind::Succ;
  std::size_t i = 1;
  const auto number = [&](const char* what) -> std::size_t {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw RuleError("bad position '" + text + "' (missing " +
                      std::string(what) + ")");
    }
    std::size_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + static_cast<std::size_t>(text[i] - '0');
      ++i;
    }
    return v;
  };
  pos.index = number("formula index");
  while (i < text.size()) {
    if (text[i] != '.') {
      throw RuleError("bad position '" + text + "'");
    }
    ++i;
    pos.path.push_back(number("path step"));
  }
  const auto& side =
      pos.kind == Pos::Kind::Ante ? s.antecedent : s.succedent;
  if (pos.index >= side.size()) {
    throw RuleError("position " + text + " is out of range for " + print(s));
  }
  return pos;
}

const FormulaPtr& formulaAt(const Sequent& s, const Pos& pos) {
  return (pos.kind == Pos::Kind::Ante ? s.antecedent
                                      : s.succedent)[pos.index];
}

// Child of a formula node, as addressed by positions.
FormulaPtr childOf(const FormulaPtr& f, std::size_t c) {
  switch (f->kind) {
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (c == 0) return f->l;
      break;
    case Formula::Kind::And:
    case Formula::Kind::AngelModal:
    case Formula::Kind::DemonModal:
      if (c == 0) return f->l;
      if (c == 1) return f->r;
      break;
    default:
      break;
  }
  throw RuleError("position descends into a nonexistent subformula of " +
                  print(f));
}

FormulaPtr rebuildWithChild(const FormulaPtr& f, std::size_t c,
                            const FormulaPtr& sub) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return fNot(sub);
    case Formula::Kind::Forall:
      return fForall(f->var, sub);
    case Formula::Kind::Exists:
      return fExists(f->var, sub);
    case Formula::Kind::And:
      return c == 0 ? fAnd(sub, f->r) : fAnd(f->l, sub);
    case Formula::Kind::AngelModal:
      return c == 0 ? fAngel(f->game, sub, f->r) : fAngel(f->game, f->l, sub);
    case Formula::Kind::DemonModal:
      return c == 0 ? fDemon(f->game, sub, f->r) : fDemon(f->game, f->l, sub);
    default:
      throw RuleError("position descends into a nonexistent subformula");
  }
}

FormulaPtr subformulaAt(const FormulaPtr& f,
                        const std::vector<std::size_t>& path,
                        std::size_t& notsCrossed) {
  FormulaPtr cur = f;
  notsCrossed = 0;
  for (std::size_t c : path) {
    if (cur->kind == Formula::Kind::Not) ++notsCrossed;
    cur = childOf(cur, c);
  }
  return cur;
}

FormulaPtr replaceAt(const FormulaPtr& f, const std::vector<std::size_t>& path,
                     std::size_t k, const FormulaPtr& replacement) {
  if (k == path.size()) return replacement;
  return rebuildWithChild(
      f, path[k], replaceAt(childOf(f, path[k]), path, k + 1, replacement));
}

Sequent withFormula(const Sequent& s, const Pos& pos, const FormulaPtr& f) {
  Sequent out = s;
  (pos.kind == Pos::Kind::Ante ? out.antecedent : out.succedent)[pos.index] =
      f;
  return out;
}

// ---------------------------------------------------------- instantiations

FormulaPtr instFormula(const Instantiation& inst, const std::string& key,
                       const std::string& rule) {
  const auto it = inst.formulas.find(key);
  if (it == inst.formulas.end()) {
    throw RuleError(rule + " needs a formula for metavariable " + key);
  }
  return it->second;
}

GamePtr instGame(const Instantiation& inst, const std::string& key,
                 const std::string& rule) {
  const auto it = inst.games.find(key);
  if (it == inst.games.end()) {
    throw RuleError(rule + " needs a game for metavariable " + key);
  }
  return it->second;
}

TermPtr instTerm(const Instantiation& inst, const std::string& key,
                 const std::string& rule) {
  const auto it = inst.terms.find(key);
  if (it == inst.terms.end()) {
    throw RuleError(rule + " needs a term for metavariable " + key);
  }
  return it->second;
}

void checkInstKeys(const Instantiation& inst, const std::string& rule,
                   std::initializer_list<const char*> allowed) {
  const auto ok = [&](const std::string& k) {
    return std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
             return k == a;
           }) != allowed.end();
  };
  for (const auto& [k, v] : inst.formulas) {
    if (!ok(k)) throw RuleError(rule + ": unexpected metavariable " + k);
  }
  for (const auto& [k, v] : inst.games) {
    if (!ok(k)) throw RuleError(rule + ": unexpected metavariable " + k);
  }
  for (const auto& [k, v] : inst.terms) {
    if (!ok(k)) throw RuleError(rule + ": unexpected metavariable " + k);
  }
}

// ------------------------------------------------------------ axiom tables

// An axiom rewriter maps a redex to the other side of the axiom, or
// nullopt when the redex does not have the right shape. Side conditions
// (solution terms, freshness) throw once the shape has matched.
using Rewriter = std::function<std::optional<FormulaPtr>(
    const FormulaPtr&, const Instantiation&)>;

bool isKind(const FormulaPtr& f, Formula::Kind k) { return f && f->kind == k; }

bool gameKind(const FormulaPtr& f, HybridGame::Kind k) {
  return f->game && f->game->kind == k;
}

// The solution term "x + c*t" used by the differential-equation axioms.
TermPtr linearSolution(const std::string& x, const TermPtr& c,
                       const std::string& tau) {
  return tAdd(tVar(x), tMul(c, tVar(tau)));
}

// Shared shape checks for contA/contD: constant derivative, trivial
// constraint, fresh time variable. Returns the assignment game x := x+c*t.
GamePtr contJump(const FormulaPtr& redex, const Instantiation& inst,
                 const std::string& rule, std::string& tauOut) {
  const GamePtr& ode = redex->game;
  if (ode->term->kind != Term::Kind::Constant) {
    throw RuleError(rule + " supports constant derivatives only, got {" +
                    ode->var + "'=" + print(ode->term) + "}");
  }
  if (!structEq(ode->fml, fTrue())) {
    throw RuleError(rule + " supports trivial evolution constraints only");
  }
  const TermPtr tau = instTerm(inst, "tau", rule);
  if (tau->kind != Term::Kind::Variable) {
    throw RuleError(rule + ": tau must be a variable");
  }
  tauOut = tau->name;
  if (varsOf(redex).count(tauOut)) {
    throw RuleError(rule + ": time variable " + tauOut +
                    " must be fresh for the redex");
  }
  const TermPtr sol = linearSolution(ode->var, ode->term, tauOut);
  const auto it = inst.terms.find("sol");
  if (it != inst.terms.end() && !structEq(it->second, sol)) {
    throw RuleError(rule + ": side condition failed, " + print(it->second) +
                    " is not the solution " + print(sol));
  }
  return gAssign(ode->var, sol);
}

// Forward rewriters for the axioms. Each returns nullopt unless the redex
// is an instance of the axiom's left-hand side.
std::optional<FormulaPtr> axiomForward(const std::string& id,
                                       const FormulaPtr& f,
                                       const Instantiation& inst) {
  using FK = Formula::Kind;
  using GK = HybridGame::Kind;

  if (id == "assignA" || id == "assignD") {
    const bool angel = id == "assignA";
    if (!isKind(f, angel ? FK::AngelModal : FK::DemonModal) ||
        !gameKind(f, GK::Assign)) {
      return std::nullopt;
    }
    return substitute(angel ? f->l : f->r, f->game->var, f->game->term);
  }
  if (id == "contA") {
    if (!isKind(f, FK::AngelModal) || !gameKind(f, GK::Continuous)) {
      return std::nullopt;
    }
    std::string tau;
    const GamePtr jump = contJump(f, inst, id, tau);
    return fExists(tau, fAnd(fGeq(tVar(tau), tConst(Rat(0))),
                             fAngel(jump, f->l, f->r)));
  }
  if (id == "contD") {
    if (!isKind(f, FK::DemonModal) || !gameKind(f, GK::Continuous)) {
      return std::nullopt;
    }
    std::string tau;
    const GamePtr jump = contJump(f, inst, id, tau);
    const FormulaPtr always = fForall(
        tau, fImplies(fGeq(tVar(tau), tConst(Rat(0))),
                      fDemon(jump, f->l, f->r)));
    const FormulaPtr meet = fExists(
        tau, fAnd(fGeq(tVar(tau), tConst(Rat(0))),
                  fAngel(jump, fAnd(f->l, f->r), f->r)));
    return fOr(always, meet);
  }
  if (id == "testA") {
    if (!isKind(f, FK::AngelModal) || !gameKind(f, GK::Test)) {
      return std::nullopt;
    }
    return fAnd(f->game->fml, f->l);
  }
  if (id == "testD") {
    if (!isKind(f, FK::DemonModal) || !gameKind(f, GK::Test)) {
      return std::nullopt;
    }
    return fOr(fNot(f->game->fml), f->r);
  }
  if (id == "choiceA") {
    if (!isKind(f, FK::AngelModal) || !gameKind(f, GK::Choice)) {
      return std::nullopt;
    }
    return fOr(fAngel(f->game->l, f->l, f->r), fAngel(f->game->r, f->l, f->r));
  }
  if (id == "choiceD") {
    if (!isKind(f, FK::DemonModal) || !gameKind(f, GK::Choice)) {
      return std::nullopt;
    }
    const FormulaPtr da = fDemon(f->game->l, f->l, f->r);
    const FormulaPtr db = fDemon(f->game->r, f->l, f->r);
    const FormulaPtr sa = fAngel(f->game->l, f->l, f->r);
    const FormulaPtr sb = fAngel(f->game->r, f->l, f->r);
    return fOr(fAnd(da, db), fOr(fAnd(da, sa), fAnd(db, sb)));
  }
  if (id == "seqA" || id == "seqD") {
    const bool angel = id == "seqA";
    if (!isKind(f, angel ? FK::AngelModal : FK::DemonModal) ||
        !gameKind(f, GK::Seq)) {
      return std::nullopt;
    }
    const FormulaPtr after = fAngel(f->game->r, f->l, f->r);
    const FormulaPtr afterD = fDemon(f->game->r, f->l, f->r);
    return angel ? fAngel(f->game->l, after, afterD)
                 : fDemon(f->game->l, after, afterD);
  }
  if (id == "dualA") {
    if (!isKind(f, FK::AngelModal) || !gameKind(f, GK::Dual)) {
      return std::nullopt;
    }
    return fDemon(f->game->l, f->r, f->l);
  }
  if (id == "dualD") {
    if (!isKind(f, FK::DemonModal) || !gameKind(f, GK::Dual)) {
      return std::nullopt;
    }
    return fAngel(f->game->l, f->r, f->l);
  }
  if (id == "iterA") {
    if (!isKind(f, FK::AngelModal) || !gameKind(f, GK::Repeat)) {
      return std::nullopt;
    }
    const GamePtr unroll = gSeq(f->game->l, gRepeat(f->game->l));
    return fOr(f->l, fAngel(unroll, f->l, f->r));
  }
  if (id == "iterD") {
    if (!isKind(f, FK::DemonModal) || !gameKind(f, GK::Repeat)) {
      return std::nullopt;
    }
    const GamePtr unroll = gSeq(f->game->l, gRepeat(f->game->l));
    const FormulaPtr joint =
        fAnd(fAngel(unroll, f->l, f->r), fDemon(unroll, f->l, f->r));
    const FormulaPtr settled = fAnd(f->r, fDemon1(unroll, f->r));
    return fOr(fAnd(f->l, f->r), fOr(joint, settled));
  }
  if (id == "det") {
    // not <a>P  <->  [a]!P, on the single-goal shapes.
    if (!isKind(f, FK::Not) || !isKind(f->l, FK::AngelModal)) {
      return std::nullopt;
    }
    const FormulaPtr& m = f->l;
    if (!isKind(m->r, FK::Not) || !structEq(m->r->l, m->l)) {
      return std::nullopt;
    }
    return fDemon1(m->game, fNot(m->l));
  }
  return std::nullopt;
}

// Reverse rewriters: read anchors off the redex, rebuild the candidate
// left-hand side and confirm by running the forward rewriter. assignA/D
// and contA/D are not reversible (the right-hand side does not determine
// the redex).
std::optional<FormulaPtr> axiomReverse(const std::string& id,
                                       const FormulaPtr& f,
                                       const Instantiation& inst) {
  using FK = Formula::Kind;
  const auto confirmed = [&](const FormulaPtr& candidate)
      -> std::optional<FormulaPtr> {
    const auto fwd = axiomForward(id, candidate, inst);
    if (fwd && structEq(*fwd, f)) return candidate;
    return std::nullopt;
  };

  if (id == "testA") {
    if (!isKind(f, FK::And)) return std::nullopt;
    const FormulaPtr q = instFormula(inst, "Q", id);
    return confirmed(fAngel(gTest(f->l), f->r, q));
  }
  if (id == "testD") {
    FormulaPtr a, b;
    if (!matchOr(f, a, b) || !isKind(a, FK::Not)) return std::nullopt;
    const FormulaPtr p = instFormula(inst, "P", id);
    return confirmed(fDemon(gTest(a->l), p, b));
  }
  if (id == "choiceA") {
    FormulaPtr a, b;
    if (!matchOr(f, a, b) || !isKind(a, FK::AngelModal)) return std::nullopt;
    if (!isKind(b, FK::AngelModal)) return std::nullopt;
    return confirmed(fAngel(gChoice(a->game, b->game), a->l, a->r));
  }
  if (id == "choiceD") {
    FormulaPtr a, rest;
    if (!matchOr(f, a, rest) || !isKind(a, FK::And)) return std::nullopt;
    if (!isKind(a->l, FK::DemonModal) || !isKind(a->r, FK::DemonModal)) {
      return std::nullopt;
    }
    return confirmed(
        fDemon(gChoice(a->l->game, a->r->game), a->l->l, a->l->r));
  }
  if (id == "seqA" || id == "seqD") {
    const bool angel = id == "seqA";
    if (!isKind(f, angel ? FK::AngelModal : FK::DemonModal)) {
      return std::nullopt;
    }
    if (!isKind(f->l, FK::AngelModal)) return std::nullopt;
    const FormulaPtr candidate =
        angel ? fAngel(gSeq(f->game, f->l->game), f->l->l, f->l->r)
              : fDemon(gSeq(f->game, f->l->game), f->l->l, f->l->r);
    return confirmed(candidate);
  }
  if (id == "dualA") {
    if (!isKind(f, FK::DemonModal)) return std::nullopt;
    return confirmed(fAngel(gDual(f->game), f->r, f->l));
  }
  if (id == "dualD") {
    if (!isKind(f, FK::AngelModal)) return std::nullopt;
    return confirmed(fDemon(gDual(f->game), f->r, f->l));
  }
  if (id == "iterA") {
    FormulaPtr p, rest;
    if (!matchOr(f, p, rest) || !isKind(rest, FK::AngelModal)) {
      return std::nullopt;
    }
    if (!rest->game || rest->game->kind != HybridGame::Kind::Seq) {
      return std::nullopt;
    }
    return confirmed(fAngel(gRepeat(rest->game->l), rest->l, rest->r));
  }
  if (id == "iterD") {
    FormulaPtr head, rest, mid, tail;
    if (!matchOr(f, head, rest) || !matchOr(rest, mid, tail)) {
      return std::nullopt;
    }
    if (!isKind(mid, FK::And) || !isKind(mid->l, FK::AngelModal)) {
      return std::nullopt;
    }
    const GamePtr& u = mid->l->game;
    if (!u || u->kind != HybridGame::Kind::Seq) return std::nullopt;
    return confirmed(fDemon(gRepeat(u->l), mid->l->l, mid->l->r));
  }
  if (id == "det") {
    if (!isKind(f, FK::DemonModal) || !isKind(f->r, FK::Not)) {
      return std::nullopt;
    }
    return confirmed(fNot(fAngel1(f->game, f->r->l)));
  }
  return std::nullopt;
}

bool isAxiomId(const std::string& id) {
  static const char* ids[] = {"assignA", "contA",   "testA", "choiceA",
                              "seqA",    "dualA",   "iterA", "assignD",
                              "contD",   "testD",   "choiceD", "seqD",
                              "dualD",   "iterD",   "det"};
  return std::find_if(std::begin(ids), std::end(ids), [&](const char* a) {
           return id == a;
         }) != std::end(ids);
}

bool isDeviationLawId(const std::string& id) {
  static const char* ids[] = {"andAD", "iterAD", "id", "reA", "reD",
                              "impAD", "spA"};
  return std::find_if(std::begin(ids), std::end(ids), [&](const char* a) {
           return id == a;
         }) != std::end(ids);
}

bool deviationIsEquivalence(const std::string& id) {
  return id != "impAD" && id != "spA";
}

}  // namespace

std::pair<FormulaPtr, FormulaPtr> deviationLawSides(const std::string& id,
                                                    const GamePtr& alpha,
                                                    const GamePtr& beta,
                                                    const FormulaPtr& p,
                                                    const FormulaPtr& q) {
  const FormulaPtr joint = fAnd(p, q);
  const GamePtr sysA = systematize(alpha);
  if (id == "andAD") {
    return {fAnd(fAngel(alpha, p, q), fDemon(alpha, p, q)),
            fAngel1(sysA, joint)};
  }
  if (id == "iterAD") {
    const GamePtr star = gRepeat(alpha);
    const GamePtr unroll = gSeq(alpha, star);
    return {fAnd(fAngel(star, p, q), fDemon(star, p, q)),
            fOr(joint, fAnd(fAngel(unroll, p, q), fDemon(unroll, p, q)))};
  }
  if (id == "impAD") {
    return {fAnd(fAngel1(alpha, p), fDemon1(alpha, q)),
            fAngel1(sysA, joint)};
  }
  if (id == "id") {
    const FormulaPtr coop = fAngel1(sysA, joint);
    return {coop, fOr(coop, fAnd(fAngel1(alpha, p), fDemon1(alpha, q)))};
  }
  if (!beta) {
    throw RuleError(id + " needs a game for metavariable beta");
  }
  const GamePtr sysB = systematize(beta);
  const FormulaPtr jointB = fAngel1(sysB, joint);
  const FormulaPtr jointAB = fAngel1(sysA, jointB);
  if (id == "spA") {
    return {fAnd(fAngel1(alpha, fOr(jointB, fAngel1(beta, p))),
                 fNot(fAngel1(alpha, fAngel1(beta, p)))),
            jointAB};
  }
  if (id == "reA") {
    return {fOr(jointAB, fAngel1(alpha, fOr(jointB, fAngel1(beta, p)))),
            fOr(jointAB, fAngel1(alpha, fAngel1(beta, p)))};
  }
  if (id == "reD" || id == "reD-alt") {
    const FormulaPtr lhs =
        fOr(jointAB, fDemon1(alpha, fOr(jointB, fDemon1(beta, q))));
    // The sound form keeps both games systematized in the first right-hand
    // disjunct. "reD-alt" (a plain angel modality over alpha instead) is
    // exposed only so tests can exhibit a countermodel for it; the proof
    // kernel never accepts it.
    const FormulaPtr head =
        id == "reD" ? jointAB : fAngel1(alpha, jointB);
    return {lhs, fOr(head, fDemon1(alpha, fDemon1(beta, q)))};
  }
  throw RuleError("unknown deviation law " + id);
}

namespace {

std::pair<FormulaPtr, FormulaPtr> deviationSidesFromInst(
    const std::string& id, const Instantiation& inst) {
  checkInstKeys(inst, id, {"alpha", "beta", "P", "Q"});
  const GamePtr alpha = instGame(inst, "alpha", id);
  GamePtr beta = nullptr;
  if (inst.games.count("beta")) beta = inst.games.at("beta");
  return deviationLawSides(id, alpha, beta,
                           instFormula(inst, "P", id),
                           instFormula(inst, "Q", id));
}

// ------------------------------------------------------- ground evaluation

std::optional<Rat> groundTerm(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return std::nullopt;
    case Term::Kind::Constant:
      return t->value;
    case Term::Kind::Neg: {
      const auto v = groundTerm(t->l);
      if (!v) return std::nullopt;
      return -*v;
    }
    default: {
      const auto l = groundTerm(t->l);
      const auto r = groundTerm(t->r);
      if (!l || !r) return std::nullopt;
      if (t->kind == Term::Kind::Add) return *l + *r;
      if (t->kind == Term::Kind::Sub) return *l - *r;
      return *l * *r;
    }
  }
}

std::optional<bool> groundFormula(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Geq: {
      const auto l = groundTerm(f->tl);
      const auto r = groundTerm(f->tr);
      if (!l || !r) return std::nullopt;
      return *l >= *r;
    }
    case Formula::Kind::Not: {
      const auto v = groundFormula(f->l);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Formula::Kind::And: {
      const auto l = groundFormula(f->l);
      const auto r = groundFormula(f->r);
      if (!l || !r) return std::nullopt;
      return *l && *r;
    }
    default:
      return std::nullopt;  // quantifiers and modalities are never ground
  }
}

// ----------------------------------------------------- propositional atoms

// Maximal non-propositional subformulas, keyed by their printed form.
void collectAtoms(const FormulaPtr& f, std::vector<std::string>& order,
                  std::map<std::string, std::size_t>& index) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Not:
      collectAtoms(f->l, order, index);
      return;
    case Formula::Kind::And:
      collectAtoms(f->l, order, index);
      collectAtoms(f->r, order, index);
      return;
    default: {
      const std::string key = print(f);
      if (index.emplace(key, order.size()).second) order.push_back(key);
      return;
    }
  }
}

bool evalProp(const FormulaPtr& f, const std::vector<bool>& val,
              const std::map<std::string, std::size_t>& index) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Not:
      return !evalProp(f->l, val, index);
    case Formula::Kind::And:
      return evalProp(f->l, val, index) && evalProp(f->r, val, index);
    default:
      return val[index.at(print(f))];
  }
}

void checkTautology(const Sequent& s) {
  const FormulaPtr f = sequentFormula(s);
  std::vector<std::string> order;
  std::map<std::string, std::size_t> index;
  collectAtoms(f, order, index);
  if (order.size() > 16) {
    throw RuleError("prop(taut): more than 16 propositional atoms (" +
                    std::to_string(order.size()) + ")");
  }
  const std::size_t total = std::size_t(1) << order.size();
  std::vector<bool> val(order.size());
  for (std::size_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      val[i] = (mask >> i) & 1;
    }
    if (!evalProp(f, val, index)) {
      std::ostringstream os;
      os << "prop(taut): not a tautology; counterexample:";
      for (std::size_t i = 0; i < order.size(); ++i) {
        os << " [" << order[i] << "]=" << (val[i] ? "true" : "false");
      }
      throw RuleError(os.str());
    }
  }
}

// ----------------------------------------------------------- rule handlers

Sequent contextless(FormulaPtr f) {
  return Sequent{{}, {std::move(f)}};
}

// Extracts the implication an angel rule concludes: either the sequent is
// exactly  A0 |- S0  (position "-") or the position names an implication
// formula at a formula root.
std::pair<FormulaPtr, FormulaPtr> ruleConclusion(const Sequent& s,
                                                 const Pos& pos,
                                                 const std::string& rule) {
  if (pos.kind == Pos::Kind::Whole) {
    if (s.antecedent.size() != 1 || s.succedent.size() != 1) {
      throw RuleError(rule +
                      " at - needs exactly one antecedent and one succedent "
                      "formula");
    }
    return {s.antecedent[0], s.succedent[0]};
  }
  if (!pos.path.empty()) {
    throw RuleError(rule + " applies at a formula root");
  }
  if (pos.kind != Pos::Kind::Succ) {
    throw RuleError(rule + " applies in the succedent");
  }
  FormulaPtr l, r;
  if (!matchImplies(formulaAt(s, pos), l, r)) {
    throw RuleError(rule + ": formula is not an implication: " +
                    print(formulaAt(s, pos)));
  }
  return {l, r};
}

std::vector<Sequent> applyMonotonicity(const Sequent& s, const Pos& pos,
                                       bool m2) {
  const std::string rule = m2 ? "M2" : "M1";
  const auto [l, r] = ruleConclusion(s, pos, rule);
  if (!isKind(l, Formula::Kind::AngelModal) ||
      !isKind(r, Formula::Kind::AngelModal) || !structEq(l->game, r->game)) {
    throw RuleError(rule +
                    ": conclusion must relate two angel modalities over the "
                    "same game");
  }
  if (m2) {
    return {contextless(fImplies(l->l, r->l)),
            contextless(fImplies(fAnd(l->l, l->r), fFalse()))};
  }
  return {contextless(fImplies(l->l, r->l)),
          contextless(fImplies(l->r, r->r))};
}

std::vector<Sequent> applyFP(const Sequent& s, const Pos& pos) {
  const auto [l, r] = ruleConclusion(s, pos, "FP");
  if (!isKind(l, Formula::Kind::AngelModal) ||
      !gameKind(l, HybridGame::Kind::Repeat)) {
    throw RuleError("FP: left of the conclusion must be <a*>(P,Q)");
  }
  FormulaPtr r1, r2;
  if (!matchOr(r, r1, r2)) {
    throw RuleError("FP: right of the conclusion must be a disjunction");
  }
  const GamePtr& a = l->game->l;
  const FormulaPtr prem1 = fImplies(fOr(l->l, fAngel1(a, r1)), r1);
  const FormulaPtr prem2 = fImplies(
      fOr(fAnd(l->l, l->r), fAnd(fAngel(a, r2, r2), fDemon(a, r2, r2))), r2);
  return {contextless(prem1), contextless(prem2)};
}

std::vector<Sequent> applyFP2(const Sequent& s, const Pos& pos) {
  const auto [l, r] = ruleConclusion(s, pos, "FP2");
  if (!isKind(l, Formula::Kind::And) ||
      !isKind(l->l, Formula::Kind::AngelModal) ||
      !isKind(l->r, Formula::Kind::DemonModal) ||
      !gameKind(l->l, HybridGame::Kind::Repeat) ||
      !structEq(l->l->game, l->r->game) || !structEq(l->l->l, l->r->l) ||
      !structEq(l->l->r, l->r->r)) {
    throw RuleError("FP2: left of the conclusion must be <a*>(P,Q) & [a*](P,Q)");
  }
  const GamePtr& a = l->l->game->l;
  const FormulaPtr p = l->l->l;
  const FormulaPtr q = l->l->r;
  const FormulaPtr prem = fImplies(
      fOr(fAnd(p, q), fAnd(fAngel(a, r, r), fDemon(a, r, r))), r);
  return {contextless(prem)};
}

std::vector<Sequent> applyInd(const Sequent& s, const Pos& pos) {
  const auto [l, r] = ruleConclusion(s, pos, "ind");
  if (!isKind(r, Formula::Kind::DemonModal) ||
      !gameKind(r, HybridGame::Kind::Repeat) || !structEq(l, r->r)) {
    throw RuleError(
        "ind: conclusion must be Q -> [a*](P,Q) with matching Q");
  }
  const GamePtr& a = r->game->l;
  return {contextless(fImplies(l, fDemon1(a, l)))};
}

// First-order / structural rules.
std::vector<Sequent> applyFol(const Sequent& s, const std::string& name,
                              const Pos& pos, const Instantiation& inst) {
  const auto needSide = [&](Pos::Kind k, const char* what) {
    if (pos.kind != k || !pos.path.empty()) {
      throw RuleError("fol(" + name + ") applies at " + what);
    }
  };
  const auto eraseAt = [](std::vector<FormulaPtr> v, std::size_t i) {
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    return v;
  };

  if (name == "id") {
    if (pos.kind != Pos::Kind::Whole) {
      throw RuleError("fol(id) applies to the whole sequent (position -)");
    }
    for (const FormulaPtr& a : s.antecedent) {
      for (const FormulaPtr& c : s.succedent) {
        if (structEq(a, c)) return {};
      }
    }
    throw RuleError("fol(id): no antecedent formula matches a succedent "
                    "formula in " + print(s));
  }

  if (name == "weakL") {
    needSide(Pos::Kind::Ante, "an antecedent formula");
    return {Sequent{eraseAt(s.antecedent, pos.index), s.succedent}};
  }
  if (name == "weakR") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    return {Sequent{s.antecedent, eraseAt(s.succedent, pos.index)}};
  }

  if (name == "notR") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    const FormulaPtr f = formulaAt(s, pos);
    if (!isKind(f, Formula::Kind::Not)) {
      throw RuleError("fol(notR): formula is not a negation");
    }
    Sequent out{s.antecedent, eraseAt(s.succedent, pos.index)};
    out.antecedent.push_back(f->l);
    return {out};
  }
  if (name == "notL") {
    needSide(Pos::Kind::Ante, "an antecedent formula");
    const FormulaPtr f = formulaAt(s, pos);
    if (!isKind(f, Formula::Kind::Not)) {
      throw RuleError("fol(notL): formula is not a negation");
    }
    Sequent out{eraseAt(s.antecedent, pos.index), s.succedent};
    out.succedent.push_back(f->l);
    return {out};
  }
  if (name == "andR") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    const FormulaPtr f = formulaAt(s, pos);
    if (!isKind(f, Formula::Kind::And)) {
      throw RuleError("fol(andR): formula is not a conjunction");
    }
    return {withFormula(s, pos, f->l), withFormula(s, pos, f->r)};
  }
  if (name == "andL") {
    needSide(Pos::Kind::Ante, "an antecedent formula");
    const FormulaPtr f = formulaAt(s, pos);
    if (!isKind(f, Formula::Kind::And)) {
      throw RuleError("fol(andL): formula is not a conjunction");
    }
    Sequent out = withFormula(s, pos, f->l);
    out.antecedent.insert(
        out.antecedent.begin() + static_cast<std::ptrdiff_t>(pos.index) + 1,
        f->r);
    return {out};
  }
  if (name == "orR1" || name == "orR2") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    FormulaPtr a, b;
    if (!matchOr(formulaAt(s, pos), a, b)) {
      throw RuleError("fol(" + name + "): formula is not a disjunction");
    }
    return {withFormula(s, pos, name == "orR1" ? a : b)};
  }
  if (name == "orL") {
    needSide(Pos::Kind::Ante, "an antecedent formula");
    FormulaPtr a, b;
    if (!matchOr(formulaAt(s, pos), a, b)) {
      throw RuleError("fol(orL): formula is not a disjunction");
    }
    return {withFormula(s, pos, a), withFormula(s, pos, b)};
  }
  if (name == "implyR") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    FormulaPtr a, b;
    if (!matchImplies(formulaAt(s, pos), a, b)) {
      throw RuleError("fol(implyR): formula is not an implication");
    }
    Sequent out = withFormula(s, pos, b);
    out.antecedent.push_back(a);
    return {out};
  }
  if (name == "existsR") {
    needSide(Pos::Kind::Succ, "a succedent formula");
    const FormulaPtr f = formulaAt(s, pos);
    if (!isKind(f, Formula::Kind::Exists)) {
      throw RuleError("fol(existsR): formula is not existential");
    }
    checkInstKeys(inst, "fol(existsR)", {"witness"});
    const TermPtr w = instTerm(inst, "witness", "fol(existsR)");
    return {withFormula(s, pos, substitute(f->l, f->var, w))};
  }
  throw RuleError("unknown rule fol(" + name + ")");
}

}  // namespace

// ------------------------------------------------------------------ kernel

std::vector<Sequent> applyRule(const Sequent& s, const ProofStep& step) {
  const std::string& id = step.ruleId;

  // fol(...) / prop(...) family names.
  std::string family = id, member;
  const auto lp = id.find('(');
  if (lp != std::string::npos && id.back() == ')') {
    family = id.substr(0, lp);
    member = id.substr(lp + 1, id.size() - lp - 2);
  }

  const Pos pos = parsePosition(step.position, s);

  if (family == "fol") {
    if (member != "existsR") checkInstKeys(step.inst, id, {});
    return applyFol(s, member, pos, step.inst);
  }
  if (family == "prop") {
    if (member != "taut") throw RuleError("unknown rule prop(" + member + ")");
    checkInstKeys(step.inst, id, {});
    if (pos.kind != Pos::Kind::Whole) {
      throw RuleError("prop(taut) applies to the whole sequent (position -)");
    }
    checkTautology(s);
    return {};
  }
  if (id == "leafArith" || id == "leafModel") {
    checkInstKeys(step.inst, id, {});
    if (pos.kind != Pos::Kind::Whole) {
      throw RuleError(id + " applies to the whole sequent (position -)");
    }
    return {};  // discharged by checkProof, which holds the model
  }
  if (id == "cut") {
    checkInstKeys(step.inst, id, {"C"});
    if (pos.kind != Pos::Kind::Whole) {
      throw RuleError("cut applies to the whole sequent (position -)");
    }
    const FormulaPtr c = instFormula(step.inst, "C", "cut");
    Sequent withC = s;
    withC.succedent.push_back(c);
    Sequent fromC = s;
    fromC.antecedent.push_back(c);
    return {withC, fromC};
  }
  if (id == "M1" || id == "M2") {
    checkInstKeys(step.inst, id, {});
    return applyMonotonicity(s, pos, id == "M2");
  }
  if (id == "FP") {
    checkInstKeys(step.inst, id, {});
    return applyFP(s, pos);
  }
  if (id == "FP2") {
    checkInstKeys(step.inst, id, {});
    return applyFP2(s, pos);
  }
  if (id == "ind") {
    checkInstKeys(step.inst, id, {});
    return applyInd(s, pos);
  }

  const bool axiom = isAxiomId(id);
  const bool deviation = !axiom && isDeviationLawId(id);
  if (!axiom && !deviation) {
    throw RuleError("unknown rule " + id);
  }
  if (pos.kind == Pos::Kind::Whole) {
    throw RuleError(id + " applies at a formula position, not -");
  }
  if (axiom) {
    checkInstKeys(step.inst, id,
                  {"tau", "sol", "P", "Q"});  // contA/contD, testA/testD rev
  }

  const FormulaPtr host = formulaAt(s, pos);
  std::size_t nots = 0;
  const FormulaPtr redex = subformulaAt(host, pos.path, nots);

  // One-step closure: a succedent formula of the shape L <-> R where the
  // law rewrites one side into the other is itself an instance of the law,
  // so the goal closes with no premises.
  FormulaPtr eqL, eqR;
  if (pos.kind == Pos::Kind::Succ && pos.path.empty() &&
      matchEquiv(redex, eqL, eqR)) {
    if (axiom) {
      const auto closes = [&](const FormulaPtr& from, const FormulaPtr& to) {
        try {
          const auto fwd = axiomForward(id, from, step.inst);
          if (fwd && structEq(*fwd, to)) return true;
        } catch (const RuleError&) {
        }
        try {
          const auto rev = axiomReverse(id, from, step.inst);
          if (rev && structEq(*rev, to)) return true;
        } catch (const RuleError&) {
        }
        return false;
      };
      if (closes(eqL, eqR) || closes(eqR, eqL)) return {};
    } else if (deviationIsEquivalence(id)) {
      const auto [l, r] = deviationSidesFromInst(id, step.inst);
      if ((structEq(eqL, l) && structEq(eqR, r)) ||
          (structEq(eqL, r) && structEq(eqR, l))) {
        return {};
      }
    }
  }

  if (nots % 2 != 0) {
    throw RuleError(id + " cannot rewrite under an odd number of negations");
  }

  FormulaPtr replacement;
  if (axiom) {
    auto out = axiomForward(id, redex, step.inst);
    if (!out) out = axiomReverse(id, redex, step.inst);
    if (!out) {
      throw RuleError(id + " does not match the formula at " + step.position +
                      ": " + print(redex));
    }
    replacement = *out;
  } else {
    const auto [l, r] = deviationSidesFromInst(id, step.inst);
    if (deviationIsEquivalence(id)) {
      if (structEq(redex, l)) {
        replacement = r;
      } else if (structEq(redex, r)) {
        replacement = l;
      } else {
        throw RuleError(id + ": formula at " + step.position +
                        " matches neither side of the law");
      }
    } else {
      // Implication laws obey polarity: in the succedent the proof
      // obligation gets stronger (right side becomes left), in the
      // antecedent weaker (left becomes right).
      const bool succ = pos.kind == Pos::Kind::Succ;
      const FormulaPtr& expect = succ ? r : l;
      if (!structEq(redex, expect)) {
        throw RuleError(id + ": formula at " + step.position +
                        " is not the law's " +
                        (succ ? "right-hand" : "left-hand") + " side");
      }
      replacement = succ ? l : r;
    }
  }
  return {withFormula(s, pos, replaceAt(host, pos.path, 0, replacement))};
}

// --------------------------------------------------------------- checkProof

namespace {

// leafArith: partially ground sequents are accepted when a ground
// succedent formula is true or a ground antecedent formula is false; fully
// ground sequents are evaluated outright; otherwise the model decides.
void dischargeArith(const Sequent& s, const Model* model) {
  bool allGround = true;
  for (const FormulaPtr& f : s.succedent) {
    const auto v = groundFormula(f);
    if (v && *v) return;
    if (!v) allGround = false;
  }
  for (const FormulaPtr& f : s.antecedent) {
    const auto v = groundFormula(f);
    if (v && !*v) return;
    if (!v) allGround = false;
  }
  if (allGround) {
    // Every antecedent formula is true and every succedent formula false.
    throw RuleError("leafArith: ground sequent evaluates to false: " +
                    print(s));
  }
  if (!model) {
    throw RuleError("leafArith: sequent is not ground and no model is "
                    "available: " + print(s));
  }
  const SemContext ctx = makeContext(*model);
  const StateSet t = truthSet(ctx, sequentFormula(s));
  if (t != StateSet::full(model->space.stateCount)) {
    throw RuleError("leafArith: not valid in the model (truth set " +
                    t.hexDump() + "): " + print(s));
  }
}

void dischargeModel(const Sequent& s, const Model* model) {
  if (!model) {
    throw RuleError("leafModel needs a model (script `model` line or --model)");
  }
  const SemContext ctx = makeContext(*model);
  const StateSet t = truthSet(ctx, sequentFormula(s));
  if (t != StateSet::full(model->space.stateCount)) {
    throw RuleError("leafModel: not valid in the model (truth set " +
                    t.hexDump() + "): " + print(s));
  }
}

Verdict rejected(const std::string& path, const ProofStep& step,
                 const std::string& reason) {
  Verdict v;
  v.accepted = false;
  v.stepPath = path;
  v.reason = step.label.empty() ? reason : "step " + step.label + ": " + reason;
  return v;
}

Verdict checkStep(const Sequent& s, const ProofStep& step,
                  const std::string& path, const Model* model) {
  std::vector<Sequent> premises;
  try {
    premises = applyRule(s, step);
    if (step.ruleId == "leafArith") dischargeArith(s, model);
    if (step.ruleId == "leafModel") dischargeModel(s, model);
  } catch (const DglscError& e) {
    return rejected(path, step, e.what());
  }
  if (premises.size() != step.premises.size()) {
    return rejected(path, step,
                    step.ruleId + " requires " +
                        std::to_string(premises.size()) +
                        " premise(s), the step records " +
                        std::to_string(step.premises.size()));
  }
  for (std::size_t i = 0; i < premises.size(); ++i) {
    const Verdict v = checkStep(premises[i], step.premises[i],
                                path + "." + std::to_string(i), model);
    if (!v.accepted) return v;
  }
  Verdict ok;
  ok.accepted = true;
  return ok;
}

}  // namespace

Verdict checkProof(const ProofScript& script, const Model* model) {
  std::optional<Model> owned;
  if (!model && script.modelRef) {
    std::string path = *script.modelRef;
    if (script.baseDir && !path.empty() && path[0] != '/') {
      path = *script.baseDir + "/" + path;
    }
    owned = loadModelFile(path);
    model = &*owned;
  }
  return checkStep(script.goal, script.root, "0", model);
}

// ------------------------------------------------------------- script files

namespace {

// One `name := value` entry: values are tried as formula, then game, then
// term; a parse only counts when it stops right before ',' or '}'.
void parseMetaValue(Parser& p, const std::string& key, Instantiation& inst) {
  const std::size_t start = p.position();
  const auto atBoundary = [&]() {
    return p.peek().kind == Tok::Comma || p.peek().kind == Tok::RBrace;
  };
  const auto taken = [&](const std::string& what) {
    if (inst.formulas.count(key) || inst.games.count(key) ||
        inst.terms.count(key)) {
      p.fail("duplicate metavariable " + key);
    }
    (void)what;
  };
  try {
    FormulaPtr f = p.formula();
    if (atBoundary()) {
      taken("formula");
      inst.formulas[key] = f;
      return;
    }
  } catch (const SyntaxError&) {
  }
  p.rewind(start);
  try {
    GamePtr g = p.game();
    if (atBoundary()) {
      taken("game");
      inst.games[key] = g;
      return;
    }
  } catch (const SyntaxError&) {
  }
  p.rewind(start);
  try {
    TermPtr t = p.term();
    if (atBoundary()) {
      taken("term");
      inst.terms[key] = t;
      return;
    }
  } catch (const SyntaxError&) {
  }
  p.rewind(start);
  p.fail("cannot parse a formula, game or term for metavariable " + key);
}

long long parseStepId(Parser& p) {
  const Token t = p.expect(Tok::Number, "step id");
  if (t.num.denominator() != 1 || t.num.numerator() <= 0) {
    p.fail("step ids are positive integers");
  }
  return t.num.numerator();
}

std::string parseRuleId(Parser& p) {
  std::string id = p.expectIdent("rule name");
  if (p.accept(Tok::LParen)) {
    id += "(" + p.expectIdent("rule member") + ")";
    p.expect(Tok::RParen, "')'");
  }
  return id;
}

std::string parsePositionToken(Parser& p) {
  if (p.accept(Tok::Minus)) return "-";
  std::string pos = p.expectIdent("position (-, A<i> or S<i>)");
  while (p.accept(Tok::Dot)) {
    const Token t = p.expect(Tok::Number, "path index");
    if (t.num.denominator() != 1 || t.num.numerator() < 0) {
      p.fail("path indices are nonnegative integers");
    }
    pos += "." + std::to_string(t.num.numerator());
  }
  return pos;
}

struct RawStep {
  long long id = 0;
  ProofStep step;
  std::vector<long long> premiseIds;
  std::size_t line = 0;
};

}  // namespace

ProofScript parseProofScript(const std::string& text) {
  ProofScript script;
  bool haveGoal = false;
  std::vector<RawStep> raws;

  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    Parser p(line, lineNo);
    if (p.atEnd()) continue;

    if (p.acceptIdent("model")) {
      if (script.modelRef) p.fail("duplicate model line");
      script.modelRef = p.expect(Tok::String, "model path string").text;
      p.expectEnd();
      continue;
    }
    if (p.acceptIdent("goal")) {
      if (haveGoal) p.fail("duplicate goal line");
      auto [ante, succ] = p.sequent();
      p.expectEnd();
      script.goal = Sequent{std::move(ante), std::move(succ)};
      haveGoal = true;
      continue;
    }
    if (!p.acceptIdent("step")) {
      p.fail("expected a model, goal or step line");
    }

    RawStep raw;
    raw.line = lineNo;
    raw.id = parseStepId(p);
    raw.step.label = std::to_string(raw.id);
    raw.step.ruleId = parseRuleId(p);
    if (!p.acceptIdent("at")) p.fail("expected 'at <position>'");
    raw.step.position = parsePositionToken(p);
    if (p.acceptIdent("with")) {
      p.expect(Tok::LBrace, "'{'");
      if (!p.accept(Tok::RBrace)) {
        for (;;) {
          const std::string key = p.expectIdent("metavariable name");
          p.expect(Tok::ColonEq, "':='");
          parseMetaValue(p, key, raw.step.inst);
          if (p.accept(Tok::Comma)) continue;
          p.expect(Tok::RBrace, "'}'");
          break;
        }
      }
    }
    if (p.acceptIdent("premises")) {
      p.expect(Tok::LBracket, "'['");
      if (!p.accept(Tok::RBracket)) {
        for (;;) {
          raw.premiseIds.push_back(parseStepId(p));
          if (p.accept(Tok::Comma)) continue;
          p.expect(Tok::RBracket, "']'");
          break;
        }
      }
    }
    p.expectEnd();
    raws.push_back(std::move(raw));
  }

  if (!haveGoal) {
    throw SyntaxError(lineNo, 1, "proof script has no goal line");
  }
  if (raws.empty()) {
    throw SyntaxError(lineNo, 1, "proof script has no steps");
  }

  std::map<long long, std::size_t> byId;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    if (!byId.emplace(raws[i].id, i).second) {
      throw SyntaxError(raws[i].line, 1,
                        "duplicate step id " + std::to_string(raws[i].id));
    }
  }
  std::map<long long, long long> referencedBy;
  for (const RawStep& raw : raws) {
    for (long long pid : raw.premiseIds) {
      if (!byId.count(pid)) {
        throw SyntaxError(raw.line, 1,
                          "step " + std::to_string(raw.id) +
                              " references unknown step " +
                              std::to_string(pid));
      }
      if (!referencedBy.emplace(pid, raw.id).second) {
        throw SyntaxError(raw.line, 1,
                          "step " + std::to_string(pid) +
                              " is used as a premise twice");
      }
    }
  }
  std::vector<long long> roots;
  for (const RawStep& raw : raws) {
    if (!referencedBy.count(raw.id)) roots.push_back(raw.id);
  }
  if (roots.size() != 1) {
    throw SyntaxError(raws.front().line, 1,
                      roots.empty()
                          ? std::string("the steps form a cycle")
                          : "expected exactly one root step, found " +
                                std::to_string(roots.size()));
  }

  std::size_t used = 0;
  std::function<ProofStep(long long)> build = [&](long long id) {
    const RawStep& raw = raws[byId.at(id)];
    ++used;
    ProofStep step = raw.step;
    for (long long pid : raw.premiseIds) {
      step.premises.push_back(build(pid));
    }
    return step;
  };
  script.root = build(roots.front());
  if (used != raws.size()) {
    throw SyntaxError(raws.front().line, 1,
                      "some steps are unreachable from the root");
  }
  return script;
}

ProofScript loadProofScript(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) {
    throw DglscError("cannot open proof script: " + path);
  }
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, fp)) > 0) {
    text.append(buf, n);
  }
  std::fclose(fp);
  ProofScript script;
  try {
    script = parseProofScript(text);
  } catch (const SyntaxError& e) {
    throw SyntaxError(1, 1, std::string(e.what()) + " in " + path);
  }
  const auto slash = path.find_last_of('/');
  script.baseDir = slash == std::string::npos ? "." : path.substr(0, slash);
  return script;
}

// ------------------------------------------------------------ derived rules

namespace {

ProofStep mk(std::string rule, std::string pos,
             std::vector<ProofStep> premises = {}) {
  ProofStep s;
  s.ruleId = std::move(rule);
  s.position = std::move(pos);
  s.premises = std::move(premises);
  return s;
}

ProofStep mkInst(std::string rule, std::string pos, Instantiation inst,
                 std::vector<ProofStep> premises = {}) {
  ProofStep s = mk(std::move(rule), std::move(pos), std::move(premises));
  s.inst = std::move(inst);
  return s;
}

ProofStep taut() { return mk("prop(taut)", "-"); }

// |- <g>(x1,y1) -> <g>(x2,y2) with propositionally valid goal implications.
ProofStep angelMonoBranch() {
  return mk("fol(implyR)", "S0",
            {mk("M1", "-", {taut(), taut()})});
}

// |- [g](x1,y1) -> [g](x2,y2), routed through the dual axiom.
ProofStep demonMonoBranch() {
  return mk("fol(implyR)", "S0",
            {mk("dualA", "A0",
                {mk("dualA", "S0", {mk("M1", "-", {taut(), taut()})})})});
}

// Proof of |- L <-> R from proofs of the two implication branches, each of
// which must prove the sequent |- L -> R (resp. |- R -> L).
ProofStep equivSplit(ProofStep lr, ProofStep rl) {
  return mk("fol(andR)", "S0", {std::move(lr), std::move(rl)});
}

}  // namespace

ProofScript deriveDemonMonotonicity(const DemonMonotonicityInput& in) {
  ProofScript script;
  script.goal = Sequent{
      {}, {fImplies(fDemon(in.game, in.p1, in.q1),
                    fDemon(in.game, in.p2, in.q2))}};
  ProofStep mono = mk(in.useM2 ? "M2" : "M1", "-", {in.premise1, in.premise2});
  ProofStep inner =
      mk("dualA", "A0", {mk("dualA", "S0", {std::move(mono)})});
  script.root = mk("fol(implyR)", "S0", {std::move(inner)});
  return script;
}

// ------------------------------------- complementarization proof generator

namespace {

// The complementarization right-hand side for one modality.
FormulaPtr caRight(bool angel, const GamePtr& g, const FormulaPtr& p,
                   const FormulaPtr& q) {
  const FormulaPtr joint = fAnd(p, q);
  return fOr(fAngel1(systematize(g), joint),
             angel ? fAngel1(g, p) : fDemon1(g, q));
}

FormulaPtr caFormula(bool angel, const GamePtr& g, const FormulaPtr& p,
                     const FormulaPtr& q) {
  const FormulaPtr lhs = angel ? fAngel(g, p, q) : fDemon(g, p, q);
  return fEquiv(lhs, caRight(angel, g, p, q));
}

// Wraps `sub`, which proves |- C, so that it proves  Γ |- Δ', C  (C last)
// by weakening everything else away.
ProofStep weakenTo(std::size_t anteCount, std::size_t succBefore,
                   ProofStep sub) {
  ProofStep step = std::move(sub);
  for (std::size_t i = 0; i < succBefore; ++i) {
    step = mk("fol(weakR)", "S0", {std::move(step)});
  }
  for (std::size_t i = 0; i < anteCount; ++i) {
    step = mk("fol(weakL)", "A0", {std::move(step)});
  }
  return step;
}

struct CutLemma {
  FormulaPtr formula;
  ProofStep proof;  // proves |- formula
};

// Chains cuts over a branch sequent with `anteCount` antecedent formulas
// and exactly one succedent formula, ending in a tautology check.
ProofStep cutChain(std::size_t anteCount, std::vector<CutLemma> lemmas,
                   std::size_t idx = 0) {
  if (idx == lemmas.size()) return taut();
  Instantiation inst;
  inst.formulas["C"] = lemmas[idx].formula;
  ProofStep side =
      weakenTo(anteCount + idx, 1, std::move(lemmas[idx].proof));
  ProofStep rest = cutChain(anteCount, std::move(lemmas), idx + 1);
  return mkInst("cut", "-", std::move(inst),
                {std::move(side), std::move(rest)});
}

// Rewrite positions for the two implication branches of a CA equivalence:
// branch 1 proves  lhs |- rhs,  branch 2 proves  rhs |- lhs. The right-hand
// side is a disjunction, so the systematized and single-goal modalities sit
// under its Or encoding (two negations deep, an even position).
constexpr const char* kB1Whole = "A0";
constexpr const char* kB1Sys = "S0.0.0.0";
constexpr const char* kB1Plain = "S0.0.1.0";
constexpr const char* kB2Whole = "S0";
constexpr const char* kB2Sys = "A0.0.0.0";
constexpr const char* kB2Plain = "A0.0.1.0";

// A rewrite to perform inside a branch before the cuts run.
struct Rewrite {
  std::string rule;
  std::string pos;
  Instantiation inst;
};

ProofStep chainRewrites(std::vector<Rewrite> rws, ProofStep tail) {
  ProofStep step = std::move(tail);
  for (auto it = rws.rbegin(); it != rws.rend(); ++it) {
    step = mkInst(it->rule, it->pos, std::move(it->inst), {std::move(step)});
  }
  return step;
}

// |- <g>(x1,y1) <-> <g>(x2,y2) (or the demon form) where both goal
// implications are propositional tautologies.
CutLemma modalBridge(bool angel, const GamePtr& g, const FormulaPtr& x1,
                     const FormulaPtr& y1, const FormulaPtr& x2,
                     const FormulaPtr& y2) {
  const FormulaPtr a = angel ? fAngel(g, x1, y1) : fDemon(g, x1, y1);
  const FormulaPtr b = angel ? fAngel(g, x2, y2) : fDemon(g, x2, y2);
  ProofStep branch1 = angel ? angelMonoBranch() : demonMonoBranch();
  ProofStep branch2 = angel ? angelMonoBranch() : demonMonoBranch();
  return {fEquiv(a, b),
          equivSplit(std::move(branch1), std::move(branch2))};
}

// |- (<g>(p,q) & [g](p,q)) <-> <sys g>(p & q), via the andAD law.
CutLemma andADLemma(const GamePtr& g, const FormulaPtr& p,
                    const FormulaPtr& q) {
  Instantiation inst;
  inst.games["alpha"] = g;
  inst.formulas["P"] = p;
  inst.formulas["Q"] = q;
  const auto [l, r] = deviationLawSides("andAD", g, nullptr, p, q);
  ProofStep b1 = mk("fol(implyR)", "S0",
                    {mkInst("andAD", "A0", inst, {mk("fol(id)", "-")})});
  ProofStep b2 = mk("fol(implyR)", "S0",
                    {mkInst("andAD", "S0", inst, {mk("fol(id)", "-")})});
  return {fEquiv(l, r), equivSplit(std::move(b1), std::move(b2))};
}

// |- !<g>W <-> [g]!W — a one-step determinacy instance.
CutLemma detLemma(const GamePtr& g, const FormulaPtr& w) {
  return {fEquiv(fNot(fAngel1(g, w)), fDemon1(g, fNot(w))),
          mk("det", "S0")};
}

ProofStep caProof(bool angel, const GamePtr& g, const FormulaPtr& p,
                  const FormulaPtr& q);

// Branch proof for one direction of the CA equivalence: performs the
// rewrites, then the cuts, then closes propositionally.
ProofStep caBranch(std::vector<Rewrite> rws, std::vector<CutLemma> cuts) {
  return mk("fol(implyR)", "S0",
            {chainRewrites(std::move(rws),
                           cutChain(1, std::move(cuts)))});
}

// Atomic cases close propositionally after rewriting all three modalities.
ProofStep caAtomic(bool angel, const GamePtr& g, const char* axA,
                   const char* axD) {
  const char* whole = angel ? axA : axD;
  const char* plain = angel ? axA : axD;
  ProofStep b1 = caBranch({{whole, kB1Whole, {}},
                           {axA, kB1Sys, {}},
                           {plain, kB1Plain, {}}},
                          {});
  ProofStep b2 = caBranch({{whole, kB2Whole, {}},
                           {axA, kB2Sys, {}},
                           {plain, kB2Plain, {}}},
                          {});
  (void)g;
  return equivSplit(std::move(b1), std::move(b2));
}

ProofStep caChoice(bool angel, const GamePtr& g, const FormulaPtr& p,
                   const FormulaPtr& q) {
  const GamePtr& a = g->l;
  const GamePtr& b = g->r;
  const char* whole = angel ? "choiceA" : "choiceD";
  const char* plain = angel ? "choiceA" : "choiceD";

  const auto cutsFor = [&]() {
    std::vector<CutLemma> cuts;
    cuts.push_back({caFormula(angel, a, p, q), caProof(angel, a, p, q)});
    cuts.push_back({caFormula(angel, b, p, q), caProof(angel, b, p, q)});
    if (!angel) {
      const FormulaPtr nq = fNot(q);
      for (const GamePtr& sub : {a, b}) {
        cuts.push_back(andADLemma(sub, p, q));
        // <sub>(!q, q) <-> <sub>!q, then determinacy, then [sub]!!q <-> [sub]q.
        cuts.push_back(
            modalBridge(true, sub, nq, q, nq, fNot(nq)));
        cuts.push_back(detLemma(sub, nq));
        cuts.push_back(modalBridge(false, sub, fNot(fNot(nq)), fNot(nq),
                                   nq, q));
      }
    }
    return cuts;
  };

  ProofStep b1 = caBranch({{whole, kB1Whole, {}},
                           {"choiceA", kB1Sys, {}},
                           {plain, kB1Plain, {}}},
                          cutsFor());
  ProofStep b2 = caBranch({{whole, kB2Whole, {}},
                           {"choiceA", kB2Sys, {}},
                           {plain, kB2Plain, {}}},
                          cutsFor());
  return equivSplit(std::move(b1), std::move(b2));
}

ProofStep caDual(bool angel, const GamePtr& g, const FormulaPtr& p,
                 const FormulaPtr& q) {
  const GamePtr& a = g->l;
  const char* whole = angel ? "dualA" : "dualD";
  const char* plain = angel ? "dualA" : "dualD";

  const auto cutsFor = [&]() {
    std::vector<CutLemma> cuts;
    // The dual modality becomes the opposite modality with swapped goals,
    // covered by the opposite CA instance on (q, p).
    cuts.push_back({caFormula(!angel, a, q, p), caProof(!angel, a, q, p)});
    // Bridge <sys a>(q & p) to <sys a>(p & q).
    const GamePtr sys = systematize(a);
    const FormulaPtr qp = fAnd(q, p);
    const FormulaPtr pq = fAnd(p, q);
    cuts.push_back(
        modalBridge(true, sys, qp, fNot(qp), pq, fNot(pq)));
    return cuts;
  };

  ProofStep b1 = caBranch({{whole, kB1Whole, {}}, {plain, kB1Plain, {}}},
                          cutsFor());
  ProofStep b2 = caBranch({{whole, kB2Whole, {}}, {plain, kB2Plain, {}}},
                          cutsFor());
  return equivSplit(std::move(b1), std::move(b2));
}

ProofStep caProof(bool angel, const GamePtr& g, const FormulaPtr& p,
                  const FormulaPtr& q) {
  switch (g->kind) {
    case HybridGame::Kind::Assign:
      return caAtomic(angel, g, "assignA", "assignD");
    case HybridGame::Kind::Test:
      return caAtomic(angel, g, "testA", "testD");
    case HybridGame::Kind::Choice:
      return caChoice(angel, g, p, q);
    case HybridGame::Kind::Dual:
      return caDual(angel, g, p, q);
    default:
      throw RuleError(
          "complementarization proofs cover assignments, tests, choice and "
          "dual; got " + print(g));
  }
}

}  // namespace

ProofScript deriveComplementarization(bool angel, const GamePtr& g,
                                      const FormulaPtr& p,
                                      const FormulaPtr& q) {
  ProofScript script;
  script.goal = Sequent{{}, {caFormula(angel, g, p, q)}};
  script.root = caProof(angel, g, p, q);
  return script;
}

}  // namespace dglsc
