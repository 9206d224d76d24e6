// Brute-force oracles, random instance generation and lemma replay.

#include "dglsc/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "dglsc/calculus.hpp"
#include "dglsc/errors.hpp"

namespace dglsc {

namespace {

StateSet setFromMask(uint64_t mask, uint64_t n) {
  StateSet s = StateSet::empty(n);
  for (uint64_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1) s.set(i);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------- enumeration oracles

StateSet lfpByEnumeration(uint64_t n,
                          const std::function<StateSet(const StateSet&)>& f) {
  if (n > 16) {
    throw SpaceTooLarge("enumeration oracle handles at most 16 states, got " +
                        std::to_string(n));
  }
  const uint64_t total = uint64_t(1) << n;
  StateSet acc = StateSet::full(n);
  for (uint64_t mask = 0; mask < total; ++mask) {
    const StateSet z = setFromMask(mask, n);
    if (f(z).subsetOf(z)) acc = acc & z;
  }
  return acc;
}

StateSet gfpByEnumeration(uint64_t n,
                          const std::function<StateSet(const StateSet&)>& f) {
  if (n > 16) {
    throw SpaceTooLarge("enumeration oracle handles at most 16 states, got " +
                        std::to_string(n));
  }
  const uint64_t total = uint64_t(1) << n;
  StateSet acc = StateSet::empty(n);
  for (uint64_t mask = 0; mask < total; ++mask) {
    const StateSet z = setFromMask(mask, n);
    if (z.subsetOf(f(z))) acc = acc | z;
  }
  return acc;
}

// ---------------------------------------------------- random generation

namespace {

using VarIdxs = std::vector<std::size_t>;

VarIdxs allVarIdxs(const StateSpace& space) {
  VarIdxs v(space.vars.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

std::size_t pickVar(Rng& rng, const VarIdxs& vars) {
  return vars[rng.uniform(vars.size())];
}

// A constant that is a legal value for variable `vi` (domain member in
// strict mode, canonical residue in modular mode).
TermPtr domainConst(Rng& rng, const StateSpace& space, std::size_t vi) {
  const auto& dom = space.domains[vi];
  return tConst(dom[rng.uniform(dom.size())]);
}

TermPtr genTermVars(Rng& rng, const StateSpace& space, const VarIdxs& vars,
                    uint64_t depth) {
  if (depth == 0 || rng.chance(1, 3)) {
    if (rng.chance(1, 2)) return tVar(space.vars[pickVar(rng, vars)]);
    if (space.mode == StateSpace::Mode::Modular) {
      return tConst(Rat(static_cast<long long>(rng.uniform(8))));
    }
    return domainConst(rng, space, pickVar(rng, vars));
  }
  switch (rng.uniform(4)) {
    case 0:
      return tAdd(genTermVars(rng, space, vars, depth - 1),
                  genTermVars(rng, space, vars, depth - 1));
    case 1:
      return tSub(genTermVars(rng, space, vars, depth - 1),
                  genTermVars(rng, space, vars, depth - 1));
    case 2:
      return tMul(genTermVars(rng, space, vars, depth - 1),
                  genTermVars(rng, space, vars, depth - 1));
    default:
      return tNeg(genTermVars(rng, space, vars, depth - 1));
  }
}

FormulaPtr genComparison(Rng& rng, const StateSpace& space,
                         const VarIdxs& vars) {
  const TermPtr l = genTermVars(rng, space, vars, 1);
  const TermPtr r = genTermVars(rng, space, vars, 1);
  switch (rng.uniform(4)) {
    case 0:
      return fGeq(l, r);
    case 1:
      return fLeq(l, r);
    case 2:
      return fLt(l, r);
    default:
      return fEq(l, r);
  }
}

FormulaPtr genPropVars(Rng& rng, const StateSpace& space, const VarIdxs& vars,
                       uint64_t depth) {
  if (depth == 0 || rng.chance(1, 4)) {
    const uint64_t pick = rng.uniform(10);
    if (pick < 6) return genComparison(rng, space, vars);
    if (pick < 8) return fTrue();
    return fFalse();
  }
  const uint64_t pick = rng.uniform(10);
  if (pick < 4) {
    return fAnd(genPropVars(rng, space, vars, depth - 1),
                genPropVars(rng, space, vars, depth - 1));
  }
  if (pick < 7) {
    return fOr(genPropVars(rng, space, vars, depth - 1),
               genPropVars(rng, space, vars, depth - 1));
  }
  if (pick < 9) return fNot(genPropVars(rng, space, vars, depth - 1));
  return genComparison(rng, space, vars);
}

// Assignment right-hand side guaranteed evaluable in every state: strict
// mode and mixed-moduli modular mode stick to canonical constants of the
// target variable; a uniform modulus reduces arbitrary integer terms
// consistently, so those get the full term generator.
TermPtr genAssignRhs(Rng& rng, const StateSpace& space, std::size_t target) {
  if (space.mode == StateSpace::Mode::Modular && space.uniformModulus()) {
    return genTermVars(rng, space, allVarIdxs(space), 1);
  }
  return domainConst(rng, space, target);
}

GamePtr genAtomicGame(Rng& rng, const StateSpace& space,
                      const GenOptions& opt) {
  const VarIdxs vars = allVarIdxs(space);
  const bool cont = opt.allowContinuous && !opt.contConsts.empty();
  const uint64_t pick = rng.uniform(cont ? 10 : 8);
  if (pick < 4) {
    const std::size_t vi = pickVar(rng, vars);
    return gAssign(space.vars[vi], genAssignRhs(rng, space, vi));
  }
  if (pick < 8) return gTest(genPropVars(rng, space, vars, 1));
  const std::size_t vi = pickVar(rng, vars);
  const long long c = opt.contConsts[rng.uniform(opt.contConsts.size())];
  const FormulaPtr constraint =
      rng.chance(1, 2) ? fTrue() : genComparison(rng, space, vars);
  return gContinuous(space.vars[vi], tConst(Rat(c)), constraint);
}

GamePtr genGameDepth(Rng& rng, const StateSpace& space, const GenOptions& opt,
                     uint64_t depth) {
  if (depth == 0) return genAtomicGame(rng, space, opt);
  const uint64_t pick = rng.uniform(40);
  if (pick < 10) return genAtomicGame(rng, space, opt);
  if (pick < 18) {
    return gChoice(genGameDepth(rng, space, opt, depth - 1),
                   genGameDepth(rng, space, opt, depth - 1));
  }
  if (pick < 26) {
    return gSeq(genGameDepth(rng, space, opt, depth - 1),
                genGameDepth(rng, space, opt, depth - 1));
  }
  if (pick < 33) return gDual(genGameDepth(rng, space, opt, depth - 1));
  return gRepeat(genGameDepth(rng, space, opt, depth - 1));
}

FormulaPtr genFormulaVars(Rng& rng, const StateSpace& space,
                          const VarIdxs& vars, const GenOptions& opt,
                          uint64_t depth) {
  if (depth == 0) return genPropVars(rng, space, vars, 1);
  const uint64_t pick = rng.uniform(20);
  if (pick < 3) {
    return fNot(genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 7) {
    return fAnd(genFormulaVars(rng, space, vars, opt, depth - 1),
                genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 9) {
    return fOr(genFormulaVars(rng, space, vars, opt, depth - 1),
               genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 10) {
    return fForall(space.vars[pickVar(rng, vars)],
                   genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 11) {
    return fExists(space.vars[pickVar(rng, vars)],
                   genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 15) {
    return fAngel(genGameDepth(rng, space, opt, opt.gameDepth),
                  genFormulaVars(rng, space, vars, opt, depth - 1),
                  genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  if (pick < 19) {
    return fDemon(genGameDepth(rng, space, opt, opt.gameDepth),
                  genFormulaVars(rng, space, vars, opt, depth - 1),
                  genFormulaVars(rng, space, vars, opt, depth - 1));
  }
  return genPropVars(rng, space, vars, 1);
}

}  // namespace

GamePtr genGame(Rng& rng, const StateSpace& space, const GenOptions& opt) {
  return genGameDepth(rng, space, opt, opt.gameDepth);
}

FormulaPtr genFormula(Rng& rng, const StateSpace& space,
                      const GenOptions& opt) {
  return genFormulaVars(rng, space, allVarIdxs(space), opt, opt.formulaDepth);
}

FormulaPtr genPropFormula(Rng& rng, const StateSpace& space, uint64_t depth) {
  return genPropVars(rng, space, allVarIdxs(space), depth);
}

TermPtr genTerm(Rng& rng, const StateSpace& space, uint64_t depth) {
  return genTermVars(rng, space, allVarIdxs(space), depth);
}

StateSet genStateSet(Rng& rng, uint64_t n) {
  StateSet s = StateSet::empty(n);
  for (uint64_t i = 0; i < n; ++i) {
    if (rng.chance(1, 2)) s.set(i);
  }
  return s;
}

FormulaPtr stateSetToFormula(const StateSpace& space, const StateSet& s) {
  FormulaPtr out = nullptr;
  std::vector<Rat> values;
  s.forEach([&](uint64_t idx) {
    stateValuesAt(space, idx, values);
    FormulaPtr conj = nullptr;
    for (std::size_t i = 0; i < space.vars.size(); ++i) {
      const FormulaPtr eq = fEq(tVar(space.vars[i]), tConst(values[i]));
      conj = conj ? fAnd(conj, eq) : eq;
    }
    if (!conj) conj = fTrue();  // zero-variable space
    out = out ? fOr(out, conj) : conj;
  });
  return out ? out : fFalse();
}

Model buildLemmaModel(const StateSpace& space,
                      const std::vector<long long>& derivConsts) {
  Model m;
  m.space = space;
  for (std::size_t i = 0; i < space.vars.size(); ++i) {
    const uint64_t horizon = space.domains[i].size();
    for (long long c : derivConsts) {
      FlowTable t = buildEulerFlow(space, space.vars[i], tConst(Rat(c)),
                                   Rat(1), horizon, ExecPolicy::Serial);
      m.flows[t.key] = std::move(t);
    }
  }
  return m;
}

// -------------------------------------------- axiom / rule instantiation

namespace {

// Shared scaffolding for instance builders.
struct InstEnv {
  Rng& rng;
  const SemContext& ctx;
  const StateSpace& space;
  const GenOptions& opt;

  GamePtr game() const { return genGame(rng, space, opt); }
  FormulaPtr form() const { return genFormula(rng, space, opt); }
  FormulaPtr prop() const {
    return genPropFormula(rng, space, opt.formulaDepth);
  }
  StateSet set() const { return genStateSet(rng, space.stateCount); }
  StateSet truth(const FormulaPtr& f) const { return truthSet(ctx, f); }
  FormulaPtr ofSet(const StateSet& s) const {
    return stateSetToFormula(space, s);
  }
};

OracleInstance equivInst(FormulaPtr lhs, FormulaPtr rhs) {
  OracleInstance inst;
  inst.kind = OracleInstance::Kind::Equiv;
  inst.lhs = std::move(lhs);
  inst.rhs = std::move(rhs);
  return inst;
}

OracleInstance impliesInst(FormulaPtr lhs, FormulaPtr rhs) {
  OracleInstance inst;
  inst.kind = OracleInstance::Kind::Implies;
  inst.lhs = std::move(lhs);
  inst.rhs = std::move(rhs);
  return inst;
}

OracleInstance ruleInst(std::vector<FormulaPtr> premises,
                        FormulaPtr conclusion) {
  OracleInstance inst;
  inst.kind = OracleInstance::Kind::Rule;
  inst.premises = std::move(premises);
  inst.conclusion = std::move(conclusion);
  return inst;
}

// Picks the evolved variable, the clock variable and the derivative
// constant for a differential-equation instance. Requires a modular space
// with a uniform modulus and a second variable to quantify over.
struct ContSetup {
  std::string x;
  std::string tau;
  long long c = 0;
  TermPtr solution;  // x + c*tau
};

ContSetup contSetup(const InstEnv& env) {
  const auto m = env.space.uniformModulus();
  if (env.space.mode != StateSpace::Mode::Modular || !m ||
      env.space.vars.size() < 2) {
    throw ModelError(
        "differential-equation instances need a modular space with a "
        "uniform modulus and at least two variables");
  }
  const std::size_t xi = env.rng.uniform(env.space.vars.size());
  std::size_t ti = env.rng.uniform(env.space.vars.size() - 1);
  if (ti >= xi) ++ti;
  ContSetup s;
  s.x = env.space.vars[xi];
  s.tau = env.space.vars[ti];
  s.c = static_cast<long long>(env.rng.uniform(static_cast<uint64_t>(*m)));
  s.solution = tAdd(tVar(s.x), tMul(tConst(Rat(s.c)), tVar(s.tau)));
  return s;
}

// Goal formulas for a differential-equation instance: must not mention the
// clock variable, so they are generated over the remaining variables.
FormulaPtr contGoal(const InstEnv& env, const std::string& tau) {
  VarIdxs vars;
  for (std::size_t i = 0; i < env.space.vars.size(); ++i) {
    if (env.space.vars[i] != tau) vars.push_back(i);
  }
  return genPropVars(env.rng, env.space, vars, env.opt.formulaDepth);
}

// Iterates z <- z | f(z) to stability; the result is a pre-fixpoint of f
// that contains the random seed set, which is what the fixpoint rules need
// for valid-by-construction premises.
StateSet closeUnder(const StateSet& seed,
                    const std::function<StateSet(const StateSet&)>& f,
                    uint64_t budget) {
  StateSet z = seed;
  for (uint64_t i = 0; i <= budget; ++i) {
    const StateSet next = z | f(z);
    if (next == z) return z;
    z = next;
  }
  throw FixpointBudgetExceeded("closure iteration did not stabilise");
}

// Iterates z <- z & f(z) to stability; the result is a post-fixpoint.
StateSet shrinkUnder(const StateSet& seed,
                     const std::function<StateSet(const StateSet&)>& f,
                     uint64_t budget) {
  StateSet z = seed;
  for (uint64_t i = 0; i <= budget; ++i) {
    const StateSet next = z & f(z);
    if (next == z) return z;
    z = next;
  }
  throw FixpointBudgetExceeded("shrinking iteration did not stabilise");
}

OracleInstance buildInstance(const std::string& id, const InstEnv& env) {
  const uint64_t n = env.space.stateCount;

  // --- angel axioms ---
  if (id == "assignA" || id == "assignD") {
    const std::size_t vi = env.rng.uniform(env.space.vars.size());
    const std::string& x = env.space.vars[vi];
    const TermPtr e = genAssignRhs(env.rng, env.space, vi);
    const FormulaPtr p = env.prop();
    const FormulaPtr q = env.prop();
    const GamePtr g = gAssign(x, e);
    if (id == "assignA") {
      return equivInst(fAngel(g, p, q), substitute(p, x, e));
    }
    return equivInst(fDemon(g, p, q), substitute(q, x, e));
  }
  if (id == "contA" || id == "contD") {
    const ContSetup s = contSetup(env);
    const FormulaPtr p = contGoal(env, s.tau);
    const FormulaPtr q = contGoal(env, s.tau);
    const GamePtr ode = gContinuous(s.x, tConst(Rat(s.c)), fTrue());
    const GamePtr jump = gAssign(s.x, s.solution);
    const FormulaPtr nonNeg = fGeq(tVar(s.tau), tConst(Rat(0)));
    if (id == "contA") {
      return equivInst(
          fAngel(ode, p, q),
          fExists(s.tau, fAnd(nonNeg, fAngel(jump, p, q))));
    }
    const FormulaPtr always =
        fForall(s.tau, fImplies(nonNeg, fDemon(jump, p, q)));
    const FormulaPtr meet =
        fExists(s.tau, fAnd(nonNeg, fAngel(jump, fAnd(p, q), q)));
    return equivInst(fDemon(ode, p, q), fOr(always, meet));
  }
  if (id == "testA") {
    const FormulaPtr r = env.form(), p = env.form(), q = env.form();
    return equivInst(fAngel(gTest(r), p, q), fAnd(r, p));
  }
  if (id == "testD") {
    const FormulaPtr r = env.form(), p = env.form(), q = env.form();
    return equivInst(fDemon(gTest(r), p, q), fOr(fNot(r), q));
  }
  if (id == "choiceA") {
    const GamePtr a = env.game(), b = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    return equivInst(fAngel(gChoice(a, b), p, q),
                     fOr(fAngel(a, p, q), fAngel(b, p, q)));
  }
  if (id == "choiceD") {
    const GamePtr a = env.game(), b = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    const FormulaPtr da = fDemon(a, p, q), db = fDemon(b, p, q);
    const FormulaPtr sa = fAngel(a, p, q), sb = fAngel(b, p, q);
    return equivInst(
        fDemon(gChoice(a, b), p, q),
        fOr(fAnd(da, db), fOr(fAnd(da, sa), fAnd(db, sb))));
  }
  if (id == "seqA" || id == "seqD") {
    const GamePtr a = env.game(), b = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    const FormulaPtr inner =
        id == "seqA" ? fAngel(a, fAngel(b, p, q), fDemon(b, p, q))
                     : fDemon(a, fAngel(b, p, q), fDemon(b, p, q));
    const FormulaPtr whole = id == "seqA" ? fAngel(gSeq(a, b), p, q)
                                          : fDemon(gSeq(a, b), p, q);
    return equivInst(whole, inner);
  }
  if (id == "dualA") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    return equivInst(fAngel(gDual(a), p, q), fDemon(a, q, p));
  }
  if (id == "dualD") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    return equivInst(fDemon(gDual(a), p, q), fAngel(a, q, p));
  }
  if (id == "iterA") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    const GamePtr unroll = gSeq(a, gRepeat(a));
    return equivInst(fAngel(gRepeat(a), p, q),
                     fOr(p, fAngel(unroll, p, q)));
  }
  if (id == "iterD") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form(), q = env.form();
    const GamePtr unroll = gSeq(a, gRepeat(a));
    const FormulaPtr joint =
        fAnd(fAngel(unroll, p, q), fDemon(unroll, p, q));
    const FormulaPtr settled = fAnd(q, fDemon1(unroll, q));
    return equivInst(fDemon(gRepeat(a), p, q),
                     fOr(fAnd(p, q), fOr(joint, settled)));
  }
  if (id == "det") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form();
    return equivInst(fNot(fAngel1(a, p)), fDemon1(a, fNot(p)));
  }

  // --- deviation laws (shapes shared with the proof kernel) ---
  if (id == "andAD" || id == "iterAD" || id == "impAD" || id == "spA" ||
      id == "id" || id == "reA" || id == "reD" || id == "reD-alt") {
    const bool twoGames =
        id == "spA" || id == "reA" || id == "reD" || id == "reD-alt";
    const GamePtr a = env.game();
    const GamePtr b = twoGames ? env.game() : nullptr;
    const FormulaPtr p = env.form(), q = env.form();
    const auto [lhs, rhs] = deviationLawSides(id, a, b, p, q);
    return id == "impAD" || id == "spA" ? impliesInst(lhs, rhs)
                                        : equivInst(lhs, rhs);
  }

  // --- rules ---
  if (id == "M1") {
    const GamePtr a = env.game();
    const FormulaPtr p1 = env.form(), q1 = env.form();
    const FormulaPtr p2 = fOr(p1, env.form());
    const FormulaPtr q2 = fOr(q1, env.form());
    return ruleInst({fImplies(p1, p2), fImplies(q1, q2)},
                    fImplies(fAngel(a, p1, q1), fAngel(a, p2, q2)));
  }
  if (id == "M2") {
    const GamePtr a = env.game();
    const FormulaPtr p1 = env.form();
    const FormulaPtr q1 = fAnd(env.form(), fNot(p1));
    const FormulaPtr p2 = fOr(p1, env.form());
    const FormulaPtr q2 = env.form();
    return ruleInst({fImplies(p1, p2), fImplies(fAnd(p1, q1), fFalse())},
                    fImplies(fAngel(a, p1, q1), fAngel(a, p2, q2)));
  }
  if (id == "FP") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.prop(), q = env.prop();
    const StateSet x = env.truth(p), y = env.truth(q);
    const StateSet r1 = closeUnder(
        env.set(),
        [&](const StateSet& z) {
          return x | angelRegion(env.ctx, a, z, z.complement());
        },
        n + 1);
    const StateSet r2 = closeUnder(
        env.set(),
        [&](const StateSet& z) {
          return (x & y) | (angelRegion(env.ctx, a, z, z) &
                            demonRegion(env.ctx, a, z, z));
        },
        n + 1);
    const FormulaPtr fr1 = env.ofSet(r1), fr2 = env.ofSet(r2);
    const FormulaPtr prem1 = fImplies(fOr(p, fAngel1(a, fr1)), fr1);
    const FormulaPtr prem2 = fImplies(
        fOr(fAnd(p, q), fAnd(fAngel(a, fr2, fr2), fDemon(a, fr2, fr2))),
        fr2);
    return ruleInst({prem1, prem2},
                    fImplies(fAngel(gRepeat(a), p, q), fOr(fr1, fr2)));
  }
  if (id == "FP2") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.prop(), q = env.prop();
    const StateSet x = env.truth(p), y = env.truth(q);
    const StateSet r = closeUnder(
        env.set(),
        [&](const StateSet& z) {
          return (x & y) | (angelRegion(env.ctx, a, z, z) &
                            demonRegion(env.ctx, a, z, z));
        },
        n + 1);
    const FormulaPtr fr = env.ofSet(r);
    const GamePtr star = gRepeat(a);
    const FormulaPtr prem = fImplies(
        fOr(fAnd(p, q), fAnd(fAngel(a, fr, fr), fDemon(a, fr, fr))), fr);
    return ruleInst(
        {prem},
        fImplies(fAnd(fAngel(star, p, q), fDemon(star, p, q)), fr));
  }
  if (id == "ind") {
    const GamePtr a = env.game();
    const FormulaPtr p = env.form();
    const StateSet y0 = env.truth(env.prop());
    const StateSet y = shrinkUnder(
        y0, [&](const StateSet& z) { return dglDemonRegion(env.ctx, a, z); },
        n + 1);
    const FormulaPtr q = env.ofSet(y);
    return ruleInst({fImplies(q, fDemon1(a, q))},
                    fImplies(q, fDemon(gRepeat(a), p, q)));
  }
  if (id == "cut") {
    // Pointwise sound, so premises need not be valid: check
    // (premise1 & premise2) -> conclusion as an implication instead.
    const FormulaPtr gamma = env.form(), delta = env.form(), c = env.form();
    const FormulaPtr prem1 = fImplies(gamma, fOr(delta, c));
    const FormulaPtr prem2 = fImplies(fAnd(gamma, c), delta);
    return impliesInst(fAnd(prem1, prem2), fImplies(gamma, delta));
  }

  throw DglscError("unknown axiom/rule id: " + id);
}

}  // namespace

OracleInstance axiomInstance(const std::string& id, Rng& rng,
                             const SemContext& ctx, const GenOptions& opt) {
  InstEnv env{rng, ctx, ctx.model->space, opt};
  return buildInstance(id, env);
}

// ---------------------------------------------------------- lemma checks

namespace {

const std::vector<std::string>& axiomSoundnessIds() {
  static const std::vector<std::string> ids = {
      "assignA", "contA",  "testA",  "choiceA", "seqA", "dualA", "iterA",
      "assignD", "contD",  "testD",  "choiceD", "seqD", "dualD", "iterD",
      "det",     "M1",     "M2",     "FP",      "cut",  "andAD", "iterAD",
      "FP2",     "ind",    "impAD",  "spA",     "id",   "reA",   "reD"};
  return ids;
}

// Extracts "<x>" from "axiom-soundness(<x>)", empty if the shape differs.
std::string soundnessTarget(const std::string& lemmaId) {
  const std::string pre = "axiom-soundness(";
  if (lemmaId.size() > pre.size() + 1 && lemmaId.compare(0, pre.size(), pre) == 0 &&
      lemmaId.back() == ')') {
    return lemmaId.substr(pre.size(), lemmaId.size() - pre.size() - 1);
  }
  return "";
}

struct SeedOutcome {
  bool pass = true;
  std::string detail;
};

SeedOutcome failSeed(std::string detail) { return {false, std::move(detail)}; }

std::string describeSets(std::initializer_list<
                         std::pair<const char*, const StateSet*>> sets) {
  std::ostringstream os;
  for (const auto& [name, s] : sets) os << " " << name << "=" << s->hexDump();
  return os.str();
}

// Greedy structural shrinking: while some immediate subgame still fails the
// check, descend into it.
GamePtr shrinkGame(GamePtr g,
                   const std::function<bool(const GamePtr&)>& stillFails) {
  for (;;) {
    GamePtr smaller = nullptr;
    for (const GamePtr& sub : {g->l, g->r}) {
      if (sub && stillFails(sub)) {
        smaller = sub;
        break;
      }
    }
    if (!smaller) return g;
    g = smaller;
  }
}

SeedOutcome checkSetLemma(const std::string& id, Rng& rng,
                          const SemContext& ctx, const GenOptions& opt) {
  const StateSpace& space = ctx.model->space;
  const uint64_t n = space.stateCount;
  const GamePtr g0 = genGame(rng, space, opt);
  StateSet x = genStateSet(rng, n);
  StateSet y = genStateSet(rng, n);
  StateSet a = genStateSet(rng, n);
  StateSet b = genStateSet(rng, n);

  // Each lemma is phrased as a predicate over the game so failures can be
  // shrunk to a minimal failing subgame.
  std::function<bool(const GamePtr&)> holds;
  std::string description;

  if (id == "L1") {
    a = x | a;
    b = y | b;
    holds = [&](const GamePtr& g) {
      return angelRegion(ctx, g, x, y).subsetOf(angelRegion(ctx, g, a, b)) &&
             demonRegion(ctx, g, x, y).subsetOf(demonRegion(ctx, g, a, b));
    };
    description = "monotonicity in both goals" +
                  describeSets({{"X", &x}, {"Y", &y}, {"A", &a}, {"B", &b}});
  } else if (id == "L2") {
    // Angel half: X subseteq A and X,Y disjoint allow arbitrary B.
    // Demon half: Y subseteq B and X,Y disjoint allow arbitrary A.
    y = y - x;
    a = x | a;
    const StateSet xd = x - y;  // for the demon half, X already disjoint
    const StateSet bd = y | b;
    holds = [&, xd, bd](const GamePtr& g) {
      return angelRegion(ctx, g, x, y).subsetOf(angelRegion(ctx, g, a, b)) &&
             demonRegion(ctx, g, xd, y).subsetOf(demonRegion(ctx, g, a, bd));
    };
    description = "semi-monotonicity under disjoint goals" +
                  describeSets({{"X", &x}, {"Y", &y}, {"A", &a}, {"B", &b}});
  } else if (id == "L3") {
    holds = [&](const GamePtr& g) {
      return angelRegion(ctx, g, x, x.complement()) ==
                 dglAngelRegion(ctx, g, x) &&
             demonRegion(ctx, g, x.complement(), x) ==
                 dglDemonRegion(ctx, g, x);
    };
    description =
        "complementary goals collapse to zero-sum regions" +
        describeSets({{"X", &x}});
  } else if (id == "Cor-det") {
    holds = [&](const GamePtr& g) {
      return demonRegion(ctx, g, x, x.complement()) ==
             angelRegion(ctx, g, x, x.complement()).complement();
    };
    description = "determinacy on complementary goals" +
                  describeSets({{"X", &x}});
  } else if (id == "L4") {
    holds = [&](const GamePtr& g) {
      const GamePtr sys = systematize(g);
      const StateSet coop = dglAngelRegion(ctx, sys, x & y);
      return angelRegion(ctx, g, x, y) ==
                 (coop | dglAngelRegion(ctx, g, x)) &&
             demonRegion(ctx, g, x, y) == (coop | dglDemonRegion(ctx, g, y));
    };
    description = "zero-sum embedding of both regions" +
                  describeSets({{"X", &x}, {"Y", &y}});
  } else if (id == "Cor-coop") {
    holds = [&](const GamePtr& g) {
      return (angelRegion(ctx, g, x, y) & demonRegion(ctx, g, x, y)) ==
             dglAngelRegion(ctx, systematize(g), x & y);
    };
    description = "region intersection is the cooperative region" +
                  describeSets({{"X", &x}, {"Y", &y}});
  } else {
    return failSeed("unknown set lemma " + id);
  }

  if (holds(g0)) return {};
  const GamePtr least =
      shrinkGame(g0, [&](const GamePtr& g) { return !holds(g); });
  return failSeed(description + " violated; game=" + print(g0) +
                  (least == g0 ? "" : " shrunk=" + print(least)));
}

SeedOutcome checkFormulaLemma(const std::string& id, Rng& rng,
                              const SemContext& ctx, const GenOptions& opt) {
  const StateSpace& space = ctx.model->space;
  const GamePtr g = genGame(rng, space, opt);
  const FormulaPtr p = genFormula(rng, space, opt);
  const FormulaPtr q = genFormula(rng, space, opt);

  std::vector<std::pair<FormulaPtr, FormulaPtr>> pairs;
  if (id == "L5") {
    const FormulaPtr fa = fAngel(g, p, q);
    const FormulaPtr fd = fDemon(g, p, q);
    pairs = {{fa, goalsToTests(fa)}, {fd, goalsToTests(fd)}};
  } else if (id == "CA1") {
    pairs = {{fAngel(g, p, q),
              fOr(fAngel1(systematize(g), fAnd(p, q)), fAngel1(g, p))}};
  } else if (id == "CA2") {
    pairs = {{fDemon(g, p, q),
              fOr(fAngel1(systematize(g), fAnd(p, q)), fDemon1(g, q))}};
  } else {
    return failSeed("unknown formula lemma " + id);
  }

  for (const auto& [lhs, rhs] : pairs) {
    const StateSet sl = truthSet(ctx, lhs);
    const StateSet sr = truthSet(ctx, rhs);
    if (sl != sr) {
      return failSeed("truth sets differ: lhs=" + print(lhs) +
                      " rhs=" + print(rhs) + " lhsSet=" + sl.hexDump() +
                      " rhsSet=" + sr.hexDump());
    }
  }
  return {};
}

SeedOutcome checkInstance(const OracleInstance& inst, const SemContext& ctx) {
  switch (inst.kind) {
    case OracleInstance::Kind::Equiv: {
      const StateSet l = truthSet(ctx, inst.lhs);
      const StateSet r = truthSet(ctx, inst.rhs);
      if (l != r) {
        return failSeed("not equivalent: lhs=" + print(inst.lhs) +
                        " rhs=" + print(inst.rhs) + " lhsSet=" + l.hexDump() +
                        " rhsSet=" + r.hexDump());
      }
      return {};
    }
    case OracleInstance::Kind::Implies: {
      const StateSet l = truthSet(ctx, inst.lhs);
      const StateSet r = truthSet(ctx, inst.rhs);
      if (!l.subsetOf(r)) {
        return failSeed("implication fails: lhs=" + print(inst.lhs) +
                        " rhs=" + print(inst.rhs) + " lhsSet=" + l.hexDump() +
                        " rhsSet=" + r.hexDump());
      }
      return {};
    }
    case OracleInstance::Kind::Rule: {
      const uint64_t n = ctx.model->space.stateCount;
      for (const FormulaPtr& prem : inst.premises) {
        if (truthSet(ctx, prem) != StateSet::full(n)) {
          return failSeed("generated premise not valid: " + print(prem));
        }
      }
      const StateSet c = truthSet(ctx, inst.conclusion);
      if (c != StateSet::full(n)) {
        return failSeed("conclusion not valid: " + print(inst.conclusion) +
                        " set=" + c.hexDump());
      }
      return {};
    }
  }
  return failSeed("corrupt instance kind");
}

SeedOutcome runLemmaSeed(const std::string& lemmaId, uint64_t seed,
                         const SemContext& ctx, const GenOptions& opt) {
  Rng rng(seed);
  if (lemmaId == "L1" || lemmaId == "L2" || lemmaId == "L3" ||
      lemmaId == "Cor-det" || lemmaId == "L4" || lemmaId == "Cor-coop") {
    return checkSetLemma(lemmaId, rng, ctx, opt);
  }
  if (lemmaId == "L5" || lemmaId == "CA1" || lemmaId == "CA2") {
    return checkFormulaLemma(lemmaId, rng, ctx, opt);
  }
  const std::string target = soundnessTarget(lemmaId);
  if (!target.empty()) {
    return checkInstance(axiomInstance(target, rng, ctx, opt), ctx);
  }
  return failSeed("unknown lemma id " + lemmaId);
}

}  // namespace

std::vector<std::string> lemmaIds() {
  std::vector<std::string> ids = {"L1", "L2",       "L3",  "Cor-det", "L4",
                                  "Cor-coop", "L5", "CA1", "CA2"};
  for (const std::string& a : axiomSoundnessIds()) {
    ids.push_back("axiom-soundness(" + a + ")");
  }
  return ids;
}

LemmaReport checkLemma(const std::string& lemmaId, uint64_t seedLo,
                       uint64_t seedHi, const StateSpace& space,
                       ExecPolicy pol) {
  {
    const auto ids = lemmaIds();
    if (std::find(ids.begin(), ids.end(), lemmaId) == ids.end()) {
      throw DglscError("unknown lemma id: " + lemmaId);
    }
  }
  if (seedHi < seedLo) {
    throw DglscError("empty seed range for " + lemmaId);
  }

  const std::string target = soundnessTarget(lemmaId);
  const bool isCont = target == "contA" || target == "contD";

  GenOptions opt;
  opt.gameDepth = 2;
  opt.formulaDepth = 1;
  opt.allowContinuous = !isCont;
  std::vector<long long> consts = {1};
  if (isCont) {
    const auto m = space.uniformModulus();
    if (space.mode != StateSpace::Mode::Modular || !m ||
        space.vars.size() < 2) {
      throw ModelError("lemma " + lemmaId +
                       " needs a modular space with a uniform modulus and "
                       "at least two variables");
    }
    consts.clear();
    for (long long c = 0; c < *m; ++c) consts.push_back(c);
  }
  opt.contConsts = consts;

  const Model model = buildLemmaModel(space, consts);

  LemmaReport rep;
  rep.lemmaId = lemmaId;
  rep.seedLo = seedLo;
  rep.seedHi = seedHi;

  const uint64_t count = seedHi - seedLo + 1;
  std::vector<std::string> lines(count);
  std::vector<char> passed(count, 0);

  const auto oneSeed = [&](uint64_t i) {
    const uint64_t seed = seedLo + i;
    // Per-seed evaluation is serial; parallelism lives across seeds.
    const SemContext ctx = makeContext(model, 0, ExecPolicy::Serial);
    SeedOutcome out;
    try {
      out = runLemmaSeed(lemmaId, seed, ctx, opt);
    } catch (const std::exception& e) {
      out = failSeed(std::string("error: ") + e.what());
    }
    passed[i] = out.pass ? 1 : 0;
    lines[i] = std::to_string(seed) + (out.pass ? ",pass" : ",fail," + out.detail);
  };

  if (pol == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < static_cast<int64_t>(count); ++i) {
      oneSeed(static_cast<uint64_t>(i));
    }
  } else {
    for (uint64_t i = 0; i < count; ++i) oneSeed(i);
  }

  rep.lines = std::move(lines);
  for (char c : passed) {
    if (c) {
      ++rep.passed;
    } else {
      ++rep.failed;
    }
  }
  return rep;
}

}  // namespace dglsc
