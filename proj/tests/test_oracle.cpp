// Enumeration fixpoint oracles, seeded generators, and lemma replays.
#include <algorithm>
#include <initializer_list>
#include <map>
#include <string>

#include "doctest.h"
#include "dglsc/errors.hpp"
#include "dglsc/oracle.hpp"
#include "dglsc/parser.hpp"

using namespace dglsc;

namespace {

StateSet bitsOf(uint64_t n, std::initializer_list<uint64_t> is) {
  StateSet s = StateSet::empty(n);
  for (uint64_t i : is) s.set(i);
  return s;
}

}  // namespace

TEST_CASE("enumeration fixpoints on elementary transformers") {
  const auto idf = [](const StateSet& z) { return z; };
  CHECK(lfpByEnumeration(4, idf) == StateSet::empty(4));
  CHECK(gfpByEnumeration(4, idf) == StateSet::full(4));

  const StateSet c = bitsOf(4, {1, 3});
  const auto constf = [&](const StateSet& z) {
    (void)z;
    return c;
  };
  CHECK(lfpByEnumeration(4, constf) == c);
  CHECK(gfpByEnumeration(4, constf) == c);

  const auto grow = [&](const StateSet& z) { return z | c; };
  CHECK(lfpByEnumeration(4, grow) == c);
  CHECK(gfpByEnumeration(4, grow) == StateSet::full(4));

  CHECK_THROWS_AS(lfpByEnumeration(17, idf), SpaceTooLarge);
  CHECK_THROWS_AS(gfpByEnumeration(17, idf), SpaceTooLarge);
}

TEST_CASE("iterated repetition matches the extensional fixpoints") {
  const StateSpace space = StateSpace::modular({{"x", 8}});
  const Model model = buildLemmaModel(space, {1});
  const SemContext ctx = makeContext(model, 0, ExecPolicy::Serial);
  const uint64_t n = space.stateCount;

  GenOptions opt;
  opt.gameDepth = 2;
  opt.formulaDepth = 1;
  opt.allowContinuous = true;
  opt.contConsts = {1};

  for (uint64_t seed = 1; seed <= 12; ++seed) {
    Rng rng(seed);
    const GamePtr body = genGame(rng, space, opt);
    const StateSet X = genStateSet(rng, n);
    const StateSet Y = genStateSet(rng, n);
    const GamePtr rep = gRepeat(body);

    const StateSet competitiveA = lfpByEnumeration(n, [&](const StateSet& z) {
      return X | angelRegion(ctx, body, z, z.complement());
    });
    const StateSet coop = lfpByEnumeration(n, [&](const StateSet& z) {
      return (X & Y) | (angelRegion(ctx, body, z, z) &
                        demonRegion(ctx, body, z, z));
    });
    CHECK_MESSAGE(angelRegion(ctx, rep, X, Y) == (competitiveA | coop),
                  "seed ", seed, " body ", print(body));

    const StateSet competitiveD = gfpByEnumeration(n, [&](const StateSet& z) {
      return Y & demonRegion(ctx, body, z.complement(), z);
    });
    CHECK_MESSAGE(demonRegion(ctx, rep, X, Y) == (competitiveD | coop),
                  "seed ", seed, " body ", print(body));
  }
}

TEST_CASE("game generation is deterministic and hits its weights") {
  const StateSpace space = StateSpace::modular({{"x", 3}, {"y", 2}});
  GenOptions opt;
  opt.gameDepth = 4;
  opt.formulaDepth = 1;

  Rng a(42), b(42);
  CHECK(structEq(genGame(a, space, opt), genGame(b, space, opt)));

  std::map<HybridGame::Kind, uint64_t> hist;
  const uint64_t trials = 10000;
  for (uint64_t seed = 1; seed <= trials; ++seed) {
    Rng rng(seed);
    ++hist[genGame(rng, space, opt)->kind];
  }
  const auto near = [&](HybridGame::Kind k, double expect) {
    const double got = double(hist[k]) / double(trials);
    CHECK_MESSAGE(got > expect * 0.8, "kind ", int(k), " rate ", got);
    CHECK_MESSAGE(got < expect * 1.2, "kind ", int(k), " rate ", got);
  };
  near(HybridGame::Kind::Choice, 0.20);
  near(HybridGame::Kind::Seq, 0.20);
  near(HybridGame::Kind::Dual, 0.175);
  near(HybridGame::Kind::Repeat, 0.175);
  const double atomic = double(hist[HybridGame::Kind::Assign] +
                               hist[HybridGame::Kind::Test] +
                               hist[HybridGame::Kind::Continuous]) /
                        double(trials);
  CHECK(atomic > 0.25 * 0.8);
  CHECK(atomic < 0.25 * 1.2);
  // Both player-structure constructors stay frequent.
  CHECK(double(hist[HybridGame::Kind::Dual]) / double(trials) >= 0.15);
  CHECK(double(hist[HybridGame::Kind::Repeat]) / double(trials) >= 0.15);
}

TEST_CASE("state-set formulas denote exactly their set") {
  const StateSpace space = StateSpace::modular({{"x", 3}, {"y", 4}});
  const Model model = buildLemmaModel(space, {});
  const SemContext ctx = makeContext(model);
  const uint64_t n = space.stateCount;

  CHECK(truthSet(ctx, stateSetToFormula(space, StateSet::empty(n))) ==
        StateSet::empty(n));
  CHECK(truthSet(ctx, stateSetToFormula(space, StateSet::full(n))) ==
        StateSet::full(n));
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    const StateSet s = genStateSet(rng, n);
    CHECK(truthSet(ctx, stateSetToFormula(space, s)) == s);
  }
}

TEST_CASE("the lemma model registers requested flows") {
  const StateSpace space = StateSpace::modular({{"x", 3}, {"y", 3}});
  const Model m = buildLemmaModel(space, {0, 1, 2});
  CHECK(m.flows.size() == 6);
  CHECK(m.flows.count("x'=0") == 1);
  CHECK(m.flows.count("y'=2") == 1);
}

TEST_CASE("lemma id catalogue") {
  const auto ids = lemmaIds();
  CHECK(ids.size() == 37);
  const auto has = [&](const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  };
  for (const char* id : {"L1", "L2", "L3", "Cor-det", "L4", "Cor-coop", "L5",
                         "CA1", "CA2", "axiom-soundness(assignA)",
                         "axiom-soundness(det)", "axiom-soundness(M1)",
                         "axiom-soundness(FP)", "axiom-soundness(cut)",
                         "axiom-soundness(reD)", "axiom-soundness(ind)"}) {
    CHECK_MESSAGE(has(id), id);
  }
  CHECK_FALSE(has("axiom-soundness(reD-alt)"));
}

TEST_CASE("structural lemmas replay clean on a small space") {
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 2");
  for (const char* id : {"L1", "L2", "L3", "Cor-det", "L4", "Cor-coop", "L5",
                         "CA1", "CA2"}) {
    const LemmaReport rep = checkLemma(id, 1, 25, space);
    CHECK_MESSAGE(rep.allPassed(), id, ": ", rep.failed, " failures, e.g. ",
                  rep.lines.empty() ? "" : rep.lines[0]);
    CHECK(rep.passed == 25);
    CHECK(rep.lines.size() == 25);
    CHECK(rep.lines[0] == "1,pass");
  }
}

TEST_CASE("axiom and rule soundness replays clean") {
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 2");
  for (const char* id :
       {"assignA", "assignD", "testA", "testD", "choiceA", "choiceD", "seqA",
        "seqD", "dualA", "dualD", "iterA", "iterD", "det", "M1", "M2", "FP",
        "cut", "andAD", "iterAD", "FP2", "ind", "impAD", "spA", "id", "reA",
        "reD"}) {
    const LemmaReport rep =
        checkLemma("axiom-soundness(" + std::string(id) + ")", 1, 25, space);
    CHECK_MESSAGE(rep.allPassed(), id, ": ",
                  rep.lines.empty() ? "" : rep.lines[0]);
  }

  // The continuous axioms need a uniform modulus and two variables.
  const StateSpace uni = parseSpaceSpec("x mod 3; y mod 3");
  for (const char* id : {"contA", "contD"}) {
    const LemmaReport rep =
        checkLemma("axiom-soundness(" + std::string(id) + ")", 1, 25, uni);
    CHECK_MESSAGE(rep.allPassed(), id, ": ",
                  rep.lines.empty() ? "" : rep.lines[0]);
    CHECK_THROWS_AS(checkLemma("axiom-soundness(" + std::string(id) + ")", 1,
                               5, space),
                    ModelError);
  }

  CHECK_THROWS_AS(checkLemma("no-such-lemma", 1, 5, space), DglscError);
  CHECK_THROWS_AS(checkLemma("L3", 5, 1, space), DglscError);
}

TEST_CASE("the uncorrected repetition deviation law has countermodels") {
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 2");
  const Model model = buildLemmaModel(space, {1});
  const SemContext ctx = makeContext(model, 0, ExecPolicy::Serial);
  GenOptions opt;
  opt.gameDepth = 2;
  opt.formulaDepth = 1;
  opt.allowContinuous = true;
  opt.contConsts = {1};

  uint64_t broken = 0;
  for (uint64_t seed = 1; seed <= 300 && broken == 0; ++seed) {
    Rng rng(seed);
    const OracleInstance inst = axiomInstance("reD-alt", rng, ctx, opt);
    REQUIRE(inst.kind == OracleInstance::Kind::Equiv);
    if (truthSet(ctx, inst.lhs) != truthSet(ctx, inst.rhs)) ++broken;
  }
  CHECK_MESSAGE(broken > 0,
                "expected a countermodel for the uncorrected variant");
}
