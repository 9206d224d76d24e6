// Winning regions and formula denotations on small hand-checked models.
#include <string>

#include "doctest.h"
#include "dglsc/errors.hpp"
#include "dglsc/model.hpp"
#include "dglsc/parser.hpp"
#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

using namespace dglsc;

namespace {

std::string corpus(const std::string& name) {
  return std::string(DGLSC_CORPUS_DIR) + "/" + name;
}

// Three states, no flows: x in {0,1,2}.
Model x3() {
  Model m;
  m.space = StateSpace::strict({{"x", {Rat(0), Rat(1), Rat(2)}}});
  return m;
}

// Z_4 with no flows.
Model m4() {
  Model m;
  m.space = StateSpace::modular({{"x", 4}});
  return m;
}

StateSet bits(const SemContext& ctx, std::initializer_list<uint64_t> is) {
  StateSet s = StateSet::empty(ctx.model->space.stateCount);
  for (uint64_t i : is) s.set(i);
  return s;
}

}  // namespace

TEST_CASE("assignment regions are preimages") {
  const Model m = x3();
  const SemContext ctx = makeContext(m);
  const GamePtr g = parseGame("x:=1");

  CHECK(angelRegion(ctx, g, bits(ctx, {1}), bits(ctx, {})) ==
        StateSet::full(3));
  CHECK(angelRegion(ctx, g, bits(ctx, {0, 2}), StateSet::full(3)) ==
        StateSet::empty(3));
  // The demon's region reads the demon goal.
  CHECK(demonRegion(ctx, g, bits(ctx, {}), bits(ctx, {1})) ==
        StateSet::full(3));

  // Strict mode rejects assignments that leave the domain.
  CHECK_THROWS_AS(
      angelRegion(ctx, parseGame("x:=5"), StateSet::full(3), StateSet::full(3)),
      OutOfDomainAssignment);

  // Modular assignments wrap instead.
  const Model w = m4();
  const SemContext wctx = makeContext(w);
  CHECK(angelRegion(wctx, parseGame("x:=x+3"), bits(wctx, {0}),
                    StateSet::empty(4)) == bits(wctx, {1}));
}

TEST_CASE("test game regions") {
  const Model m = x3();
  const SemContext ctx = makeContext(m);
  const GamePtr g = parseGame("?x>=1");
  const StateSet X = bits(ctx, {0, 1});
  const StateSet Y = bits(ctx, {0});

  // Angel: the test must hold and the angel goal too.
  CHECK(angelRegion(ctx, g, X, Y) == bits(ctx, {1}));
  // Demon: a failed test ends the game in the demon's favour.
  CHECK(demonRegion(ctx, g, X, Y) == bits(ctx, {0}));
}

TEST_CASE("choice, dual and seq") {
  const Model m = x3();
  const SemContext ctx = makeContext(m);
  const StateSet X = bits(ctx, {2});
  const StateSet none = StateSet::empty(3);

  CHECK(angelRegion(ctx, parseGame("x:=1 ++ x:=2"), X, none) ==
        StateSet::full(3));
  // Under ^d the demon picks, so the angel needs both branches to land in X.
  CHECK(angelRegion(ctx, parseGame("(x:=1 ++ x:=2)^d"), X, none) ==
        StateSet::empty(3));
  CHECK(angelRegion(ctx, parseGame("(x:=2 ++ x:=2)^d"), X, none) ==
        StateSet::full(3));

  // x:=x+1 over Z_4, run twice.
  const Model w = m4();
  const SemContext wctx = makeContext(w);
  CHECK(angelRegion(wctx, parseGame("x:=x+1; x:=x+1"), bits(wctx, {0}),
                    StateSet::empty(4)) == bits(wctx, {2}));
}

TEST_CASE("repetition regions") {
  const Model w = m4();
  const SemContext ctx = makeContext(w);
  const GamePtr g = parseGame("(x:=x+1)*");

  // The angel may stop whenever it likes, so it reaches x=0 from anywhere.
  CHECK(angelRegion(ctx, g, bits(ctx, {0}), StateSet::empty(4)) ==
        StateSet::full(4));
  // The demon controls nothing here and its goal keeps shrinking.
  CHECK(demonRegion(ctx, g, bits(ctx, {0}), bits(ctx, {1, 2})) ==
        StateSet::empty(4));
  // With overlapping goals the cooperative phase can end the game happily.
  CHECK(demonRegion(ctx, g, bits(ctx, {1}), bits(ctx, {1})) ==
        StateSet::full(4));

  // A tight iteration cap trips the budget guard.
  const SemContext tight = makeContext(w, 1);
  CHECK_THROWS_AS(
      angelRegion(tight, g, bits(tight, {0}), StateSet::empty(4)),
      FixpointBudgetExceeded);
}

TEST_CASE("continuous games follow the flow tables") {
  const Model juice = loadModelFile(corpus("juice.model"));
  const SemContext ctx = makeContext(juice);
  const uint64_t n = juice.space.stateCount;

  // t'=1 reaches t=5 from every state (it caps there and waits).
  CHECK(truthSet(ctx, parseFormula("<{t'=1}>(t=5, t=0)")) ==
        StateSet::full(n));
  // The demon grants every duration; t<=5 holds along each of them.
  CHECK(truthSet(ctx, parseFormula("[{t'=1}](t=5, t<=5)")) ==
        StateSet::full(n));
  // An evolution constraint cuts the admissible durations: once t>3 the
  // prefix has ended, and states violating the constraint admit nothing.
  CHECK(truthSet(ctx, parseFormula("<{t'=1 & t<=3}>(t=3, true)")) ==
        truthSet(ctx, parseFormula("t<=3")));
  // No admissible duration at all: the demon wins vacuously.
  CHECK(truthSet(ctx, parseFormula("[{t'=1 & false}](false, false)")) ==
        StateSet::full(n));
  CHECK(truthSet(ctx, parseFormula("<{t'=1 & false}>(true, true)")) ==
        StateSet::empty(n));

  CHECK_THROWS_AS(truthSet(ctx, parseFormula("<{t'=2}>(true, true)")),
                  MissingFlowTable);
}

TEST_CASE("formula denotations") {
  const Model juice = loadModelFile(corpus("juice.model"));
  const SemContext ctx = makeContext(juice);
  const uint64_t n = juice.space.stateCount;

  CHECK(truthSet(ctx, parseFormula("exists t t=5")) == StateSet::full(n));
  CHECK(truthSet(ctx, parseFormula("forall t t>=1")) == StateSet::empty(n));
  CHECK(truthSet(ctx, parseFormula("forall t t>=0")) == StateSet::full(n));
  CHECK(truthSet(ctx, parseFormula("o>=4 & t>=5")).count() == 2);
  CHECK(truthSet(ctx, parseFormula("!(o>=1)")).count() == 6);
  // The bound o shadows the state's o; the free t does not.
  CHECK(truthSet(ctx, parseFormula("exists o (o=4 & o>=t)")) ==
        truthSet(ctx, parseFormula("t<=4")));
}

TEST_CASE("the juice run") {
  const Model juice = loadModelFile(corpus("juice.model"));
  const SemContext ctx = makeContext(juice);
  const GamePtr game = parseGame("{t'=1}; {o'=1}^d");
  const StateSet X = truthSet(ctx, parseFormula("o=3"));
  const StateSet Y = truthSet(ctx, parseFormula("t=5"));

  const StateSet region = angelRegion(ctx, game, X, Y);
  CHECK(region.hexDump() == "ffffff000");
  // (o=0, t=0) is state 0: the angel can finish its errand in time.
  CHECK(region.test(stateIndex(juice.space, State{{Rat(0), Rat(0)}})));
  // o=4 is too late no matter the clock.
  CHECK_FALSE(region.test(stateIndex(juice.space, State{{Rat(4), Rat(0)}})));

  // The same query through the formula layer.
  CHECK(truthSet(ctx, parseFormula("<{t'=1}; {o'=1}^d>(o=3, t=5)")) == region);
}

TEST_CASE("zero-sum regions and their dualities") {
  const Model juice = loadModelFile(corpus("juice.model"));
  const SemContext ctx = makeContext(juice);
  const GamePtr game = parseGame("{t'=1}; {o'=1}^d");
  const StateSet X = truthSet(ctx, parseFormula("o=3"));

  // Complementary goals collapse to the zero-sum regions.
  CHECK(angelRegion(ctx, game, X, X.complement()) ==
        dglAngelRegion(ctx, game, X));
  CHECK(demonRegion(ctx, game, X.complement(), X) ==
        dglDemonRegion(ctx, game, X));
  // Determinacy.
  CHECK(dglDemonRegion(ctx, game, X) ==
        dglAngelRegion(ctx, game, X.complement()).complement());

  // The zero-sum embedding of the two-goal regions.
  const StateSet Y = truthSet(ctx, parseFormula("t=5"));
  const GamePtr sys = systematize(game);
  const StateSet coop = dglAngelRegion(ctx, sys, X & Y);
  CHECK(angelRegion(ctx, game, X, Y) ==
        (coop | dglAngelRegion(ctx, game, X)));
  CHECK(demonRegion(ctx, game, X, Y) ==
        (coop | dglDemonRegion(ctx, game, Y)));
  CHECK((angelRegion(ctx, game, X, Y) & demonRegion(ctx, game, X, Y)) == coop);
}

TEST_CASE("default fixpoint budget suffices on every space") {
  // |S| + 1 rounds always stabilise; spot-check on the worst case, a chain
  // that grows by one state per round.
  const Model w = m4();
  const SemContext ctx = makeContext(w);
  CHECK(angelRegion(ctx, parseGame("(x:=x+1)*"), bits(ctx, {3}),
                    StateSet::empty(4)) == StateSet::full(4));
}
