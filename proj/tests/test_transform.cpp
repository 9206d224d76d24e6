// systematize / complementarize / goalsToTests: shapes and semantics.
#include <string>

#include "doctest.h"
#include "dglsc/errors.hpp"
#include "dglsc/parser.hpp"
#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

using namespace dglsc;

namespace {

std::string corpus(const std::string& name) {
  return std::string(DGLSC_CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("systematize strips duals homomorphically") {
  CHECK(structEq(systematize(parseGame("(x:=1 ++ (x:=2)^d)*")),
                 parseGame("(x:=1 ++ x:=2)*")));
  CHECK(structEq(systematize(parseGame("((x:=1)^d)^d")), parseGame("x:=1")));
  CHECK(structEq(systematize(parseGame("{t'=1}; {o'=1}^d")),
                 parseGame("{t'=1}; {o'=1}")));
  // Tests and their formulas are untouched, even under a dual.
  CHECK(structEq(systematize(parseGame("(?<x:=1>(x>=0, true))^d")),
                 parseGame("?<x:=1>(x>=0, true)")));
  const GamePtr atom = parseGame("x:=y+1");
  CHECK(structEq(systematize(atom), atom));
  // Idempotent.
  const GamePtr g = parseGame("((x:=1)^d; ?x>=0)* ++ {t'=1}^d");
  CHECK(structEq(systematize(systematize(g)), systematize(g)));
}

TEST_CASE("complementarize rewrites to complementary goal pairs") {
  const GamePtr g = parseGame("x:=1 ++ (x:=2)^d");
  const FormulaPtr p = parseFormula("x>=1");
  const FormulaPtr q = parseFormula("x>=0");

  const FormulaPtr ca = complementarize(fAngel(g, p, q));
  CHECK(structEq(ca, fOr(fAngel1(systematize(g), fAnd(p, q)), fAngel1(g, p))));

  const FormulaPtr cd = complementarize(fDemon(g, p, q));
  CHECK(structEq(cd, fOr(fAngel1(systematize(g), fAnd(p, q)), fDemon1(g, q))));

  CHECK(hasComplementaryGoals(ca));
  CHECK(hasComplementaryGoals(cd));
  CHECK_FALSE(hasComplementaryGoals(fAngel(g, p, q)));
  // <g>(P, !P) is already complementary.
  CHECK(hasComplementaryGoals(fAngel1(g, p)));
  // Atoms hold trivially and are left alone.
  CHECK(structEq(complementarize(p), p));
  CHECK(hasComplementaryGoals(p));
}

TEST_CASE("complementarize recurses into goals and tests") {
  const GamePtr g = parseGame("x:=1");
  const FormulaPtr inner = fAngel(g, parseFormula("x>=1"), parseFormula("x>=0"));
  // A modality nested in a goal gets rewritten too.
  const FormulaPtr f = fAngel(g, inner, parseFormula("true"));
  CHECK(hasComplementaryGoals(complementarize(f)));
  // ... and one nested inside a test game.
  const FormulaPtr t =
      fAngel(gTest(inner), parseFormula("true"), parseFormula("true"));
  CHECK(hasComplementaryGoals(complementarize(t)));
}

TEST_CASE("goalsToTests moves the goals into the game") {
  const FormulaPtr f = parseFormula("<x:=1>(x>=1, x>=0)");
  const GamePtr a = parseGame("x:=1");
  const FormulaPtr p = parseFormula("x>=1");
  const FormulaPtr q = parseFormula("x>=0");

  const FormulaPtr out = goalsToTests(f);
  const GamePtr pThenQ = gSeq(a, gSeq(gTest(p), gDual(gTest(q))));
  const GamePtr qThenP = gSeq(a, gSeq(gDual(gTest(q)), gTest(p)));
  CHECK(structEq(out, fAnd(fAngel(pThenQ, fTrue(), fTrue()),
                           fAngel(qThenP, fTrue(), fTrue()))));

  const FormulaPtr fd = parseFormula("[x:=1](x>=1, x>=0)");
  const FormulaPtr outd = goalsToTests(fd);
  CHECK(outd->kind == Formula::Kind::And);
  CHECK(outd->l->kind == Formula::Kind::DemonModal);

  CHECK_THROWS_AS(goalsToTests(parseFormula("x>=0")), DglscError);
}

TEST_CASE("transforms preserve truth on the juice model") {
  const Model juice = loadModelFile(corpus("juice.model"));
  const SemContext ctx = makeContext(juice);
  for (const char* text : {"<{t'=1}; {o'=1}^d>(o=3, t=5)",
                           "[{t'=1}; {o'=1}^d](o=3, t=5)",
                           "<({t'=1} ++ {o'=1}^d)*>(o=3 & t<=5, t=5)"}) {
    const FormulaPtr f = parseFormula(text);
    CHECK(truthSet(ctx, complementarize(f)) == truthSet(ctx, f));
    CHECK(truthSet(ctx, goalsToTests(f)) == truthSet(ctx, f));
  }
}
