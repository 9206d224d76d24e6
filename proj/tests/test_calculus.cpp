// The proof kernel: rule applications, one-step closures, script parsing,
// end-to-end checking, and the derived-rule generators.
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "dglsc/calculus.hpp"
#include "dglsc/errors.hpp"
#include "dglsc/oracle.hpp"
#include "dglsc/parser.hpp"
#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

using namespace dglsc;

namespace {

std::string corpus(const std::string& name) {
  return std::string(DGLSC_CORPUS_DIR) + "/" + name;
}

Sequent seq(const std::string& text) {
  auto [a, s] = parseSequent(text);
  return Sequent{std::move(a), std::move(s)};
}

ProofStep step(const std::string& ruleId, const std::string& pos,
               std::vector<ProofStep> premises = {}) {
  ProofStep st;
  st.ruleId = ruleId;
  st.position = pos;
  st.premises = std::move(premises);
  return st;
}

// A one-formula goal |- f with the given root step, no model.
Verdict checkFormulaGoal(const FormulaPtr& f, ProofStep root) {
  ProofScript sc;
  sc.goal = Sequent{{}, {f}};
  sc.root = std::move(root);
  return checkProof(sc);
}

}  // namespace

TEST_CASE("sequents print and re-parse") {
  CHECK(print(seq("x>=0 |- x>=1, x>=2")) == "x>=0 |- x>=1, x>=2");
  CHECK(print(seq("|- x>=1")) == "|- x>=1");
  CHECK(print(seq("x>=0 |-")) == "x>=0 |-");
  CHECK(structEq(seq(print(seq("x=0, y>=1 |- x>=y"))),
                 seq("x=0, y>=1 |- x>=y")));

  CHECK(structEq(sequentFormula(seq("x>=0, x>=1 |- x>=2")),
                 parseFormula("x>=0 & x>=1 -> x>=2")));
  CHECK(structEq(sequentFormula(seq("|- x>=2")), parseFormula("x>=2")));
  CHECK(structEq(sequentFormula(seq("x>=0 |-")),
                 parseFormula("x>=0 -> false")));
  CHECK(structEq(sequentFormula(seq("|- x>=1, x>=2")),
                 parseFormula("x>=1 | x>=2")));
}

TEST_CASE("axiom rewrites produce the axiom's other side") {
  // seqA unfolds one sequential step.
  auto out = applyRule(seq("|- <x:=1; x:=2>(x>=1, x>=0)"), step("seqA", "S0"));
  REQUIRE(out.size() == 1);
  CHECK(structEq(out[0],
                 seq("|- <x:=1>(<x:=2>(x>=1, x>=0), [x:=2](x>=1, x>=0))")));

  // dualA swaps the goals and the player.
  out = applyRule(seq("|- <(x:=1)^d>(x>=1, x>=0)"), step("dualA", "S0"));
  CHECK(structEq(out[0], seq("|- [x:=1](x>=0, x>=1)")));

  // assignA substitutes into the angel goal.
  out = applyRule(seq("|- <x:=y+1>(x>=1, x>=0)"), step("assignA", "S0"));
  CHECK(structEq(out[0], seq("|- y+1>=1")));

  // choiceA splits into a disjunction.
  out = applyRule(seq("|- <x:=1 ++ x:=2>(x>=1, x>=0)"),
                  step("choiceA", "S0"));
  CHECK(structEq(out[0],
                 seq("|- <x:=1>(x>=1, x>=0) | <x:=2>(x>=1, x>=0)")));

  // iterA unrolls once.
  out = applyRule(seq("|- <(x:=1)*>(x>=1, x>=0)"), step("iterA", "S0"));
  CHECK(structEq(out[0], seq("|- x>=1 | <x:=1; (x:=1)*>(x>=1, x>=0)")));

  // det turns an impossible angel goal into a demon obligation.
  out = applyRule(seq("|- !<x:=1>(x>=1, !x>=1)"), step("det", "S0"));
  CHECK(structEq(out[0], seq("|- [x:=1](!!x>=1, !x>=1)")));

  // The reverse direction applies when the redex is the right-hand side.
  out = applyRule(seq("|- <x:=1>(x>=1, x>=0) | <x:=2>(x>=1, x>=0)"),
                  step("choiceA", "S0"));
  CHECK(structEq(out[0], seq("|- <x:=1 ++ x:=2>(x>=1, x>=0)")));

  CHECK_THROWS_AS(
      applyRule(seq("|- <x:=1>(x>=1, x>=0)"), step("seqA", "S0")), RuleError);
  CHECK_THROWS_AS(
      applyRule(seq("|- <x:=1>(x>=1, x>=0)"), step("assignA", "-")),
      RuleError);
}

TEST_CASE("rewrites respect polarity") {
  // One negation: rejected.
  CHECK_THROWS_WITH_AS(
      applyRule(seq("|- !<?x>=0>(x>=1, x>=2)"), step("testA", "S0.0")),
      doctest::Contains("odd number of negations"), RuleError);
  // Two negations cancel.
  const auto out = applyRule(seq("|- !!<?x>=0>(x>=1, x>=2)"),
                             step("testA", "S0.0.0"));
  CHECK(structEq(out[0], seq("|- !!(x>=0 & x>=1)")));
  // Rewrites inside an antecedent formula are fine at even parity.
  const auto outA = applyRule(seq("<?x>=0>(x>=1, x>=2) |- x>=5"),
                              step("testA", "A0"));
  CHECK(structEq(outA[0], seq("x>=0 & x>=1 |- x>=5")));

  CHECK_THROWS_AS(applyRule(seq("|- x>=0"), step("testA", "S1")), RuleError);
  CHECK_THROWS_AS(applyRule(seq("|- x>=0"), step("testA", "A0")), RuleError);
  CHECK_THROWS_AS(applyRule(seq("|- x>=0"), step("testA", "S0.3")),
                  RuleError);
}

TEST_CASE("continuous axioms build the jump formula") {
  const auto out = applyRule(seq("|- <{t'=1}>(t>=3, true)"),
                             [] {
                               ProofStep st = step("contA", "S0");
                               st.inst.terms["tau"] = tVar("s");
                               return st;
                             }());
  REQUIRE(out.size() == 1);
  CHECK(structEq(out[0], seq("|- exists s (s>=0 & <t:=t+1*s>(t>=3, true))")));

  // tau must be fresh for the modality.
  ProofStep stale = step("contA", "S0");
  stale.inst.terms["tau"] = tVar("t");
  CHECK_THROWS_AS(applyRule(seq("|- <{t'=1}>(t>=3, true)"), stale), RuleError);

  ProofStep dem = step("contD", "S0");
  dem.inst.terms["tau"] = tVar("s");
  const auto outD = applyRule(seq("|- [{t'=1}](t>=3, t>=0)"), dem);
  CHECK(structEq(
      outD[0],
      seq("|- forall s (s>=0 -> [t:=t+1*s](t>=3, t>=0))"
          " | exists s (s>=0 & <t:=t+1*s>(t>=3 & t>=0, t>=0))")));

  // Only constant derivatives have the closed-form solution.
  ProofStep odeVar = step("contA", "S0");
  odeVar.inst.terms["tau"] = tVar("s");
  CHECK_THROWS_AS(applyRule(seq("|- <{t'=t}>(t>=3, true)"), odeVar),
                  RuleError);
}

TEST_CASE("first-order rules") {
  CHECK(applyRule(seq("x>=0 |- x>=0"), step("fol(id)", "-")).empty());
  CHECK_THROWS_AS(applyRule(seq("x>=0 |- x>=1"), step("fol(id)", "-")),
                  RuleError);

  auto out = applyRule(seq("x>=0, x>=1 |- x>=2"), step("fol(weakL)", "A0"));
  CHECK(structEq(out[0], seq("x>=1 |- x>=2")));
  out = applyRule(seq("|- x>=1, x>=2"), step("fol(weakR)", "S1"));
  CHECK(structEq(out[0], seq("|- x>=1")));

  out = applyRule(seq("|- !x>=1, x>=2"), step("fol(notR)", "S0"));
  CHECK(structEq(out[0], seq("x>=1 |- x>=2")));
  out = applyRule(seq("!x>=1 |- x>=2"), step("fol(notL)", "A0"));
  CHECK(structEq(out[0], seq("|- x>=2, x>=1")));

  out = applyRule(seq("|- x>=1 & x>=2"), step("fol(andR)", "S0"));
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[0], seq("|- x>=1")));
  CHECK(structEq(out[1], seq("|- x>=2")));

  out = applyRule(seq("x>=1 & x>=2 |- x>=3"), step("fol(andL)", "A0"));
  CHECK(structEq(out[0], seq("x>=1, x>=2 |- x>=3")));

  out = applyRule(seq("|- x>=1 | x>=2"), step("fol(orR2)", "S0"));
  CHECK(structEq(out[0], seq("|- x>=2")));

  out = applyRule(seq("x>=1 | x>=2 |- x>=0"), step("fol(orL)", "A0"));
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[0], seq("x>=1 |- x>=0")));
  CHECK(structEq(out[1], seq("x>=2 |- x>=0")));

  out = applyRule(seq("|- x>=1 -> x>=2"), step("fol(implyR)", "S0"));
  CHECK(structEq(out[0], seq("x>=1 |- x>=2")));

  ProofStep ex = step("fol(existsR)", "S0");
  ex.inst.terms["witness"] = parseTerm("y+1");
  out = applyRule(seq("|- exists x x>=y"), ex);
  CHECK(structEq(out[0], seq("|- y+1>=y")));
  CHECK_THROWS_AS(applyRule(seq("|- exists x x>=y"),
                            step("fol(existsR)", "S0")),
                  RuleError);

  // Unexpected metavariables are rejected.
  ProofStep noisy = step("fol(notR)", "S0");
  noisy.inst.formulas["P"] = fTrue();
  CHECK_THROWS_AS(applyRule(seq("|- !x>=1"), noisy), RuleError);
}

TEST_CASE("cut, monotonicity, fixpoint and induction rules") {
  ProofStep c = step("cut", "-");
  c.inst.formulas["C"] = parseFormula("x>=1");
  auto out = applyRule(seq("x>=0 |- x>=2"), c);
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[0], seq("x>=0 |- x>=2, x>=1")));
  CHECK(structEq(out[1], seq("x>=0, x>=1 |- x>=2")));

  // M1 at the whole sequent.
  out = applyRule(seq("<x:=1>(x>=1, x>=0) |- <x:=1>(x>=1 | x>=2, x>=0)"),
                  step("M1", "-"));
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[0], seq("|- x>=1 -> x>=1 | x>=2")));
  CHECK(structEq(out[1], seq("|- x>=0 -> x>=0")));

  // M1 on an implication in the succedent.
  out = applyRule(seq("|- <x:=1>(x>=1, x>=0) -> <x:=1>(x>=2, x>=0)"),
                  step("M1", "S0"));
  CHECK(structEq(out[0], seq("|- x>=1 -> x>=2")));

  // M2 swaps the second premise for goal disjointness.
  out = applyRule(seq("<x:=1>(x>=1, x>=0) |- <x:=1>(x>=2, x>=9)"),
                  step("M2", "-"));
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[1], seq("|- x>=1 & x>=0 -> false")));

  CHECK_THROWS_AS(applyRule(seq("x>=0 |- x>=1"), step("M1", "-")), RuleError);
  CHECK_THROWS_AS(
      applyRule(seq("<x:=1>(x>=1, x>=0) |- <x:=2>(x>=1, x>=0)"),
                step("M1", "-")),
      RuleError);

  // FP: the two premises of the repetition fixpoint rule.
  out = applyRule(
      seq("|- <(x:=x+1)*>(x>=3, x>=0) -> x>=1 | x>=2"), step("FP", "S0"));
  REQUIRE(out.size() == 2);
  CHECK(structEq(out[0],
                 seq("|- x>=3 | <x:=x+1>(x>=1, !x>=1) -> x>=1")));
  CHECK(structEq(
      out[1],
      seq("|- (x>=3 & x>=0) | (<x:=x+1>(x>=2, x>=2) & [x:=x+1](x>=2, x>=2)) "
          "-> x>=2")));

  // FP2: joint premise for the conjunction of both players' repetitions.
  out = applyRule(
      seq("<(x:=1)*>(x>=1, x>=0) & [(x:=1)*](x>=1, x>=0) |- x>=2"),
      step("FP2", "-"));
  REQUIRE(out.size() == 1);
  CHECK(structEq(
      out[0],
      seq("|- (x>=1 & x>=0) | (<x:=1>(x>=2, x>=2) & [x:=1](x>=2, x>=2)) "
          "-> x>=2")));

  // ind: invariance for the demon's repetition.
  out = applyRule(seq("|- x>=0 -> [(x:=x)*](x>=1, x>=0)"), step("ind", "S0"));
  REQUIRE(out.size() == 1);
  CHECK(structEq(out[0], seq("|- x>=0 -> [x:=x](!x>=0, x>=0)")));
  CHECK_THROWS_AS(
      applyRule(seq("|- x>=5 -> [(x:=x)*](x>=1, x>=0)"), step("ind", "S0")),
      RuleError);
}

TEST_CASE("propositional tautology leaves") {
  CHECK(applyRule(seq("|- x>=1 -> x>=1 | x>=2"), step("prop(taut)", "-"))
            .empty());
  CHECK(applyRule(seq("<x:=1>(x>=0, true) |- <x:=1>(x>=0, true), x>=9"),
                  step("prop(taut)", "-"))
            .empty());
  CHECK_THROWS_WITH_AS(
      applyRule(seq("|- x>=1 -> x>=2"), step("prop(taut)", "-")),
      doctest::Contains("x>=1"), RuleError);

  // Too many distinct atoms for the 2^k scan.
  std::string big = "|- x>=1";
  for (int i = 2; i <= 17; ++i) big += " | x>=" + std::to_string(i);
  CHECK_THROWS_WITH_AS(applyRule(seq(big), step("prop(taut)", "-")),
                       doctest::Contains("16"), RuleError);
}

TEST_CASE("axiom equivalences close in one step") {
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 3");
  const Model model = buildLemmaModel(space, {0, 1, 2});
  const SemContext ctx = makeContext(model, 0, ExecPolicy::Serial);
  GenOptions opt;
  opt.gameDepth = 2;
  opt.formulaDepth = 1;
  opt.allowContinuous = true;
  opt.contConsts = {0, 1, 2};

  for (const char* id :
       {"assignA", "assignD", "testA", "testD", "choiceA", "choiceD", "seqA",
        "seqD", "dualA", "dualD", "iterA", "iterD", "det"}) {
    for (uint64_t seedOffset = 0; seedOffset < 5; ++seedOffset) {
      Rng rng(100 + seedOffset);
      const OracleInstance inst = axiomInstance(id, rng, ctx, opt);
      REQUIRE(inst.kind == OracleInstance::Kind::Equiv);
      const Verdict fwd =
          checkFormulaGoal(fEquiv(inst.lhs, inst.rhs), step(id, "S0"));
      CHECK_MESSAGE(fwd.accepted, id, " seed ", 100 + seedOffset, ": ",
                    fwd.reason);
      // The flipped statement closes through the other direction.
      const Verdict rev =
          checkFormulaGoal(fEquiv(inst.rhs, inst.lhs), step(id, "S0"));
      CHECK_MESSAGE(rev.accepted, id, " reversed: ", rev.reason);
    }
  }

  // The continuous pair needs its fresh-time metavariable.
  ProofStep ca = step("contA", "S0");
  ca.inst.terms["tau"] = tVar("s");
  CHECK(checkFormulaGoal(
            parseFormula("<{t'=1}>(t>=3, true) <-> "
                         "exists s (s>=0 & <t:=t+1*s>(t>=3, true))"),
            ca)
            .accepted);
  ProofStep cd = step("contD", "S0");
  cd.inst.terms["tau"] = tVar("s");
  CHECK(checkFormulaGoal(
            parseFormula("[{t'=1}](t>=3, t>=0) <-> "
                         "(forall s (s>=0 -> [t:=t+1*s](t>=3, t>=0))"
                         " | exists s (s>=0 & <t:=t+1*s>(t>=3 & t>=0, t>=0)))"),
            cd)
            .accepted);

  // A mismatched equivalence does not close.
  const Verdict bad = checkFormulaGoal(
      parseFormula("<?x>=0>(x>=1, x>=2) <-> x>=0 & x>=2"), step("testA", "S0"));
  CHECK_FALSE(bad.accepted);
}

TEST_CASE("deviation laws close with their instantiation") {
  const GamePtr a = parseGame("x:=1 ++ (x:=2)^d");
  const GamePtr b = parseGame("?x>=0");
  const FormulaPtr p = parseFormula("x>=1");
  const FormulaPtr q = parseFormula("x>=0");

  for (const char* id : {"andAD", "iterAD", "id", "reA", "reD"}) {
    const bool twoGames =
        std::string(id) == "reA" || std::string(id) == "reD";
    const auto [l, r] = deviationLawSides(id, a, twoGames ? b : nullptr, p, q);
    ProofStep st = step(id, "S0");
    st.inst.games["alpha"] = a;
    if (twoGames) st.inst.games["beta"] = b;
    st.inst.formulas["P"] = p;
    st.inst.formulas["Q"] = q;
    const Verdict v = checkFormulaGoal(fEquiv(l, r), st);
    CHECK_MESSAGE(v.accepted, id, ": ", v.reason);

    // Swapping in unrelated goals must not close.
    ProofStep wrong = st;
    wrong.inst.formulas["P"] = parseFormula("x>=77");
    CHECK_FALSE(checkFormulaGoal(fEquiv(l, r), wrong).accepted);
  }

  const auto [sl, sr] = deviationLawSides("spA", a, b, p, q);
  ProofStep sp = step("spA", "S0");
  sp.inst.games["alpha"] = a;
  sp.inst.games["beta"] = b;
  sp.inst.formulas["P"] = p;
  sp.inst.formulas["Q"] = q;
  // spA is an implication, so it rewrites rather than closes.
  const auto out = applyRule(Sequent{{}, {sr}}, sp);
  REQUIRE(out.size() == 1);
  CHECK(structEq(out[0].succedent[0], sl));
}

TEST_CASE("implication laws rewrite by polarity") {
  const GamePtr a = parseGame("x:=1");
  const FormulaPtr p = parseFormula("x>=1");
  const FormulaPtr q = parseFormula("x>=0");
  const auto [l, r] = deviationLawSides("impAD", a, nullptr, p, q);

  ProofStep st = step("impAD", "S0");
  st.inst.games["alpha"] = a;
  st.inst.formulas["P"] = p;
  st.inst.formulas["Q"] = q;

  // In the succedent the right side strengthens to the left side.
  auto out = applyRule(Sequent{{}, {r}}, st);
  CHECK(structEq(out[0].succedent[0], l));
  CHECK_THROWS_AS(applyRule(Sequent{{}, {l}}, st), RuleError);

  // In the antecedent the left side weakens to the right side.
  ProofStep ante = st;
  ante.position = "A0";
  out = applyRule(Sequent{{l}, {parseFormula("x>=9")}}, ante);
  CHECK(structEq(out[0].antecedent[0], r));
  CHECK_THROWS_AS(applyRule(Sequent{{r}, {parseFormula("x>=9")}}, ante),
                  RuleError);
}

TEST_CASE("arithmetic leaves discharge by grounding or by model") {
  // Ground true succedent formula.
  CHECK(checkFormulaGoal(parseFormula("5>=0"), step("leafArith", "-"))
            .accepted);
  // Ground false antecedent formula.
  {
    ProofScript sc;
    sc.goal = seq("1>=2 |- x>=55");
    sc.root = step("leafArith", "-");
    CHECK(checkProof(sc).accepted);
  }
  // Fully ground and false: rejected.
  {
    ProofScript sc;
    sc.goal = seq("|- 1>=2");
    sc.root = step("leafArith", "-");
    const Verdict v = checkProof(sc);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason.find("evaluates to false") != std::string::npos);
  }
  // Free variables and no model: rejected with a pointer at the gap.
  {
    ProofScript sc;
    sc.goal = seq("|- x>=0");
    sc.root = step("leafArith", "-");
    const Verdict v = checkProof(sc);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason.find("no model") != std::string::npos);
  }
  // With a model the truth set decides.
  const Model m2 = loadModelFile(corpus("m2.model"));
  {
    ProofScript sc;
    sc.goal = seq("|- x>=0");
    sc.root = step("leafArith", "-");
    CHECK(checkProof(sc, &m2).accepted);
  }
  {
    ProofScript sc;
    sc.goal = seq("|- x>=1");
    sc.root = step("leafArith", "-");
    const Verdict v = checkProof(sc, &m2);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason.find("truth set") != std::string::npos);
  }
  // leafModel insists on having a model.
  {
    ProofScript sc;
    sc.goal = seq("|- x>=0");
    sc.root = step("leafModel", "-");
    CHECK_FALSE(checkProof(sc).accepted);
    CHECK(checkProof(sc, &m2).accepted);
  }
}

TEST_CASE("premise arity must match the script") {
  ProofScript sc;
  sc.goal = seq("|- x>=1 & x>=2");
  sc.root = step("fol(andR)", "S0", {step("leafArith", "-")});
  const Verdict v = checkProof(sc);
  CHECK_FALSE(v.accepted);
  CHECK(v.reason.find("2 premise(s)") != std::string::npos);
  CHECK(v.stepPath == "0");
}

TEST_CASE("script text parses into a step tree") {
  const ProofScript sc = parseProofScript(
      "# closure of a test axiom\n"
      "goal |- <?x>=0>(x>=1, x>=2) <-> x>=0 & x>=1\n"
      "step 1 testA at S0\n");
  CHECK(structEq(sc.goal, seq("|- <?x>=0>(x>=1, x>=2) <-> x>=0 & x>=1")));
  CHECK(sc.root.ruleId == "testA");
  CHECK(sc.root.label == "1");
  CHECK_FALSE(sc.modelRef.has_value());
  CHECK(checkProof(sc).accepted);

  const ProofScript tree = parseProofScript(
      "goal |- x>=1 & 2>=1 -> x>=1\n"
      "step 10 fol(implyR) at S0 premises [20]\n"
      "step 20 fol(andL) at A0 premises [30]\n"
      "step 30 fol(id) at -\n");
  CHECK(tree.root.label == "10");
  REQUIRE(tree.root.premises.size() == 1);
  CHECK(tree.root.premises[0].label == "20");
  CHECK(checkProof(tree).accepted);

  // Metavariable values: formula, game and term categories.
  const ProofScript meta = parseProofScript(
      "goal |- x>=0\n"
      "step 1 cut at - with {C := <x:=1 ++ x:=2>(x>=1, x>=0)} "
      "premises [2, 3]\n"
      "step 2 leafArith at -\n"
      "step 3 fol(weakL) at A0 premises [4]\n"
      "step 4 leafArith at -\n");
  CHECK(meta.root.inst.formulas.count("C") == 1);

  const ProofScript ex = parseProofScript(
      "goal |- exists x x>=0\n"
      "step 1 fol(existsR) at S0 with {witness := y+1} premises [2]\n"
      "step 2 leafArith at -\n");
  CHECK(ex.root.inst.terms.count("witness") == 1);
}

TEST_CASE("malformed scripts are rejected") {
  const auto bad = [](const std::string& text) {
    CHECK_THROWS_AS(parseProofScript(text), SyntaxError);
  };
  bad("step 1 testA at S0\n");                        // no goal
  bad("goal |- x>=0\n");                              // no steps
  bad("goal |- x>=0\nstep 0 leafArith at -\n");       // ids are positive
  bad("goal |- x>=0\nstep 1 leafArith at -\nstep 1 leafArith at -\n");
  bad("goal |- x>=0\nstep 1 fol(andR) at S0 premises [7]\n");
  bad("goal |- x>=0\nstep 1 leafArith at -\nstep 2 leafArith at -\n");
  // Sharing one premise between two parents fails.
  bad("goal |- x>=0\n"
      "step 1 fol(andR) at S0 premises [3, 3]\n"
      "step 3 leafArith at -\n");
  // Cycles have no root.
  bad("goal |- x>=0\n"
      "step 1 fol(notR) at S0 premises [2]\n"
      "step 2 fol(notL) at A0 premises [1]\n");
  // Duplicate metavariable.
  bad("goal |- x>=0\nstep 1 cut at - with {C := x>=0, C := x>=1} "
      "premises [2, 3]\nstep 2 leafArith at -\nstep 3 leafArith at -\n");
}

TEST_CASE("the bundled scripts behave as recorded") {
  const ProofScript juice = loadProofScript(corpus("juice.proof"));
  REQUIRE(juice.modelRef.has_value());
  const Verdict v = checkProof(juice);
  CHECK_MESSAGE(v.accepted, "at ", v.stepPath, ": ", v.reason);

  // The same script with an explicit model override.
  const Model model = loadModelFile(corpus("juice.model"));
  CHECK(checkProof(juice, &model).accepted);

  const Verdict bad = checkProof(loadProofScript(corpus("bad.proof")));
  CHECK_FALSE(bad.accepted);
  CHECK(bad.stepPath == "0");
  CHECK(bad.reason.find("choiceA") != std::string::npos);
}

TEST_CASE("derived demon monotonicity expands to kernel steps") {
  DemonMonotonicityInput in;
  in.game = parseGame("x:=1 ++ (x:=2)^d");
  in.p1 = parseFormula("x>=2");
  in.q1 = parseFormula("x>=1");
  in.p2 = parseFormula("x>=2 | x>=3");
  in.q2 = parseFormula("x>=1 | x>=0");
  in.premise1 = step("prop(taut)", "-");
  in.premise2 = step("prop(taut)", "-");
  const ProofScript sc = deriveDemonMonotonicity(in);
  CHECK(structEq(sc.goal,
                 seq("|- [x:=1 ++ (x:=2)^d](x>=2, x>=1) -> "
                     "[x:=1 ++ (x:=2)^d](x>=2 | x>=3, x>=1 | x>=0)")));
  const Verdict v = checkProof(sc);
  CHECK_MESSAGE(v.accepted, "at ", v.stepPath, ": ", v.reason);

  // The M2 form takes a disjointness premise and an arbitrary new angel goal.
  DemonMonotonicityInput m2 = in;
  m2.useM2 = true;
  m2.q1 = parseFormula("x>=1");
  m2.p1 = parseFormula("!x>=1");
  m2.p2 = parseFormula("x>=55");
  const Verdict v2 = checkProof(deriveDemonMonotonicity(m2));
  CHECK_MESSAGE(v2.accepted, "at ", v2.stepPath, ": ", v2.reason);

  // Seeded instances over random games.
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 2");
  GenOptions opt;
  opt.gameDepth = 2;
  opt.formulaDepth = 1;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    DemonMonotonicityInput d;
    d.game = genGame(rng, space, opt);
    d.p1 = genPropFormula(rng, space, 1);
    d.q1 = genPropFormula(rng, space, 1);
    d.p2 = fOr(d.p1, genPropFormula(rng, space, 1));
    d.q2 = fOr(d.q1, genPropFormula(rng, space, 1));
    d.premise1 = step("prop(taut)", "-");
    d.premise2 = step("prop(taut)", "-");
    const Verdict dv = checkProof(deriveDemonMonotonicity(d));
    CHECK_MESSAGE(dv.accepted, "seed ", seed, " at ", dv.stepPath, ": ",
                  dv.reason);
  }
}

TEST_CASE("derived complementarization proofs check") {
  const FormulaPtr p = parseFormula("x>=1");
  const FormulaPtr q = parseFormula("x>=0");

  for (const char* text :
       {"x:=1", "?x>=2", "x:=1 ++ (x:=2)^d", "(x:=1 ++ x:=2)^d",
        "(?x>=1)^d", "x:=0 ++ x:=1 ++ x:=2"}) {
    const GamePtr g = parseGame(text);
    for (const bool angel : {true, false}) {
      const ProofScript sc = deriveComplementarization(angel, g, p, q);
      const Verdict v = checkProof(sc);
      CHECK_MESSAGE(v.accepted, (angel ? "angel " : "demon "), text, " at ",
                    v.stepPath, ": ", v.reason);
      // The goal is the law instance itself.
      const FormulaPtr modal = angel ? fAngel(g, p, q) : fDemon(g, p, q);
      const FormulaPtr rhs =
          fOr(fAngel1(systematize(g), fAnd(p, q)),
              angel ? fAngel1(g, p) : fDemon1(g, q));
      CHECK(structEq(sc.goal.succedent[0], fEquiv(modal, rhs)));
    }
  }

  // Seeded games from the supported fragment.
  const StateSpace space = parseSpaceSpec("x mod 3; y mod 2");
  GenOptions opt;
  opt.gameDepth = 0;
  opt.formulaDepth = 1;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    // depth-2 games over assignments, tests, choice and dual
    std::function<GamePtr(uint64_t)> gen = [&](uint64_t depth) -> GamePtr {
      const uint64_t pick = rng.uniform(depth == 0 ? 2 : 4);
      switch (pick) {
        case 0:
          return gAssign(space.vars[rng.uniform(space.vars.size())],
                         tConst(Rat((long long)rng.uniform(2))));
        case 1:
          return gTest(genPropFormula(rng, space, 1));
        case 2:
          return gChoice(gen(depth - 1), gen(depth - 1));
        default:
          return gDual(gen(depth - 1));
      }
    };
    const GamePtr g = gen(2);
    const FormulaPtr gp = genPropFormula(rng, space, 1);
    const FormulaPtr gq = genPropFormula(rng, space, 1);
    const bool angel = seed % 2 == 0;
    const Verdict v = checkProof(deriveComplementarization(angel, g, gp, gq));
    CHECK_MESSAGE(v.accepted, "seed ", seed, " game ", print(g), " at ",
                  v.stepPath, ": ", v.reason);
  }

  // Repetition is outside the syntactic fragment.
  CHECK_THROWS_AS(
      deriveComplementarization(true, parseGame("(x:=1)*"), p, q), RuleError);
}
