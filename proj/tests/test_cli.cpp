// The command-line surface, driven in-process through cliMain.
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dglsc/cli.hpp"

using namespace dglsc;

namespace {

std::string corpus(const std::string& name) {
  return std::string(DGLSC_CORPUS_DIR) + "/" + name;
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cliMain(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("parse subcommand") {
  CliResult r = run({"parse", "--text", "<x:=1>(x>=1, x>=0)"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "<x:=1>(x>=1, x>=0)"));

  r = run({"parse", "--text", "x:=1 ++ x:=0", "--as", "game"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "x:=1 ++ x:=0"));

  r = run({"parse", "--text", "x=0, y>=1 |- x>=y", "--as", "sequent"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "|-"));

  r = run({"parse", "--text", "x >=", "--as", "formula"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));

  // Category mismatch.
  r = run({"parse", "--text", "x:=1", "--as", "term"});
  CHECK(r.code == 2);
}

TEST_CASE("eval subcommand") {
  CliResult r =
      run({"eval", "--model", corpus("m2.model"), "--formula", "x>=0"});
  CHECK(r.code == 0);
  // First line is the hex mask over the two states.
  CHECK(r.out.substr(0, 2) == "3\n");
  CHECK(contains(r.out, "(x=0)"));
  CHECK(contains(r.out, "(x=1)"));

  r = run({"eval", "--model", corpus("m2.model"), "--formula", "x>=1", "--at",
           "x=1"});
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
  r = run({"eval", "--model", corpus("m2.model"), "--formula", "x>=1", "--at",
           "x=0"});
  CHECK(r.code == 0);
  CHECK(r.out == "false\n");

  r = run({"eval", "--model", corpus("m2.model"), "--formula", "x>=1", "--at",
           "x=7"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));

  r = run({"eval", "--model", corpus("bad.model"), "--formula", "x>=0"});
  CHECK(r.code == 2);

  r = run({"eval", "--model", corpus("juice.model"), "--formula",
           "<{t'=1}; {o'=1}^d>(o=3, t=5)", "--at", "o=0,t=0"});
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
}

TEST_CASE("regions subcommand") {
  const std::vector<std::string> base = {
      "regions",  "--model", corpus("juice.model"), "--game",
      "{t'=1}; {o'=1}^d", "--angel", "o=3", "--demon", "t=5"};

  std::vector<std::string> angel = base;
  angel.push_back("--player");
  angel.push_back("angel");
  CliResult r = run(angel);
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 10) == "ffffff000\n");

  r = run(base);  // default: both players, labelled lines
  CHECK(r.code == 0);
  CHECK(contains(r.out, "angel ffffff000"));
  CHECK(contains(r.out, "demon "));

  // Zero-sum query: only one goal needed.
  r = run({"regions", "--model", corpus("juice.model"), "--game",
           "{t'=1}; {o'=1}^d", "--angel", "o=3", "--zero-sum", "--player",
           "angel"});
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 10) == "ffffff000\n");

  // Two-goal regions need both goals.
  r = run({"regions", "--model", corpus("juice.model"), "--game", "x:=1",
           "--angel", "o=3", "--player", "angel"});
  CHECK(r.code == 2);
}

TEST_CASE("transform subcommand") {
  CliResult r = run({"transform", "--op", "systematize", "--game",
                     "(x:=1 ++ (x:=2)^d)*"});
  CHECK(r.code == 0);
  CHECK(r.out == "(x:=1 ++ x:=2)*\n");

  r = run({"transform", "--op", "complementarize", "--formula",
           "<x:=1>(x>=1, x>=0)"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "<x:=1>(x>=1 & x>=0, !(x>=1 & x>=0))"));

  r = run({"transform", "--op", "goals-to-tests", "--formula",
           "<x:=1>(x>=1, x>=0)"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "?x>=1"));
  CHECK(contains(r.out, "(?x>=0)^d"));

  r = run({"transform", "--op", "no-such-op", "--game", "x:=1"});
  CHECK(r.code == 2);
}

TEST_CASE("check subcommand") {
  CliResult r = run({"check", "--script", corpus("juice.proof")});
  CHECK(r.code == 0);
  CHECK(r.out == "accepted\n");

  // An explicit model override wins over the script's model line.
  r = run({"check", "--script", corpus("juice.proof"), "--model",
           corpus("juice.model")});
  CHECK(r.code == 0);

  r = run({"check", "--script", corpus("bad.proof")});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "rejected"));
  CHECK(contains(r.err, "choiceA"));

  r = run({"check", "--script", corpus("no-such.proof")});
  CHECK(r.code == 2);
}

TEST_CASE("lemmas subcommand") {
  CliResult r = run({"lemmas", "--id", "L3", "--seeds", "1..10", "--space",
                     "x mod 3; y mod 2"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "L3: 10/10 passed"));

  r = run({"lemmas", "--id", "axiom-soundness(det)", "--seeds", "5..5",
           "--space", "x mod 3; y mod 2", "--serial"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1/1 passed"));

  r = run({"lemmas", "--id", "no-such", "--seeds", "1..5", "--space",
           "x mod 2"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));

  r = run({"lemmas", "--id", "L3", "--seeds", "10..1", "--space", "x mod 2"});
  CHECK(r.code == 2);

  r = run({"lemmas", "--id", "L3", "--seeds", "banana", "--space", "x mod 2"});
  CHECK(r.code == 2);
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"regions"}).code == 2);          // missing required flags
  CHECK(run({"frobnicate"}).code == 2);       // unknown subcommand
  CHECK(run({"parse"}).code == 2);            // missing --text
  CHECK(run({"--help"}).code == 0);           // help is a success
}

TEST_CASE("fixpoint budget env var") {
  setenv("DGLSC_FIXPOINT_BUDGET", "1", 1);
  CliResult r = run({"regions", "--model", corpus("m2.model"), "--game",
                     "(x:=x+1)*", "--angel", "x=0", "--demon", "x=1",
                     "--player", "angel"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));

  setenv("DGLSC_FIXPOINT_BUDGET", "not-a-number", 1);
  r = run({"eval", "--model", corpus("m2.model"), "--formula", "x>=0"});
  CHECK(r.code == 2);

  unsetenv("DGLSC_FIXPOINT_BUDGET");
  r = run({"regions", "--model", corpus("m2.model"), "--game", "(x:=x+1)*",
           "--angel", "x=0", "--demon", "x=1", "--player", "angel"});
  CHECK(r.code == 0);
}
