// Command-line wiring: argument parsing, file IO and output formatting.

#include "dglsc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dglsc/calculus.hpp"
#include "dglsc/errors.hpp"
#include "dglsc/model.hpp"
#include "dglsc/oracle.hpp"
#include "dglsc/parser.hpp"
#include "dglsc/semantics.hpp"
#include "dglsc/transform.hpp"

namespace dglsc {

namespace {

uint64_t envFixpointBudget() {
  const char* v = std::getenv("DGLSC_FIXPOINT_BUDGET");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') {
    throw DglscError("DGLSC_FIXPOINT_BUDGET must be a nonnegative integer");
  }
  return n;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DglscError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void printSet(std::ostream& out, const StateSpace& space, const StateSet& s,
              bool pretty) {
  out << s.hexDump() << "\n";
  if (pretty) {
    s.forEach([&](uint64_t i) { out << "  " << showState(space, i) << "\n"; });
  }
}

// "x=1,y=-2" -> a full State in space variable order.
State parseStateSpec(const StateSpace& space, const std::string& text) {
  std::vector<std::optional<Rat>> vals(space.vars.size());
  Parser p(text);
  for (;;) {
    const std::string name = p.expectIdent("variable name");
    p.expect(Tok::Eq, "'='");
    const bool neg = p.accept(Tok::Minus);
    const Token num = p.expect(Tok::Number, "a number");
    const std::size_t i = space.varIndex(name);
    if (vals[i]) throw DglscError("state gives " + name + " twice");
    vals[i] = neg ? -num.num : num.num;
    if (!p.accept(Tok::Comma)) break;
  }
  p.expectEnd();
  State st;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!vals[i]) {
      throw DglscError("state does not assign variable " + space.vars[i]);
    }
    st.values.push_back(*vals[i]);
  }
  return st;
}

struct Args {
  // parse
  std::string parseFile, parseAs = "auto";
  // eval
  std::string modelPath, formulaText, atState;
  // regions
  std::string gameText, angelText, demonText, player = "both";
  bool zeroSum = false;
  // transform
  std::string op, inText;
  // check
  std::string proofPath, checkModelPath;
  // lemmas
  std::string lemmaId, seedsText, spaceSpec;
  bool serial = false;
  // shared
  bool pretty = false;
};

int runParse(const Args& a, std::ostream& out) {
  const std::string text = readFile(a.parseFile);
  if (a.parseAs == "sequent") {
    auto [ante, succ] = parseSequent(text);
    out << print(Sequent{std::move(ante), std::move(succ)}) << "\n";
    return 0;
  }
  std::optional<Category> cat;
  if (a.parseAs == "term") cat = Category::Term;
  if (a.parseAs == "game") cat = Category::Game;
  if (a.parseAs == "formula") cat = Category::Formula;
  const ParseResult r = parse(text, cat);
  std::visit([&](const auto& node) { out << print(node) << "\n"; }, r);
  return 0;
}

int runEval(const Args& a, std::ostream& out) {
  const Model model = loadModelFile(a.modelPath);
  const SemContext ctx = makeContext(model, envFixpointBudget());
  const FormulaPtr f = parseFormula(a.formulaText);
  const StateSet t = truthSet(ctx, f);
  if (!a.atState.empty()) {
    const State st = parseStateSpec(model.space, a.atState);
    out << (t.test(stateIndex(model.space, st)) ? "true" : "false") << "\n";
    return 0;
  }
  printSet(out, model.space, t, a.pretty);
  return 0;
}

int runRegions(const Args& a, std::ostream& out) {
  const Model model = loadModelFile(a.modelPath);
  const SemContext ctx = makeContext(model, envFixpointBudget());
  const GamePtr g = parseGame(a.gameText);
  const bool wantAngel = a.player == "angel" || a.player == "both";
  const bool wantDemon = a.player == "demon" || a.player == "both";

  const auto goal = [&](const std::string& text, const char* flag) {
    if (text.empty()) {
      throw DglscError(std::string("regions needs ") + flag +
                       " for the requested player");
    }
    return truthSet(ctx, parseFormula(text));
  };

  std::optional<StateSet> angel, demon;
  if (a.zeroSum) {
    if (wantAngel) angel = dglAngelRegion(ctx, g, goal(a.angelText, "--angel"));
    if (wantDemon) demon = dglDemonRegion(ctx, g, goal(a.demonText, "--demon"));
  } else {
    const StateSet x = goal(a.angelText, "--angel");
    const StateSet y = goal(a.demonText, "--demon");
    if (wantAngel) angel = angelRegion(ctx, g, x, y);
    if (wantDemon) demon = demonRegion(ctx, g, x, y);
  }
  if (a.player == "both") {
    out << "angel ";
    printSet(out, model.space, *angel, a.pretty);
    out << "demon ";
    printSet(out, model.space, *demon, a.pretty);
  } else {
    printSet(out, model.space, wantAngel ? *angel : *demon, a.pretty);
  }
  return 0;
}

int runTransform(const Args& a, std::ostream& out) {
  if (a.op == "systematize") {
    out << print(systematize(parseGame(a.inText))) << "\n";
    return 0;
  }
  const FormulaPtr f = parseFormula(a.inText);
  out << print(a.op == "complementarize" ? complementarize(f)
                                         : goalsToTests(f))
      << "\n";
  return 0;
}

int runCheck(const Args& a, std::ostream& out, std::ostream& err) {
  const ProofScript script = loadProofScript(a.proofPath);
  std::optional<Model> model;
  if (!a.checkModelPath.empty()) model = loadModelFile(a.checkModelPath);
  const Verdict v = checkProof(script, model ? &*model : nullptr);
  if (v.accepted) {
    out << "accepted\n";
    return 0;
  }
  err << "rejected at " << v.stepPath << ": " << v.reason << "\n";
  return 1;
}

int runLemmas(const Args& a, std::ostream& out) {
  const auto dots = a.seedsText.find("..");
  if (dots == std::string::npos) {
    throw DglscError("--seeds wants a range LO..HI, got " + a.seedsText);
  }
  uint64_t lo = 0, hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stoull(a.seedsText.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument("");
    const std::string hiText = a.seedsText.substr(dots + 2);
    hi = std::stoull(hiText, &used);
    if (used != hiText.size()) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw DglscError("--seeds wants a range LO..HI, got " + a.seedsText);
  }
  const StateSpace space = parseSpaceSpec(a.spaceSpec);
  const LemmaReport rep = checkLemma(
      a.lemmaId, lo, hi, space,
      a.serial ? ExecPolicy::Serial : ExecPolicy::Parallel);
  out << rep.lemmaId << ": " << rep.passed << "/" << rep.passed + rep.failed
      << " passed\n";
  for (const std::string& line : rep.lines) out << line << "\n";
  return rep.allPassed() ? 0 : 1;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"semi-competitive hybrid game logic over finite models"};
  app.require_subcommand(1);
  Args a;

  CLI::App* parseCmd =
      app.add_subcommand("parse", "Parse a file and print it back");
  parseCmd->add_option("file", a.parseFile, "input file")->required();
  parseCmd->add_option("--as", a.parseAs, "syntactic category")
      ->check(CLI::IsMember({"auto", "term", "game", "formula", "sequent"}));

  CLI::App* evalCmd =
      app.add_subcommand("eval", "Evaluate a formula over a model");
  evalCmd->add_option("--model", a.modelPath, "model file")->required();
  evalCmd->add_option("--formula", a.formulaText, "formula text")->required();
  evalCmd->add_option("--at", a.atState, "state, e.g. \"x=1,y=2\"");
  evalCmd->add_flag("--pretty", a.pretty, "list member states");

  CLI::App* regionsCmd =
      app.add_subcommand("regions", "Winning regions of a game");
  regionsCmd->add_option("--model", a.modelPath, "model file")->required();
  regionsCmd->add_option("--game", a.gameText, "game text")->required();
  regionsCmd->add_option("--angel", a.angelText, "angel goal formula");
  regionsCmd->add_option("--demon", a.demonText, "demon goal formula");
  regionsCmd->add_option("--player", a.player, "which region(s) to print")
      ->check(CLI::IsMember({"angel", "demon", "both"}));
  regionsCmd->add_flag("--zero-sum", a.zeroSum,
                       "classical single-goal regions");
  regionsCmd->add_flag("--pretty", a.pretty, "list member states");

  CLI::App* transformCmd =
      app.add_subcommand("transform", "Syntactic transforms");
  transformCmd->add_option("--op", a.op, "transform to apply")
      ->required()
      ->check(CLI::IsMember(
          {"systematize", "complementarize", "goals-to-tests"}));
  transformCmd->add_option("--in", a.inText, "input text")->required();

  CLI::App* checkCmd = app.add_subcommand("check", "Check a proof script");
  checkCmd->add_option("--proof", a.proofPath, "proof script file")
      ->required();
  checkCmd->add_option("--model", a.checkModelPath,
                       "model for leaf discharge (overrides the script)");

  CLI::App* lemmasCmd =
      app.add_subcommand("lemmas", "Replay a lemma over seeded instances");
  lemmasCmd->add_option("--id", a.lemmaId, "lemma identifier")->required();
  lemmasCmd->add_option("--seeds", a.seedsText, "seed range LO..HI")
      ->required();
  lemmasCmd->add_option("--space", a.spaceSpec,
                        "state space, e.g. \"x mod 3; y mod 2\"")
      ->required();
  lemmasCmd->add_flag("--serial", a.serial, "disable seed parallelism");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (parseCmd->parsed()) return runParse(a, out);
    if (evalCmd->parsed()) return runEval(a, out);
    if (regionsCmd->parsed()) return runRegions(a, out);
    if (transformCmd->parsed()) return runTransform(a, out);
    if (checkCmd->parsed()) return runCheck(a, out, err);
    if (lemmasCmd->parsed()) return runLemmas(a, out);
  } catch (const DglscError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}

}  // namespace

int cliMain(int argc, const char* const* argv) {
  return run(argc, argv, std::cout, std::cerr);
}

int cliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("dglsc");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const std::string& s : storage) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dglsc
