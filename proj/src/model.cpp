#include "dglsc/model.hpp"

#include <fstream>
#include <sstream>

#include "dglsc/parser.hpp"
#include "kernels.hpp"

namespace dglsc {

// ------------------------------------------------------------- state space

static void finishSpace(StateSpace& s) {
  const std::size_t k = s.vars.size();
  if (k == 0) throw ModelError("state space has no variables");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (s.vars[i] == s.vars[j]) {
        throw ModelError("variable '" + s.vars[i] + "' declared twice");
      }
    }
    if (s.domains[i].empty()) {
      throw ModelError("variable '" + s.vars[i] + "' has an empty domain");
    }
    for (std::size_t a = 0; a < s.domains[i].size(); ++a) {
      for (std::size_t b = a + 1; b < s.domains[i].size(); ++b) {
        if (s.domains[i][a] == s.domains[i][b]) {
          throw ModelError("variable '" + s.vars[i] +
                           "' lists value " + showRat(s.domains[i][a]) +
                           " twice");
        }
      }
    }
  }
  s.strides.assign(k, 1);
  uint64_t count = 1;
  for (std::size_t i = k; i-- > 0;) {
    s.strides[i] = count;
    const uint64_t sz = s.domains[i].size();
    if (count > kMaxStates / sz) {
      throw SpaceTooLarge("state space exceeds " +
                          std::to_string(kMaxStates) + " states");
    }
    count *= sz;
  }
  s.stateCount = count;
}

StateSpace StateSpace::strict(
    std::vector<std::pair<std::string, std::vector<Rat>>> decls) {
  StateSpace s;
  s.mode = Mode::Strict;
  for (auto& [name, dom] : decls) {
    s.vars.push_back(std::move(name));
    s.domains.push_back(std::move(dom));
  }
  finishSpace(s);
  return s;
}

StateSpace StateSpace::modular(
    std::vector<std::pair<std::string, long long>> decls) {
  StateSpace s;
  s.mode = Mode::Modular;
  for (auto& [name, m] : decls) {
    if (m <= 0) {
      throw ModelError("modulus for '" + name + "' must be positive");
    }
    s.vars.push_back(std::move(name));
    s.moduli.push_back(m);
    std::vector<Rat> dom;
    dom.reserve(static_cast<std::size_t>(m));
    for (long long v = 0; v < m; ++v) dom.emplace_back(v);
    s.domains.push_back(std::move(dom));
  }
  finishSpace(s);
  return s;
}

std::size_t StateSpace::varIndex(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == name) return i;
  }
  throw UnknownVariable(name);
}

std::optional<uint64_t> StateSpace::domIndex(std::size_t varIdx,
                                             const Rat& v) const {
  if (mode == Mode::Modular) {
    if (!isInteger(v)) return std::nullopt;
    const long long num = v.numerator();
    if (num < 0 || num >= moduli[varIdx]) return std::nullopt;
    return static_cast<uint64_t>(num);
  }
  const std::vector<Rat>& dom = domains[varIdx];
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom[i] == v) return static_cast<uint64_t>(i);
  }
  return std::nullopt;
}

std::optional<long long> StateSpace::uniformModulus() const {
  if (mode != Mode::Modular || moduli.empty()) return std::nullopt;
  for (long long m : moduli) {
    if (m != moduli[0]) return std::nullopt;
  }
  return moduli[0];
}

uint64_t stateIndex(const StateSpace& space, const State& s) {
  if (s.values.size() != space.vars.size()) {
    throw ModelError("state has " + std::to_string(s.values.size()) +
                     " values, space has " +
                     std::to_string(space.vars.size()) + " variables");
  }
  uint64_t idx = 0;
  for (std::size_t i = 0; i < space.vars.size(); ++i) {
    std::optional<uint64_t> d = space.domIndex(i, s.values[i]);
    if (!d) {
      throw ModelError("value " + showRat(s.values[i]) + " for '" +
                       space.vars[i] + "' is outside its domain");
    }
    idx += *d * space.strides[i];
  }
  return idx;
}

void stateValuesAt(const StateSpace& space, uint64_t index,
                   std::vector<Rat>& out) {
  out.resize(space.vars.size());
  for (std::size_t i = 0; i < space.vars.size(); ++i) {
    const uint64_t d = (index / space.strides[i]) % space.domains[i].size();
    out[i] = space.domains[i][d];
  }
}

State stateAt(const StateSpace& space, uint64_t index) {
  State s;
  stateValuesAt(space, index, s.values);
  return s;
}

std::string showState(const StateSpace& space, uint64_t index) {
  std::vector<Rat> vals;
  stateValuesAt(space, index, vals);
  std::string out = "(";
  for (std::size_t i = 0; i < space.vars.size(); ++i) {
    if (i) out += ", ";
    out += space.vars[i];
    out += '=';
    out += showRat(vals[i]);
  }
  out += ')';
  return out;
}

// -------------------------------------------------------------- state sets

StateSet::StateSet(uint64_t n, bool fill)
    : n_(n), words_((n + 63) / 64, fill ? ~uint64_t(0) : uint64_t(0)) {
  if (fill) clearSlack();
}

void StateSet::clearSlack() {
  if (n_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (uint64_t(1) << (n_ % 64)) - 1;
  }
}

uint64_t StateSet::count() const {
  uint64_t c = 0;
  for (uint64_t w : words_) c += static_cast<uint64_t>(__builtin_popcountll(w));
  return c;
}

bool StateSet::empty_set() const {
  for (uint64_t w : words_) {
    if (w) return false;
  }
  return true;
}

static void checkSameUniverse(const StateSet& a, const StateSet& b) {
  if (a.size() != b.size()) {
    throw ModelError("state sets over different spaces (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + " states)");
  }
}

StateSet StateSet::operator|(const StateSet& o) const {
  checkSameUniverse(*this, o);
  StateSet r = *this;
  for (uint64_t w = 0; w < r.words_.size(); ++w) r.words_[w] |= o.words_[w];
  return r;
}

StateSet StateSet::operator&(const StateSet& o) const {
  checkSameUniverse(*this, o);
  StateSet r = *this;
  for (uint64_t w = 0; w < r.words_.size(); ++w) r.words_[w] &= o.words_[w];
  return r;
}

StateSet StateSet::operator-(const StateSet& o) const {
  checkSameUniverse(*this, o);
  StateSet r = *this;
  for (uint64_t w = 0; w < r.words_.size(); ++w) r.words_[w] &= ~o.words_[w];
  return r;
}

StateSet StateSet::complement() const {
  StateSet r = *this;
  for (uint64_t& w : r.words_) w = ~w;
  r.clearSlack();
  return r;
}

bool StateSet::subsetOf(const StateSet& o) const {
  checkSameUniverse(*this, o);
  for (uint64_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & ~o.words_[w]) return false;
  }
  return true;
}

std::vector<uint64_t> StateSet::members() const {
  std::vector<uint64_t> out;
  out.reserve(count());
  forEach([&](uint64_t i) { out.push_back(i); });
  return out;
}

std::string StateSet::hexDump() const {
  const uint64_t digits = (n_ + 3) / 4;
  std::string out;
  out.reserve(digits);
  for (uint64_t k = 0; k < digits; ++k) {
    const uint64_t nibble = (words_[(4 * k) >> 6] >> ((4 * k) & 63)) & 0xF;
    out += "0123456789abcdef"[nibble];
  }
  return out;
}

StateSet StateSet::fromHex(const std::string& hex, uint64_t n) {
  const uint64_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw ModelError("hex mask has " + std::to_string(hex.size()) +
                     " digits, expected " + std::to_string(digits));
  }
  StateSet s = StateSet::empty(n);
  for (uint64_t k = 0; k < digits; ++k) {
    const char c = hex[k];
    uint64_t v;
    if (c >= '0' && c <= '9') {
      v = static_cast<uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<uint64_t>(c - 'A' + 10);
    } else {
      throw ModelError(std::string("bad hex digit '") + c + "'");
    }
    s.words_[(4 * k) >> 6] |= v << ((4 * k) & 63);
  }
  s.clearSlack();
  for (uint64_t i = n; i < digits * 4 && i < s.words_.size() * 64; ++i) {
    if (s.test(i)) {
      throw ModelError("hex mask sets state " + std::to_string(i) +
                       " beyond the space size " + std::to_string(n));
    }
  }
  return s;
}

std::size_t StateSet::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (uint64_t w : words_) {
    h ^= static_cast<std::size_t>(w);
    h *= 1099511628211ull;
  }
  return h ^ static_cast<std::size_t>(n_);
}

// -------------------------------------------------------------- evaluation

Rat evalTermOn(const StateSpace& space, const TermPtr& t,
               const std::vector<Rat>& values) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return values[space.varIndex(t->name)];
    case Term::Kind::Constant:
      return t->value;
    case Term::Kind::Add:
      return evalTermOn(space, t->l, values) + evalTermOn(space, t->r, values);
    case Term::Kind::Sub:
      return evalTermOn(space, t->l, values) - evalTermOn(space, t->r, values);
    case Term::Kind::Mul:
      return evalTermOn(space, t->l, values) * evalTermOn(space, t->r, values);
    case Term::Kind::Neg:
      return -evalTermOn(space, t->l, values);
  }
  throw ModelError("unreachable term kind");
}

Rat evalTerm(const StateSpace& space, const TermPtr& t, const State& s) {
  if (s.values.size() != space.vars.size()) {
    throw ModelError("state shape does not match space");
  }
  Rat v = evalTermOn(space, t, s.values);
  if (space.mode == StateSpace::Mode::Modular) {
    if (std::optional<long long> m = space.uniformModulus()) {
      if (!isInteger(v)) {
        throw NonIntegerStepInModularMode(
            "term value " + showRat(v) + " is not an integer in modular mode");
      }
      return modReduce(v, *m);
    }
  }
  return v;
}

StateSet atomicTruthSet(const StateSpace& space, const FormulaPtr& f,
                        ExecPolicy pol) {
  switch (f->kind) {
    case Formula::Kind::True:
      return StateSet::full(space.stateCount);
    case Formula::Kind::False:
      return StateSet::empty(space.stateCount);
    case Formula::Kind::Geq:
      break;
    default:
      throw ModelError("atomicTruthSet expects true/false/>=, got " +
                       print(f));
  }
  return detail::buildSet(pol, space.stateCount, [&](uint64_t i) {
    static thread_local std::vector<Rat> vals;
    stateValuesAt(space, i, vals);
    return evalTermOn(space, f->tl, vals) >= evalTermOn(space, f->tr, vals);
  });
}

// ------------------------------------------------------------------- flows

std::string flowKey(const std::string& var, const TermPtr& derivative) {
  return var + "'=" + print(derivative);
}

FlowTable buildEulerFlow(const StateSpace& space, const std::string& var,
                         const TermPtr& derivative, const Rat& step,
                         uint64_t horizon, ExecPolicy pol) {
  if (step <= Rat(0)) throw ModelError("Euler step must be positive");
  const std::size_t x = space.varIndex(var);
  for (const std::string& v : varsOf(derivative)) {
    space.varIndex(v);  // throws UnknownVariable on junk
  }
  FlowTable table;
  table.key = flowKey(var, derivative);
  table.byState.resize(space.stateCount);
  detail::forEachIndex(pol, space.stateCount, [&](uint64_t start) {
    static thread_local std::vector<Rat> vals;
    stateValuesAt(space, start, vals);
    FlowTrajectory traj;
    traj.stepSize = step;
    traj.fromEuler = true;
    traj.states.push_back(start);
    uint64_t idx = start;
    for (uint64_t k = 0; k < horizon; ++k) {
      Rat nextVal = vals[x] + step * evalTermOn(space, derivative, vals);
      if (space.mode == StateSpace::Mode::Modular) {
        if (!isInteger(nextVal)) {
          throw NonIntegerStepInModularMode(
              "Euler step from " + showState(space, idx) + " moves '" + var +
              "' to " + showRat(nextVal));
        }
        nextVal = modReduce(nextVal, space.moduli[x]);
      }
      std::optional<uint64_t> d = space.domIndex(x, nextVal);
      if (!d) break;  // strict mode: truncate at the domain edge
      const uint64_t oldD = (idx / space.strides[x]) % space.domains[x].size();
      idx = idx - oldD * space.strides[x] + *d * space.strides[x];
      vals[x] = nextVal;
      traj.states.push_back(idx);
    }
    table.byState[start] = std::move(traj);
  });
  return table;
}

// ------------------------------------------------------------- model files

namespace {

Rat parseSignedRat(Parser& p) {
  bool neg = p.accept(Tok::Minus);
  Token t = p.expect(Tok::Number, "rational value");
  return neg ? -t.num : t.num;
}

// `(x=0, y=1/2)` — all space variables required, any order.
State parseStateTuple(Parser& p, const StateSpace& space) {
  p.expect(Tok::LParen, "state tuple");
  std::vector<bool> seen(space.vars.size(), false);
  State s;
  s.values.resize(space.vars.size());
  for (;;) {
    std::string name = p.expectIdent("variable name in state tuple");
    const std::size_t i = space.varIndex(name);
    if (seen[i]) p.fail("variable '" + name + "' given twice in state tuple");
    p.expect(Tok::Eq, "'=' in state tuple");
    s.values[i] = parseSignedRat(p);
    seen[i] = true;
    if (p.accept(Tok::Comma)) continue;
    break;
  }
  p.expect(Tok::RParen, "closing ')' of state tuple");
  for (std::size_t i = 0; i < space.vars.size(); ++i) {
    if (!seen[i]) {
      p.fail("state tuple missing variable '" + space.vars[i] + "'");
    }
  }
  return s;
}

struct PendingSpace {
  bool modeSet = false;
  StateSpace::Mode mode = StateSpace::Mode::Strict;
  long long defaultModulus = 0;  // 0 = none
  std::vector<std::pair<std::string, std::vector<Rat>>> strictDecls;
  std::vector<std::pair<std::string, long long>> modularDecls;

  StateSpace build() const {
    if (mode == StateSpace::Mode::Strict) {
      return StateSpace::strict(strictDecls);
    }
    return StateSpace::modular(modularDecls);
  }
};

}  // namespace

Model parseModelText(const std::string& text) {
  Model model;
  PendingSpace pending;
  bool spaceBuilt = false;

  std::istringstream in(text);
  std::string lineText;
  std::size_t lineNo = 0;
  while (std::getline(in, lineText)) {
    ++lineNo;
    Parser p(lineText, lineNo);
    if (p.atEnd()) continue;  // blank or comment

    if (p.acceptIdent("mode")) {
      if (!pending.strictDecls.empty() || !pending.modularDecls.empty() ||
          spaceBuilt) {
        p.fail("'mode' must precede all 'var' declarations");
      }
      if (p.acceptIdent("strict")) {
        pending.mode = StateSpace::Mode::Strict;
      } else if (p.acceptIdent("modular")) {
        pending.mode = StateSpace::Mode::Modular;
        if (p.peek().kind == Tok::Number) {
          pending.defaultModulus = p.next().num.numerator();
        }
      } else {
        p.fail("expected 'strict' or 'modular' after 'mode'");
      }
      pending.modeSet = true;
      p.expectEnd();
      continue;
    }

    if (p.acceptIdent("var")) {
      if (spaceBuilt) p.fail("'var' lines must precede 'flow' lines");
      std::string name = p.expectIdent("variable name");
      if (p.acceptIdent("in")) {
        if (pending.mode != StateSpace::Mode::Strict) {
          p.fail("'var " + name + " in {...}' requires strict mode");
        }
        p.expect(Tok::LBrace, "'{' opening the domain");
        std::vector<Rat> dom;
        if (p.peek().kind != Tok::RBrace) {
          dom.push_back(parseSignedRat(p));
          while (p.accept(Tok::Comma)) dom.push_back(parseSignedRat(p));
        }
        p.expect(Tok::RBrace, "'}' closing the domain");
        pending.strictDecls.emplace_back(std::move(name), std::move(dom));
      } else if (p.acceptIdent("mod")) {
        if (pending.mode != StateSpace::Mode::Modular) {
          p.fail("'var " + name + " mod m' requires 'mode modular'");
        }
        Token m = p.expect(Tok::Number, "modulus");
        pending.modularDecls.emplace_back(std::move(name),
                                          m.num.numerator());
      } else if (p.atEnd()) {
        if (pending.mode != StateSpace::Mode::Modular ||
            pending.defaultModulus <= 0) {
          p.fail("plain 'var " + name +
                 "' needs 'mode modular <m>' with a default modulus");
        }
        pending.modularDecls.emplace_back(std::move(name),
                                          pending.defaultModulus);
      } else {
        p.fail("expected 'in {...}' or 'mod m' after variable name");
      }
      p.expectEnd();
      continue;
    }

    if (p.acceptIdent("flow")) {
      if (!spaceBuilt) {
        model.space = pending.build();
        spaceBuilt = true;
      }
      GamePtr g = p.game();
      if (g->kind != HybridGame::Kind::Continuous) {
        p.fail("'flow' expects a differential equation {x'=e}");
      }
      if (g->fml->kind != Formula::Kind::True) {
        p.fail("flow declarations carry no evolution constraint");
      }
      const std::string key = flowKey(g->var, g->term);
      if (p.acceptIdent("euler")) {
        std::string f1 = p.expectIdent("'step'");
        if (f1 != "step") p.fail("expected 'step', got '" + f1 + "'");
        p.expect(Tok::Eq, "'=' after step");
        Rat step = parseSignedRat(p);
        std::string f2 = p.expectIdent("'horizon'");
        if (f2 != "horizon") p.fail("expected 'horizon', got '" + f2 + "'");
        p.expect(Tok::Eq, "'=' after horizon");
        Token h = p.expect(Tok::Number, "horizon");
        if (!isInteger(h.num) || h.num.numerator() < 0) {
          p.fail("horizon must be a nonnegative integer");
        }
        p.expectEnd();
        model.flows[key] =
            buildEulerFlow(model.space, g->var, g->term, step,
                           static_cast<uint64_t>(h.num.numerator()));
      } else if (p.acceptIdent("explicit")) {
        p.expect(Tok::Colon, "':' after explicit");
        auto it = model.flows.find(key);
        if (it == model.flows.end()) {
          FlowTable table;
          table.key = key;
          table.byState.resize(model.space.stateCount);
          for (uint64_t i = 0; i < model.space.stateCount; ++i) {
            table.byState[i].states = {i};
            table.byState[i].stepSize = Rat(0);
            table.byState[i].fromEuler = false;
          }
          it = model.flows.emplace(key, std::move(table)).first;
        }
        const uint64_t start =
            stateIndex(model.space, parseStateTuple(p, model.space));
        p.expect(Tok::Arrow, "'->' after the start state");
        FlowTrajectory traj;
        traj.stepSize = Rat(0);
        traj.fromEuler = false;
        traj.states.push_back(start);
        while (!p.atEnd()) {
          traj.states.push_back(
              stateIndex(model.space, parseStateTuple(p, model.space)));
        }
        it->second.byState[start] = std::move(traj);
      } else {
        p.fail("expected 'euler' or 'explicit:' in flow declaration");
      }
      continue;
    }

    p.fail("expected 'mode', 'var' or 'flow' at start of line");
  }

  if (!spaceBuilt) model.space = pending.build();
  return model;
}

Model loadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parseModelText(buf.str());
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line, e.column, path + ": " + std::string(e.what()));
  }
}

StateSpace parseSpaceSpec(const std::string& spec) {
  Parser p(spec);
  std::vector<std::pair<std::string, std::vector<Rat>>> strictDecls;
  std::vector<std::pair<std::string, long long>> modularDecls;
  for (;;) {
    std::string name = p.expectIdent("variable name");
    if (p.acceptIdent("mod")) {
      if (!strictDecls.empty()) p.fail("cannot mix 'mod' and 'in' variables");
      Token m = p.expect(Tok::Number, "modulus");
      modularDecls.emplace_back(std::move(name), m.num.numerator());
    } else if (p.acceptIdent("in")) {
      if (!modularDecls.empty()) p.fail("cannot mix 'mod' and 'in' variables");
      p.expect(Tok::LBrace, "'{' opening the domain");
      std::vector<Rat> dom;
      if (p.peek().kind != Tok::RBrace) {
        dom.push_back(parseSignedRat(p));
        while (p.accept(Tok::Comma)) dom.push_back(parseSignedRat(p));
      }
      p.expect(Tok::RBrace, "'}' closing the domain");
      strictDecls.emplace_back(std::move(name), std::move(dom));
    } else {
      p.fail("expected 'mod m' or 'in {...}' after variable name");
    }
    if (p.accept(Tok::Semi)) continue;
    p.expectEnd();
    break;
  }
  if (!modularDecls.empty()) return StateSpace::modular(modularDecls);
  return StateSpace::strict(strictDecls);
}

}  // namespace dglsc
