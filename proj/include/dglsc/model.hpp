// Finite models: state spaces, state sets, term evaluation and flow tables.
//
// A state space is an ordered list of variables, each ranging over a finite
// set of exact rationals. States are enumerated lexicographically with the
// first declared variable most significant, which fixes the meaning of a
// state index everywhere (bitmask dumps, flow tables, golden values).
//
// Two modes:
//   strict  — each variable has an explicit finite domain; an assignment or
//             Euler step leaving the domain is an error (assignments) or
//             truncates the trajectory (flows).
//   modular — each variable ranges over Z_m for a per-variable modulus m;
//             assignments and flow steps wrap around. Values must stay
//             integral; a fractional step is an error.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglsc/ast.hpp"
#include "dglsc/errors.hpp"
#include "dglsc/rational.hpp"

namespace dglsc {

// How per-state kernels run. Results are identical; Parallel uses OpenMP.
enum class ExecPolicy { Serial, Parallel };

// Largest supported state space (product of domain sizes).
inline constexpr uint64_t kMaxStates = uint64_t(1) << 20;

// ------------------------------------------------------------------ states

struct StateSpace {
  enum class Mode { Strict, Modular };

  Mode mode = Mode::Strict;
  std::vector<std::string> vars;
  std::vector<std::vector<Rat>> domains;  // enumeration order per variable
  std::vector<long long> moduli;          // modular mode: per-variable modulus
  std::vector<uint64_t> strides;          // strides[i]: weight of variable i
  uint64_t stateCount = 0;

  static StateSpace strict(
      std::vector<std::pair<std::string, std::vector<Rat>>> decls);
  static StateSpace modular(
      std::vector<std::pair<std::string, long long>> decls);

  std::size_t varIndex(const std::string& name) const;  // UnknownVariable
  // Position of `v` in variable i's domain, if any.
  std::optional<uint64_t> domIndex(std::size_t varIdx, const Rat& v) const;
  // The common modulus if modular and all moduli agree.
  std::optional<long long> uniformModulus() const;
};

// A full assignment of values, aligned with StateSpace::vars.
struct State {
  std::vector<Rat> values;
};

uint64_t stateIndex(const StateSpace& space, const State& s);
State stateAt(const StateSpace& space, uint64_t index);
// Allocation-free decoding into a caller-provided buffer.
void stateValuesAt(const StateSpace& space, uint64_t index,
                   std::vector<Rat>& out);
std::string showState(const StateSpace& space, uint64_t index);

// -------------------------------------------------------------- state sets

// A subset of the state space as a packed bitmask. Unused bits above
// `size()` are kept zero as a class invariant.
class StateSet {
 public:
  StateSet() = default;

  static StateSet empty(uint64_t n) { return StateSet(n, false); }
  static StateSet full(uint64_t n) { return StateSet(n, true); }

  uint64_t size() const { return n_; }
  uint64_t wordCount() const { return words_.size(); }
  uint64_t word(uint64_t w) const { return words_[w]; }
  void setWord(uint64_t w, uint64_t bits) { words_[w] = bits; }

  bool test(uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & uint64_t(1);
  }
  void set(uint64_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(uint64_t i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }

  uint64_t count() const;
  bool empty_set() const;

  StateSet operator|(const StateSet& o) const;
  StateSet operator&(const StateSet& o) const;
  StateSet operator-(const StateSet& o) const;  // set difference
  StateSet complement() const;

  bool operator==(const StateSet& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }
  bool operator!=(const StateSet& o) const { return !(*this == o); }
  bool subsetOf(const StateSet& o) const;

  // Calls fn(i) for every member state in increasing order.
  template <class Fn>
  void forEach(Fn&& fn) const {
    for (uint64_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        const uint64_t j = static_cast<uint64_t>(__builtin_ctzll(bits));
        fn(w * 64 + j);
        bits &= bits - 1;
      }
    }
  }
  std::vector<uint64_t> members() const;

  // Lowercase hex, ceil(n/4) digits, no prefix. Digit k (leftmost = 0)
  // covers states 4k..4k+3; state 4k+j contributes weight 2^j.
  std::string hexDump() const;
  static StateSet fromHex(const std::string& hex, uint64_t n);

  std::size_t hash() const;

 private:
  StateSet(uint64_t n, bool fill);
  void clearSlack();

  uint64_t n_ = 0;
  std::vector<uint64_t> words_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

// -------------------------------------------------------------- evaluation

// Exact term value in a state. In modular mode with a uniform modulus the
// result is reduced into [0, m); with mixed moduli the raw exact value is
// returned (reduction happens at assignment sites, which know the target
// variable).
Rat evalTerm(const StateSpace& space, const TermPtr& t, const State& s);
// Internal fast path over a decoded value buffer; never reduces.
Rat evalTermOn(const StateSpace& space, const TermPtr& t,
               const std::vector<Rat>& values);

// Truth set of an atomic formula (true / false / e>=e only).
StateSet atomicTruthSet(const StateSpace& space, const FormulaPtr& f,
                        ExecPolicy pol = ExecPolicy::Parallel);

// ------------------------------------------------------------------- flows

struct FlowTrajectory {
  std::vector<uint64_t> states;  // visited state indices; element 0 = start
  Rat stepSize;                  // Euler step; 0 for explicit tables
  bool fromEuler = true;
};

struct FlowTable {
  std::string key;                       // flowKey of the ODE
  std::vector<FlowTrajectory> byState;   // indexed by start state
};

// Canonical lookup key for {x'=e & Q}: "x'=<printed e>". The constraint is
// intentionally not part of the key — it is enforced at evaluation time, so
// one table serves every constraint over the same dynamics.
std::string flowKey(const std::string& var, const TermPtr& derivative);

// Forward-Euler discretisation: from each state, horizon steps of size
// `step`. Strict mode truncates when the next value leaves the domain;
// modular mode wraps (NonIntegerStepInModularMode if a step is fractional).
// The derivative may mention other variables; they stay frozen.
FlowTable buildEulerFlow(const StateSpace& space, const std::string& var,
                         const TermPtr& derivative, const Rat& step,
                         uint64_t horizon,
                         ExecPolicy pol = ExecPolicy::Parallel);

// ------------------------------------------------------------------- model

struct Model {
  StateSpace space;
  std::map<std::string, FlowTable> flows;
};

// Model file format (line oriented, '#' comments):
//   mode strict                      (default)
//   mode modular <m>                 (default modulus for plain `var x`)
//   var x in {0, 1, 2}               (strict mode)
//   var x mod 5                      (modular mode)
//   var x                            (modular mode, file-level modulus)
//   flow {x'=e} euler step=1 horizon=10
//   flow {x'=e} explicit: (x=0,y=1) -> (x=1,y=1) (x=2,y=1)
// Explicit trajectories are [start] ++ listed states; start states without
// a line default to the singleton trajectory [start].
Model parseModelText(const std::string& text);
Model loadModelFile(const std::string& path);

// Compact space spec for the CLI/oracles: "x in {0,1}; y in {4}" (strict)
// or "x mod 3; y mod 2" (modular). Forms cannot be mixed.
StateSpace parseSpaceSpec(const std::string& spec);

}  // namespace dglsc
