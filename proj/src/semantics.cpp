#include "dglsc/semantics.hpp"

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kernels.hpp"

namespace dglsc {

SemContext makeContext(const Model& model, uint64_t fixpointBudget,
                       ExecPolicy policy) {
  SemContext ctx;
  ctx.model = &model;
  ctx.fixpointBudget = fixpointBudget;
  ctx.policy = policy;
  return ctx;
}

namespace {

// Memo key for region computations. Games are immutable shared trees, so a
// raw node pointer identifies the subgame for the lifetime of a call.
struct RegionKey {
  const HybridGame* g;
  int tag;  // 0 angel, 1 demon, 2 zero-sum angel, 3 cooperative core
  StateSet X, Y;

  bool operator==(const RegionKey& o) const {
    return g == o.g && tag == o.tag && X == o.X && Y == o.Y;
  }
};

struct RegionKeyHash {
  std::size_t operator()(const RegionKey& k) const {
    std::size_t h = std::hash<const void*>()(k.g);
    h = h * 1099511628211ull + static_cast<std::size_t>(k.tag);
    h = h * 1099511628211ull + k.X.hash();
    h = h * 1099511628211ull + k.Y.hash();
    return h;
  }
};

class Evaluator {
 public:
  explicit Evaluator(const SemContext& ctx)
      : ctx_(ctx),
        space_(ctx.model->space),
        n_(space_.stateCount),
        budget_(ctx.fixpointBudget ? ctx.fixpointBudget : n_ + 1) {}

  StateSet truth(const FormulaPtr& f) {
    auto it = truthMemo_.find(f.get());
    if (it != truthMemo_.end()) return it->second;
    StateSet r = truthUncached(f);
    truthMemo_.emplace(f.get(), r);
    return r;
  }

  StateSet angel(const GamePtr& g, const StateSet& X, const StateSet& Y) {
    RegionKey key{g.get(), 0, X, Y};
    auto it = regionMemo_.find(key);
    if (it != regionMemo_.end()) return it->second;
    StateSet r = angelUncached(g, X, Y);
    regionMemo_.emplace(std::move(key), r);
    return r;
  }

  StateSet demon(const GamePtr& g, const StateSet& X, const StateSet& Y) {
    RegionKey key{g.get(), 1, X, Y};
    auto it = regionMemo_.find(key);
    if (it != regionMemo_.end()) return it->second;
    StateSet r = demonUncached(g, X, Y);
    regionMemo_.emplace(std::move(key), r);
    return r;
  }

  StateSet dglAngel(const GamePtr& g, const StateSet& X) {
    RegionKey key{g.get(), 2, X, StateSet()};
    auto it = regionMemo_.find(key);
    if (it != regionMemo_.end()) return it->second;
    StateSet r = dglAngelUncached(g, X);
    regionMemo_.emplace(std::move(key), r);
    return r;
  }

 private:
  // ---------------------------------------------------------------- truth

  StateSet truthUncached(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::True:
        return StateSet::full(n_);
      case Formula::Kind::False:
        return StateSet::empty(n_);
      case Formula::Kind::Geq:
        return atomicTruthSet(space_, f, ctx_.policy);
      case Formula::Kind::Not:
        return truth(f->l).complement();
      case Formula::Kind::And:
        return truth(f->l) & truth(f->r);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        const StateSet body = truth(f->l);
        const std::size_t v = space_.varIndex(f->var);
        const uint64_t stride = space_.strides[v];
        const uint64_t domSize = space_.domains[v].size();
        const bool isForall = f->kind == Formula::Kind::Forall;
        return detail::buildSet(ctx_.policy, n_, [&](uint64_t i) {
          const uint64_t cur = (i / stride) % domSize;
          const uint64_t base = i - cur * stride;
          for (uint64_t d = 0; d < domSize; ++d) {
            const bool inBody = body.test(base + d * stride);
            if (isForall && !inBody) return false;
            if (!isForall && inBody) return true;
          }
          return isForall;
        });
      }
      case Formula::Kind::AngelModal:
        return angel(f->game, truth(f->l), truth(f->r));
      case Formula::Kind::DemonModal:
        return demon(f->game, truth(f->l), truth(f->r));
    }
    throw ModelError("unreachable formula kind");
  }

  // ------------------------------------------------------- shared helpers

  const FlowTable& flowFor(const HybridGame& g) {
    const std::string key = flowKey(g.var, g.term);
    auto it = ctx_.model->flows.find(key);
    if (it == ctx_.model->flows.end()) throw MissingFlowTable(key);
    if (it->second.byState.size() != n_) {
      throw ModelError("flow table '" + key +
                       "' was built for a different state space");
    }
    return it->second;
  }

  // Per start state, the index of the last admissible trajectory position
  // under the game's evolution constraint (-1 when even the start violates
  // it). Admissibility is prefix-closed by construction.
  const std::vector<int64_t>& admissiblePrefix(const GamePtr& g) {
    auto it = admissibleMemo_.find(g.get());
    if (it != admissibleMemo_.end()) return it->second;
    const FlowTable& table = flowFor(*g);
    const StateSet constraint = truth(g->fml);
    std::vector<int64_t> last(n_, -1);
    detail::forEachIndex(ctx_.policy, n_, [&](uint64_t i) {
      const std::vector<uint64_t>& traj = table.byState[i].states;
      int64_t L = -1;
      for (std::size_t k = 0; k < traj.size(); ++k) {
        if (!constraint.test(traj[k])) break;
        L = static_cast<int64_t>(k);
      }
      last[i] = L;
    });
    return admissibleMemo_.emplace(g.get(), std::move(last)).first->second;
  }

  // States from which executing x:=e lands in `target`.
  StateSet assignPreimage(const HybridGame& g, const StateSet& target) {
    const std::size_t x = space_.varIndex(g.var);
    const uint64_t stride = space_.strides[x];
    const uint64_t domSize = space_.domains[x].size();
    return detail::buildSet(ctx_.policy, n_, [&](uint64_t i) {
      static thread_local std::vector<Rat> vals;
      stateValuesAt(space_, i, vals);
      Rat v = evalTermOn(space_, g.term, vals);
      if (space_.mode == StateSpace::Mode::Modular) {
        if (!isInteger(v)) {
          throw NonIntegerStepInModularMode(
              "assignment " + g.var + ":=" + print(g.term) + " yields " +
              showRat(v) + " at " + showState(space_, i));
        }
        v = modReduce(v, space_.moduli[x]);
      }
      const std::optional<uint64_t> d = space_.domIndex(x, v);
      if (!d) {
        throw OutOfDomainAssignment("assignment " + g.var + ":=" +
                                    print(g.term) + " yields " + showRat(v) +
                                    " at " + showState(space_, i) +
                                    ", outside the domain of " + g.var);
      }
      const uint64_t cur = (i / stride) % domSize;
      return target.test(i - cur * stride + *d * stride);
    });
  }

  template <class F>
  StateSet iterate(StateSet z, F&& f) {
    for (uint64_t round = 0; round < budget_; ++round) {
      StateSet zn = f(z);
      if (zn == z) return z;
      z = std::move(zn);
    }
    throw FixpointBudgetExceeded(
        "fixpoint iteration did not stabilise within " +
        std::to_string(budget_) + " rounds; raise the budget");
  }

  template <class F>
  StateSet lfp(F&& f) {
    return iterate(StateSet::empty(n_), std::forward<F>(f));
  }
  template <class F>
  StateSet gfp(F&& f) {
    return iterate(StateSet::full(n_), std::forward<F>(f));
  }

  // Cooperative core of repetition: states where both players together can
  // steer the loop into X∩Y while keeping both able to agree throughout.
  StateSet coop(const GamePtr& body, const StateSet& X, const StateSet& Y) {
    RegionKey key{body.get(), 3, X, Y};
    auto it = regionMemo_.find(key);
    if (it != regionMemo_.end()) return it->second;
    const StateSet xy = X & Y;
    StateSet r = lfp([&](const StateSet& z) {
      return xy | (angel(body, z, z) & demon(body, z, z));
    });
    regionMemo_.emplace(std::move(key), r);
    return r;
  }

  // --------------------------------------------------- two-goal semantics

  StateSet angelUncached(const GamePtr& g, const StateSet& X,
                         const StateSet& Y) {
    switch (g->kind) {
      case HybridGame::Kind::Assign:
        return assignPreimage(*g, X);
      case HybridGame::Kind::Continuous: {
        const FlowTable& table = flowFor(*g);
        const std::vector<int64_t>& last = admissiblePrefix(g);
        return detail::buildSet(ctx_.policy, n_, [&](uint64_t i) {
          const std::vector<uint64_t>& traj = table.byState[i].states;
          for (int64_t k = 0; k <= last[i]; ++k) {
            if (X.test(traj[static_cast<std::size_t>(k)])) return true;
          }
          return false;
        });
      }
      case HybridGame::Kind::Test:
        return truth(g->fml) & X;
      case HybridGame::Kind::Choice:
        return angel(g->l, X, Y) | angel(g->r, X, Y);
      case HybridGame::Kind::Seq:
        return angel(g->l, angel(g->r, X, Y), demon(g->r, X, Y));
      case HybridGame::Kind::Dual:
        return demon(g->l, Y, X);
      case HybridGame::Kind::Repeat: {
        const GamePtr& body = g->l;
        StateSet competitive = lfp([&](const StateSet& z) {
          return X | angel(body, z, z.complement());
        });
        return competitive | coop(body, X, Y);
      }
    }
    throw ModelError("unreachable game kind");
  }

  StateSet demonUncached(const GamePtr& g, const StateSet& X,
                         const StateSet& Y) {
    switch (g->kind) {
      case HybridGame::Kind::Assign:
        return assignPreimage(*g, Y);
      case HybridGame::Kind::Continuous: {
        const FlowTable& table = flowFor(*g);
        const std::vector<int64_t>& last = admissiblePrefix(g);
        const StateSet xy = X & Y;
        return detail::buildSet(ctx_.policy, n_, [&](uint64_t i) {
          const std::vector<uint64_t>& traj = table.byState[i].states;
          bool allY = true;
          for (int64_t k = 0; k <= last[i]; ++k) {
            const uint64_t s = traj[static_cast<std::size_t>(k)];
            if (!Y.test(s)) allY = false;
            if (xy.test(s)) return true;  // a duration both are happy with
          }
          return allY;  // vacuously true when nothing is admissible
        });
      }
      case HybridGame::Kind::Test:
        return truth(g->fml).complement() | Y;
      case HybridGame::Kind::Choice: {
        const StateSet dl = demon(g->l, X, Y);
        const StateSet dr = demon(g->r, X, Y);
        const StateSet al = angel(g->l, X, Y);
        const StateSet ar = angel(g->r, X, Y);
        return (dl & dr) | (dl & al) | (dr & ar);
      }
      case HybridGame::Kind::Seq:
        return demon(g->l, angel(g->r, X, Y), demon(g->r, X, Y));
      case HybridGame::Kind::Dual:
        return angel(g->l, Y, X);
      case HybridGame::Kind::Repeat: {
        const GamePtr& body = g->l;
        StateSet competitive = gfp([&](const StateSet& z) {
          return Y & demon(body, z.complement(), z);
        });
        return competitive | coop(body, X, Y);
      }
    }
    throw ModelError("unreachable game kind");
  }

  // --------------------------------------------------- zero-sum semantics

  StateSet dglAngelUncached(const GamePtr& g, const StateSet& X) {
    switch (g->kind) {
      case HybridGame::Kind::Assign:
        return assignPreimage(*g, X);
      case HybridGame::Kind::Continuous: {
        const FlowTable& table = flowFor(*g);
        const std::vector<int64_t>& last = admissiblePrefix(g);
        return detail::buildSet(ctx_.policy, n_, [&](uint64_t i) {
          const std::vector<uint64_t>& traj = table.byState[i].states;
          for (int64_t k = 0; k <= last[i]; ++k) {
            if (X.test(traj[static_cast<std::size_t>(k)])) return true;
          }
          return false;
        });
      }
      case HybridGame::Kind::Test:
        return truth(g->fml) & X;
      case HybridGame::Kind::Choice:
        return dglAngel(g->l, X) | dglAngel(g->r, X);
      case HybridGame::Kind::Seq:
        return dglAngel(g->l, dglAngel(g->r, X));
      case HybridGame::Kind::Dual:
        return dglAngel(g->l, X.complement()).complement();
      case HybridGame::Kind::Repeat: {
        const GamePtr& body = g->l;
        return lfp([&](const StateSet& z) { return X | dglAngel(body, z); });
      }
    }
    throw ModelError("unreachable game kind");
  }

  const SemContext& ctx_;
  const StateSpace& space_;
  const uint64_t n_;
  const uint64_t budget_;
  std::unordered_map<const Formula*, StateSet> truthMemo_;
  std::unordered_map<RegionKey, StateSet, RegionKeyHash> regionMemo_;
  std::unordered_map<const HybridGame*, std::vector<int64_t>> admissibleMemo_;
};

void checkUniverse(const SemContext& ctx, const StateSet& s,
                   const char* which) {
  if (!ctx.model) throw ModelError("semantic context has no model");
  if (s.size() != ctx.model->space.stateCount) {
    throw ModelError(std::string(which) + " goal set has " +
                     std::to_string(s.size()) + " states, the space has " +
                     std::to_string(ctx.model->space.stateCount));
  }
}

}  // namespace

StateSet truthSet(const SemContext& ctx, const FormulaPtr& f) {
  if (!ctx.model) throw ModelError("semantic context has no model");
  Evaluator ev(ctx);
  return ev.truth(f);
}

StateSet angelRegion(const SemContext& ctx, const GamePtr& g,
                     const StateSet& X, const StateSet& Y) {
  checkUniverse(ctx, X, "angel");
  checkUniverse(ctx, Y, "demon");
  Evaluator ev(ctx);
  return ev.angel(g, X, Y);
}

StateSet demonRegion(const SemContext& ctx, const GamePtr& g,
                     const StateSet& X, const StateSet& Y) {
  checkUniverse(ctx, X, "angel");
  checkUniverse(ctx, Y, "demon");
  Evaluator ev(ctx);
  return ev.demon(g, X, Y);
}

StateSet dglAngelRegion(const SemContext& ctx, const GamePtr& g,
                        const StateSet& X) {
  checkUniverse(ctx, X, "angel");
  Evaluator ev(ctx);
  return ev.dglAngel(g, X);
}

StateSet dglDemonRegion(const SemContext& ctx, const GamePtr& g,
                        const StateSet& X) {
  checkUniverse(ctx, X, "demon");
  Evaluator ev(ctx);
  return ev.dglAngel(g, X.complement()).complement();
}

}  // namespace dglsc
