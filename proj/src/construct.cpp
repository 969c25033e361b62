#include "cdl/construct.hpp"

#include <array>
#include <deque>
#include <map>
#include <stdexcept>

#include "cdl/rex.hpp"
#include "cdl/wellformed.hpp"

namespace cdl {

namespace {

using State = SymbolicAutomaton::State;

struct FEdge {
  State source;
  std::optional<Guard> guard;
  State target;
};
using Edges = std::vector<FEdge>;

// Bad targets indexed by the blamed parties. Without blame, or inside the
// primary clause of a reparation, all four are the same state.
struct Bad {
  std::array<State, 4> s{};
  static Bad all(State x) { return Bad{{x, x, x, x}}; }
  State at(PartySet t) const { return s[t.bits()]; }
  std::optional<PartySet> tag(State x) const {
    for (std::uint8_t k = 0; k < 4; ++k)
      if (s[k] == x) return PartySet(k);
    return std::nullopt;
  }
};

using Env = std::map<std::string, State>;

class Builder {
 public:
  explicit Builder(bool blame) : blame_(blame) {}

  SymbolicAutomaton build(const Contract& c) {
    const State s0 = reg_.add_state("s0");
    const State sg = reg_.add_state("sG", StateRole::good);
    Bad bad;
    if (blame_) {
      bad.s[0] = reg_.add_state("sB", StateRole::bad);
      bad.s[1] = reg_.add_state("sB0", StateRole::bad, PartySet::of(Party::zero));
      bad.s[2] = reg_.add_state("sB1", StateRole::bad, PartySet::of(Party::one));
      bad.s[3] = reg_.add_state("sB01", StateRole::bad, PartySet::both());
    } else {
      bad = Bad::all(reg_.add_state("sB", StateRole::bad));
    }
    Edges out;
    trans(c.get(), s0, sg, bad, {}, out);
    for (const auto& e : out) {
      if (e.guard)
        reg_.add_edge(e.source, *e.guard, e.target);
      else
        reg_.add_epsilon(e.source, e.target);
    }
    reg_.set_initial(s0);
    return reachable_part(reg_);
  }

 private:
  State fresh() { return reg_.add_state("s" + std::to_string(++counter_)); }

  const TightDfa& dfa(const Regex& re) {
    auto it = dfas_.find(re.get());
    if (it == dfas_.end()) it = dfas_.emplace(re.get(), compile_regex(re)).first;
    return it->second;
  }

  // A(re, s0, on_match, on_fail).
  void embed(const TightDfa& d, State s0, State on_match, State on_fail, Edges& out) {
    std::map<TightDfa::State, State> m{{d.initial(), s0}, {d.matched(), on_match}, {d.failed(), on_fail}};
    auto id = [&](TightDfa::State x) {
      auto it = m.find(x);
      if (it == m.end()) it = m.emplace(x, fresh()).first;
      return it->second;
    };
    for (TightDfa::State x = 0; x < d.state_count(); ++x) {
      if (x == d.matched() || x == d.failed()) continue;
      for (const auto& e : d.edges(x)) out.push_back({id(x), e.guard, id(e.target)});
    }
  }

  void trans(const ContractNode* c, State s0, State sg, const Bad& bad, const Env& env, Edges& out) {
    switch (c->kind) {
      case ContractKind::top: out.push_back({s0, Guard::truth(), sg}); return;
      case ContractKind::bottom: out.push_back({s0, Guard::truth(), bad.at({})}); return;
      case ContractKind::obligation:
      case ContractKind::prohibition:
      case ContractKind::permission: norm(*c, s0, sg, bad, out); return;

      case ContractKind::trigger: {
        const State s = fresh();
        embed(dfa(c->regex), s0, s, sg, out);
        trans(c->lhs.get(), s, sg, bad, env, out);
        return;
      }

      case ContractKind::guard: {
        Edges re, body;
        embed(dfa(c->regex), s0, sg, sg, re);
        trans(c->lhs.get(), s0, sg, bad, env, body);
        product(re, body, s0, sg, bad, false, out);
        return;
      }

      case ContractKind::conjunction: {
        Edges l, r;
        trans(c->lhs.get(), s0, sg, bad, env, l);
        trans(c->rhs.get(), s0, sg, bad, env, r);
        product(l, r, s0, sg, bad, true, out);
        return;
      }

      case ContractKind::sequence: {
        const State s = fresh();
        trans(c->lhs.get(), s0, s, bad, env, out);
        trans(c->rhs.get(), s, sg, bad, env, out);
        return;
      }

      case ContractKind::reparation: {
        const State s = fresh();
        trans(c->lhs.get(), s0, sg, Bad::all(s), env, out);
        trans(c->rhs.get(), s, sg, bad, env, out);
        return;
      }

      case ContractKind::variable: {
        auto it = env.find(c->name);
        if (it == env.end()) throw std::logic_error("unbound recursion variable " + c->name);
        // The variable occupies s0: jump back to where its binder started.
        out.push_back({s0, std::nullopt, it->second});
        return;
      }

      case ContractKind::recursion: {
        Env inner = env;
        inner[c->name] = s0;
        trans(c->lhs.get(), s0, sg, bad, inner, out);
        return;
      }
    }
  }

  void norm(const ContractNode& n, State s0, State sg, const Bad& bad, Edges& out) {
    const Party p = n.party;
    const Guard mine = Guard::atom(n.action, p);
    const Guard theirs = Guard::atom(n.action, other(p));
    const Guard both = conj(mine, theirs);
    switch (n.kind) {
      case ContractKind::obligation:
        out.push_back({s0, both, sg});
        if (blame_) {
          out.push_back({s0, negate(mine), bad.at(PartySet::of(p))});
          out.push_back({s0, conj(mine, negate(theirs)), bad.at(PartySet::of(other(p)))});
        } else {
          out.push_back({s0, negate(both), bad.at({})});
        }
        return;
      case ContractKind::prohibition:
        out.push_back({s0, negate(both), sg});
        out.push_back({s0, both, bad.at(blame_ ? PartySet::of(p) : PartySet{})});
        return;
      case ContractKind::permission:
        out.push_back({s0, implies(mine, theirs), sg});
        if (blame_)
          out.push_back({s0, conj(mine, negate(theirs)), bad.at(PartySet::of(other(p)))});
        else
          out.push_back({s0, negate(implies(mine, theirs)), bad.at({})});
        return;
      default: throw std::logic_error("not a norm");
    }
  }

  using Adjacency = std::map<State, std::vector<std::pair<Guard, State>>>;

  static Adjacency without_epsilon(const Edges& es) {
    std::map<State, std::vector<const FEdge*>> raw;
    for (const auto& e : es) raw[e.source].push_back(&e);
    Adjacency adj;
    for (const auto& [s, list] : raw) {
      std::vector<State> seen{s}, stack{s};
      while (!stack.empty()) {
        State t = stack.back();
        stack.pop_back();
        auto it = raw.find(t);
        if (it == raw.end()) continue;
        for (const FEdge* e : it->second) {
          if (e->guard) {
            adj[s].emplace_back(*e->guard, e->target);
          } else if (std::find(seen.begin(), seen.end(), e->target) == seen.end()) {
            seen.push_back(e->target);
            stack.push_back(e->target);
          }
        }
      }
    }
    return adj;
  }

  // Guard mode: left is the regex automaton, `(sG,*)` wins over `(*,bad)`,
  // which wins over `(*,sG)`. Conjunction mode: relaxed product, `(sG,sG)`
  // is good, any bad component makes the pair bad with the blame united,
  // and pairs that can only go bad are conflicts.
  void product(const Edges& left, const Edges& right, State s0, State sg, const Bad& bad, bool conjunction,
               Edges& out) {
    const Adjacency a = without_epsilon(left), b = without_epsilon(right);
    static const std::vector<std::pair<Guard, State>> none;
    auto edges_of = [&](const Adjacency& adj, State s) -> const std::vector<std::pair<Guard, State>>& {
      auto it = adj.find(s);
      return it == adj.end() ? none : it->second;
    };

    std::map<std::pair<State, State>, State> ids{{{s0, s0}, s0}};
    std::deque<std::pair<State, State>> work{{s0, s0}};
    auto collapse = [&](State p, State q) -> State {
      if (conjunction) {
        auto tp = bad.tag(p), tq = bad.tag(q);
        if (tp || tq) return bad.at(tp.value_or(PartySet{}) | tq.value_or(PartySet{}));
        if (p == sg && q == sg) return sg;
      } else {
        if (p == sg) return sg;
        if (bad.tag(q)) return q;
        if (q == sg) return sg;
      }
      auto [it, is_new] = ids.try_emplace({p, q}, 0);
      if (is_new) {
        it->second = fresh();
        work.emplace_back(p, q);
      }
      return it->second;
    };

    while (!work.empty()) {
      auto [p, q] = work.front();
      work.pop_front();
      const State from = ids.at({p, q});
      const auto& ea = edges_of(a, p);
      const auto& eb = edges_of(b, q);
      Edges mine;
      for (const auto& [ga, ta] : ea)
        for (const auto& [gb, tb] : eb) {
          Guard g = conj(ga, gb);
          if (satisfiable(g)) mine.push_back({from, g, collapse(ta, tb)});
        }
      if (conjunction) {
        Guard any_a = Guard::falsity(), any_b = Guard::falsity();
        for (const auto& e : ea) any_a = disj(any_a, e.first);
        for (const auto& e : eb) any_b = disj(any_b, e.first);
        for (const auto& [ga, ta] : ea) {
          Guard g = conj(ga, negate(any_b));
          if (satisfiable(g)) mine.push_back({from, g, collapse(ta, q)});
        }
        for (const auto& [gb, tb] : eb) {
          Guard g = conj(negate(any_a), gb);
          if (satisfiable(g)) mine.push_back({from, g, collapse(p, tb)});
        }
        const bool doomed = !mine.empty() && std::all_of(mine.begin(), mine.end(), [&](const FEdge& e) {
          return bad.tag(e.target).has_value();
        });
        const bool tagged = std::any_of(mine.begin(), mine.end(), [&](const FEdge& e) { return e.target != bad.at({}); });
        if (doomed && tagged) mine = {{from, Guard::truth(), bad.at({})}};
      }
      out.insert(out.end(), mine.begin(), mine.end());
    }
  }

  bool blame_;
  SymbolicAutomaton reg_;
  unsigned counter_ = 0;
  std::map<const void*, TightDfa> dfas_;
};

}  // namespace

SymbolicAutomaton translate(const Contract& c, bool with_blame) {
  require_wellformed(c);
  return Builder(with_blame).build(c);
}

SymbolicAutomaton aut(const Contract& c) { return finalize(translate(c, false)); }

SymbolicAutomaton blaut(const Contract& c) { return finalize(translate(c, true)); }

}  // namespace cdl
