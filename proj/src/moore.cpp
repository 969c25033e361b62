#include "cdl/moore.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "cdl/construct.hpp"

namespace cdl {

MooreMachine::State MooreMachine::add_state(std::string name, Event output) {
  names.push_back(std::move(name));
  outputs.push_back(output);
  return static_cast<State>(names.size() - 1);
}

LabeledEvent MooreMachine::labeled_output(State s) const {
  LabeledEvent e;
  const Event out = outputs.at(s);
  for (ActionId a = 0; a < Alphabet::max_size; ++a)
    if (out.contains(a)) e.insert({a, party});
  return e;
}

std::vector<MooreMachine::State> MooreMachine::next(State s, LabeledEvent e) const {
  std::vector<State> r;
  for (const auto& t : transitions)
    if (t.source == s && t.guard.holds(e)) r.push_back(t.target);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

namespace {

std::uint64_t party_atoms(const Alphabet& sigma, Party p) {
  std::uint64_t m = 0;
  for (ActionId a = 0; a < sigma.size(); ++a) m |= std::uint64_t{1} << LabeledAction{a, p}.bit();
  return m;
}

}  // namespace

void validate(const MooreMachine& m, const Alphabet& sigma) {
  const auto n = m.state_count();
  if (n == 0) throw InvalidMachine("machine has no states");
  if (m.outputs.size() != n) throw InvalidMachine("one output set per state expected");
  if (m.initial >= n) throw InvalidMachine("initial state out of range");
  for (std::size_t s = 0; s < n; ++s)
    if (m.outputs[s].bits() & ~sigma.action_mask())
      throw InvalidMachine("state " + m.names[s] + " outputs an action outside the alphabet");
  const auto allowed = party_atoms(sigma, other(m.party));
  std::vector<std::vector<Guard>> out(n);
  for (const auto& t : m.transitions) {
    if (t.source >= n || t.target >= n) throw InvalidMachine("transition endpoint out of range");
    if (t.guard.atom_mask() & ~allowed)
      throw InvalidMachine("guard out of " + m.names[t.source] + " reads atoms that are not the other party's inputs");
    out[t.source].push_back(t.guard);
  }
  for (std::size_t s = 0; s < n; ++s) {
    Guard all = Guard::falsity();
    for (const auto& g : out[s]) all = disj(all, g);
    if (!valid(all)) throw InvalidMachine("guards out of " + m.names[s] + " do not cover every input");
    if (!m.deterministic) continue;
    for (std::size_t x = 0; x < out[s].size(); ++x)
      for (std::size_t y = x + 1; y < out[s].size(); ++y)
        if (intersects(out[s][x], out[s][y]))
          throw InvalidMachine("machine declared deterministic but guards out of " + m.names[s] + " overlap");
  }
}

SymbolicAutomaton moore_product(const MooreMachine& m0, const MooreMachine& m1, const Alphabet& sigma) {
  if (m0.party != Party::zero || m1.party != Party::one)
    throw InvalidMachine("product expects the party-0 machine first and the party-1 machine second");
  validate(m0, sigma);
  validate(m1, sigma);
  SymbolicAutomaton r;
  std::map<std::pair<MooreMachine::State, MooreMachine::State>, SymbolicAutomaton::State> ids;
  std::deque<std::pair<MooreMachine::State, MooreMachine::State>> work;
  auto id = [&](MooreMachine::State a, MooreMachine::State b) {
    auto [it, fresh] = ids.try_emplace({a, b}, 0);
    if (fresh) {
      it->second = r.add_state("(" + m0.names[a] + "," + m1.names[b] + ")");
      work.emplace_back(a, b);
    }
    return it->second;
  };
  r.set_initial(id(m0.initial, m1.initial));
  const auto mask = sigma.labeled_mask();
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    const auto from = ids.at({a, b});
    const LabeledEvent e(m0.labeled_output(a).bits() | m1.labeled_output(b).bits());
    for (auto a2 : m0.next(a, e))
      for (auto b2 : m1.next(b, e)) r.add_edge(from, Guard::minterm(e, mask), id(a2, b2));
  }
  return r;
}

std::optional<Counterexample> find_reachable(const MooreMachine& m0, const MooreMachine& m1,
                                             const SymbolicAutomaton& a,
                                             const std::function<bool(SymbolicAutomaton::State)>& target) {
  using Key = std::tuple<MooreMachine::State, MooreMachine::State, SymbolicAutomaton::State>;
  struct Node {
    JointState state;
    long parent;
    LabeledEvent via;
  };
  std::vector<Node> nodes{{{m0.initial, m1.initial, a.initial()}, -1, {}}};
  std::map<Key, std::size_t> seen{{{m0.initial, m1.initial, a.initial()}, 0}};

  auto extract = [&](std::size_t k) {
    Counterexample cx;
    for (long i = static_cast<long>(k); i >= 0; i = nodes[i].parent) {
      cx.states.push_back(nodes[i].state);
      if (nodes[i].parent >= 0) cx.trace.push_back(nodes[i].via);
    }
    std::reverse(cx.states.begin(), cx.states.end());
    std::reverse(cx.trace.begin(), cx.trace.end());
    cx.violation_index = cx.trace.size() - 1;
    cx.blamed = a.info(nodes[k].state.contract).blame;
    return cx;
  };

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const JointState cur = nodes[k].state;
    if (a.rejecting(cur.contract)) continue;  // bad states are sinks
    const LabeledEvent e(m0.labeled_output(cur.m0).bits() | m1.labeled_output(cur.m1).bits());
    const auto qs = a.successors(cur.contract, e);
    if (qs.empty()) continue;
    const auto q = qs.front();
    for (auto s0 : m0.next(cur.m0, e))
      for (auto s1 : m1.next(cur.m1, e)) {
        Key key{s0, s1, q};
        if (seen.count(key)) continue;
        seen[key] = nodes.size();
        nodes.push_back({{s0, s1, q}, static_cast<long>(k), e});
        if (target(q)) return extract(nodes.size() - 1);
      }
  }
  return std::nullopt;
}

std::optional<Counterexample> model_check(const MooreMachine& m0, const MooreMachine& m1, const Contract& c) {
  const auto a = aut(c);
  return find_reachable(m0, m1, a, [&](SymbolicAutomaton::State s) { return a.rejecting(s); });
}

std::optional<Counterexample> blame_check(const MooreMachine& m0, const MooreMachine& m1, const Contract& c,
                                          Party p) {
  const auto a = blaut(c);
  return find_reachable(m0, m1, a,
                        [&](SymbolicAutomaton::State s) { return a.rejecting(s) && a.info(s).blame.contains(p); });
}

}  // namespace cdl
