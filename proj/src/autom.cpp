#include "cdl/autom.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cdl {

SymbolicAutomaton::State SymbolicAutomaton::add_state(std::string name, StateRole role, PartySet blame) {
  states_.push_back({std::move(name), role, blame});
  out_valid_ = false;
  return static_cast<State>(states_.size() - 1);
}

void SymbolicAutomaton::add_edge(State from, Guard g, State to) {
  edges_.push_back({from, std::move(g), to});
  out_valid_ = false;
}

void SymbolicAutomaton::add_epsilon(State from, State to) {
  edges_.push_back({from, std::nullopt, to});
  out_valid_ = false;
}

const std::vector<std::size_t>& SymbolicAutomaton::out(State s) const {
  if (!out_valid_) {
    out_.assign(states_.size(), {});
    for (std::size_t k = 0; k < edges_.size(); ++k) out_[edges_[k].source].push_back(k);
    out_valid_ = true;
  }
  return out_.at(s);
}

bool SymbolicAutomaton::has_epsilon() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.epsilon(); });
}

std::vector<SymbolicAutomaton::State> SymbolicAutomaton::successors(State s, LabeledEvent e) const {
  std::vector<State> r;
  for (auto k : out(s)) {
    const auto& ed = edges_[k];
    if (!ed.epsilon() && ed.guard->holds(e)) r.push_back(ed.target);
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::uint64_t SymbolicAutomaton::atom_mask() const {
  std::uint64_t m = 0;
  for (const auto& e : edges_)
    if (e.guard) m |= e.guard->atom_mask();
  return m;
}

namespace {

using State = SymbolicAutomaton::State;

void require_no_epsilon(const SymbolicAutomaton& a) {
  if (a.has_epsilon()) throw std::invalid_argument("product of an automaton with ε-transitions");
}

StateInfo pair_info(const SymbolicAutomaton& a, State p, const SymbolicAutomaton& b, State q) {
  const auto& x = a.info(p);
  const auto& y = b.info(q);
  StateInfo r{"(" + x.name + "," + y.name + ")", StateRole::plain, {}};
  if (x.role == StateRole::bad || y.role == StateRole::bad) {
    r.role = StateRole::bad;
    if (x.role == StateRole::bad) r.blame |= x.blame;
    if (y.role == StateRole::bad) r.blame |= y.blame;
  } else if (x.role == StateRole::good && y.role == StateRole::good) {
    r.role = StateRole::good;
  }
  return r;
}

Guard any_of(const SymbolicAutomaton& a, State s) {
  Guard g = Guard::falsity();
  for (auto k : a.out(s)) g = disj(g, *a.edges()[k].guard);
  return g;
}

SymbolicAutomaton product(const SymbolicAutomaton& a, const SymbolicAutomaton& b, bool relaxed) {
  require_no_epsilon(a);
  require_no_epsilon(b);
  SymbolicAutomaton r;
  std::map<std::pair<State, State>, State> ids;
  std::deque<std::pair<State, State>> work;
  auto id = [&](State p, State q) {
    auto [it, fresh] = ids.try_emplace({p, q}, 0);
    if (fresh) {
      auto info = pair_info(a, p, b, q);
      it->second = r.add_state(info.name, info.role, info.blame);
      work.emplace_back(p, q);
    }
    return it->second;
  };
  r.set_initial(id(a.initial(), b.initial()));
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop_front();
    const State from = ids.at({p, q});
    for (auto ka : a.out(p))
      for (auto kb : b.out(q)) {
        const auto& ea = a.edges()[ka];
        const auto& eb = b.edges()[kb];
        Guard g = conj(*ea.guard, *eb.guard);
        if (satisfiable(g)) r.add_edge(from, g, id(ea.target, eb.target));
      }
    if (!relaxed) continue;
    const Guard none_b = negate(any_of(b, q));
    for (auto ka : a.out(p)) {
      const auto& ea = a.edges()[ka];
      Guard g = conj(*ea.guard, none_b);
      if (satisfiable(g)) r.add_edge(from, g, id(ea.target, q));
    }
    const Guard none_a = negate(any_of(a, p));
    for (auto kb : b.out(q)) {
      const auto& eb = b.edges()[kb];
      Guard g = conj(none_a, *eb.guard);
      if (satisfiable(g)) r.add_edge(from, g, id(p, eb.target));
    }
  }
  return r;
}

std::vector<State> closure(const SymbolicAutomaton& a, std::vector<State> set) {
  std::vector<State> stack = set;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (auto k : a.out(s)) {
      const auto& e = a.edges()[k];
      if (e.epsilon() && std::find(set.begin(), set.end(), e.target) == set.end()) {
        set.push_back(e.target);
        stack.push_back(e.target);
      }
    }
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

// Positive/negative literal lists for the characteristic formula of e over mask.
std::vector<Guard> literals(LabeledEvent e, std::uint64_t mask) {
  std::vector<Guard> lits;
  for (unsigned b = 0; b < 64; ++b) {
    if (!((mask >> b) & 1u)) continue;
    Guard at = Guard::atom(LabeledAction{b / 2, party_from_index(static_cast<int>(b % 2))});
    lits.push_back(((e.bits() >> b) & 1u) ? at : negate(at));
  }
  return lits;
}

bool pairwise_disjoint(const std::vector<Guard>& gs) {
  for (std::size_t x = 0; x < gs.size(); ++x)
    for (std::size_t y = x + 1; y < gs.size(); ++y)
      if (intersects(gs[x], gs[y])) return false;
  return true;
}

}  // namespace

SymbolicAutomaton reachable_part(const SymbolicAutomaton& a) {
  std::vector<long> map(a.state_count(), -1);
  std::vector<State> order{a.initial()};
  map[a.initial()] = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    for (auto ei : a.out(order[k])) {
      State t = a.edges()[ei].target;
      if (map[t] < 0) {
        map[t] = static_cast<long>(order.size());
        order.push_back(t);
      }
    }
  SymbolicAutomaton r;
  for (State s : order) r.add_state(a.info(s).name, a.info(s).role, a.info(s).blame);
  for (State s : order)
    for (auto ei : a.out(s)) {
      const auto& e = a.edges()[ei];
      if (e.epsilon())
        r.add_epsilon(static_cast<State>(map[s]), static_cast<State>(map[e.target]));
      else
        r.add_edge(static_cast<State>(map[s]), *e.guard, static_cast<State>(map[e.target]));
    }
  r.set_initial(0);
  return r;
}

SymbolicAutomaton sync_product(const SymbolicAutomaton& a, const SymbolicAutomaton& b) { return product(a, b, false); }

SymbolicAutomaton relaxed_product(const SymbolicAutomaton& a, const SymbolicAutomaton& b) {
  return product(a, b, true);
}

SymbolicAutomaton remove_epsilon(const SymbolicAutomaton& a) {
  SymbolicAutomaton r;
  for (State s = 0; s < a.state_count(); ++s) {
    StateInfo info = a.info(s);
    for (State t : closure(a, {s})) {
      const auto& ti = a.info(t);
      if (ti.role == StateRole::bad) {
        info.role = StateRole::bad;
        info.blame |= ti.blame;
      } else if (ti.role == StateRole::good && info.role == StateRole::plain) {
        info.role = StateRole::good;
      }
    }
    r.add_state(info.name, info.role, info.blame);
  }
  for (State s = 0; s < a.state_count(); ++s)
    for (State t : closure(a, {s}))
      for (auto k : a.out(t)) {
        const auto& e = a.edges()[k];
        if (!e.epsilon()) r.add_edge(s, *e.guard, e.target);
      }
  r.set_initial(a.initial());
  return r;
}

SymbolicAutomaton finalize(const SymbolicAutomaton& in) {
  // Good and bad states become sinks.
  SymbolicAutomaton a;
  for (State s = 0; s < in.state_count(); ++s) a.add_state(in.info(s).name, in.info(s).role, in.info(s).blame);
  for (const auto& e : in.edges()) {
    if (in.info(e.source).role != StateRole::plain) continue;
    if (e.epsilon())
      a.add_epsilon(e.source, e.target);
    else
      a.add_edge(e.source, *e.guard, e.target);
  }
  for (State s = 0; s < in.state_count(); ++s)
    if (in.info(s).role != StateRole::plain) a.add_edge(s, Guard::truth(), s);
  a.set_initial(in.initial());

  SymbolicAutomaton r;
  std::map<std::vector<State>, State> ids;
  std::deque<std::vector<State>> work;
  auto id = [&](const std::vector<State>& set) {
    auto [it, fresh] = ids.try_emplace(set, 0);
    if (!fresh) return it->second;
    StateInfo info;
    if (set.empty()) {
      info.name = "dead";
    } else if (set.size() == 1) {
      info.name = a.info(set[0]).name;
    } else {
      info.name = "{";
      for (std::size_t k = 0; k < set.size(); ++k) info.name += (k ? "," : "") + a.info(set[k]).name;
      info.name += "}";
    }
    for (State s : set) {
      const auto& si = a.info(s);
      if (si.role == StateRole::bad) {
        info.role = StateRole::bad;
        info.blame |= si.blame;
      } else if (si.role == StateRole::good && info.role == StateRole::plain) {
        info.role = StateRole::good;
      }
    }
    it->second = r.add_state(info.name, info.role, info.blame);
    work.push_back(set);
    return it->second;
  };
  r.set_initial(id(closure(a, {a.initial()})));

  while (!work.empty()) {
    const auto set = work.front();
    work.pop_front();
    const State from = ids.at(set);
    if (r.info(from).role == StateRole::bad || set.empty()) {
      r.add_edge(from, Guard::truth(), from);
      continue;
    }
    std::vector<const SymbolicAutomaton::Edge*> edges;
    for (State s : set)
      for (auto k : a.out(s))
        if (!a.edges()[k].epsilon()) edges.push_back(&a.edges()[k]);
    std::vector<Guard> guards;
    for (auto* e : edges) guards.push_back(*e->guard);

    // (target subset, guard) pairs in first-seen order.
    std::vector<std::pair<std::vector<State>, Guard>> moves;
    auto add_move = [&](std::vector<State> target, const Guard& g) {
      for (auto& m : moves)
        if (m.first == target) {
          m.second = disj(m.second, g);
          return;
        }
      moves.emplace_back(std::move(target), g);
    };

    if (pairwise_disjoint(guards)) {
      Guard covered = Guard::falsity();
      for (auto* e : edges) {
        if (!satisfiable(*e->guard)) continue;
        add_move(closure(a, {e->target}), *e->guard);
        covered = disj(covered, *e->guard);
      }
      if (!valid(covered)) add_move({}, negate(covered));
    } else {
      std::uint64_t mask = 0;
      for (const auto& g : guards) mask |= g.atom_mask();
      std::map<std::vector<State>, std::vector<std::vector<Guard>>> groups;
      std::vector<std::vector<State>> order;
      for_each_minterm(mask, [&](LabeledEvent ev) {
        std::vector<State> t;
        for (auto* e : edges)
          if (e->guard->holds(ev)) t.push_back(e->target);
        t = closure(a, t);
        auto [it, fresh] = groups.try_emplace(t);
        if (fresh) order.push_back(t);
        it->second.push_back(literals(ev, mask));
      });
      for (const auto& t : order) {
        auto target = t;
        auto accepted = [&](LabeledEvent ev) {
          std::vector<State> u;
          for (auto* e : edges)
            if (e->guard->holds(ev)) u.push_back(e->target);
          return closure(a, u) == target;
        };
        add_move(t, simplify_cover(groups.at(t), mask, accepted));
      }
    }
    for (auto& [t, g] : moves) r.add_edge(from, g, id(t));
  }

  // States that can only go bad: the violation is nobody's fault.
  std::optional<State> blameless;
  for (State s = 0; s < r.state_count(); ++s)
    if (r.info(s).role == StateRole::bad && r.info(s).blame.empty()) blameless = s;
  SymbolicAutomaton out;
  for (State s = 0; s < r.state_count(); ++s) out.add_state(r.info(s).name, r.info(s).role, r.info(s).blame);
  for (State s = 0; s < r.state_count(); ++s) {
    const auto& ks = r.out(s);
    const bool doomed = r.info(s).role == StateRole::plain && !ks.empty() &&
                        std::all_of(ks.begin(), ks.end(), [&](std::size_t k) { return r.rejecting(r.edges()[k].target); });
    const bool mixed = doomed && std::any_of(ks.begin(), ks.end(), [&](std::size_t k) {
                         return !r.info(r.edges()[k].target).blame.empty();
                       });
    if (mixed) {
      if (!blameless) {
        blameless = out.add_state("sB", StateRole::bad);
        out.add_edge(*blameless, Guard::truth(), *blameless);
      }
      out.add_edge(s, Guard::truth(), *blameless);
      continue;
    }
    for (auto k : ks) out.add_edge(s, *r.edges()[k].guard, r.edges()[k].target);
  }
  out.set_initial(r.initial());
  return reachable_part(out);
}

bool is_deterministic_and_total(const SymbolicAutomaton& a) {
  if (a.has_epsilon()) return false;
  for (State s = 0; s < a.state_count(); ++s) {
    std::vector<Guard> gs;
    for (auto k : a.out(s)) gs.push_back(*a.edges()[k].guard);
    if (!pairwise_disjoint(gs)) return false;
    Guard all = Guard::falsity();
    for (const auto& g : gs) all = disj(all, g);
    if (!valid(all)) return false;
  }
  return true;
}

Run run(const SymbolicAutomaton& a, std::span<const LabeledEvent> t) {
  Run r;
  State s = a.initial();
  r.path.push_back(s);
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::optional<State> next;
    for (auto ei : a.out(s)) {
      const auto& e = a.edges()[ei];
      if (!e.epsilon() && e.guard->holds(t[k])) {
        next = e.target;
        break;
      }
    }
    if (!next) break;
    s = *next;
    r.path.push_back(s);
    if (!r.first_rejecting && a.rejecting(s)) r.first_rejecting = k;
  }
  return r;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

}  // namespace

std::string to_dot(const SymbolicAutomaton& a, const Alphabet& sigma, const std::string& title) {
  std::ostringstream o;
  o << "digraph \"" << dot_escape(title) << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (State s = 0; s < a.state_count(); ++s) {
    const auto& i = a.info(s);
    std::string label = i.name;
    if (i.role == StateRole::bad && !i.blame.empty()) label += " " + to_string(i.blame);
    o << "  q" << s << " [label=\"" << dot_escape(label) << "\", shape="
      << (i.role == StateRole::bad ? "doublecircle" : "circle") << "];\n";
  }
  o << "  init -> q" << a.initial() << ";\n";
  for (const auto& e : a.edges()) {
    const std::string label = e.epsilon() ? "ε" : to_string(*e.guard, sigma);
    o << "  q" << e.source << " -> q" << e.target << " [label=\"" << dot_escape(label) << "\"];\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace cdl
