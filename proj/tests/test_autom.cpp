#include <doctest.h>

#include <map>

#include "cdl/construct.hpp"
#include "cdl/io.hpp"
#include "cdl/parser.hpp"
#include "cdl/semantics.hpp"
#include "support/gen.hpp"

using namespace cdl;

namespace {

using State = SymbolicAutomaton::State;

struct Shape {
  // Expected successor of each abstract state as a function of the event.
  std::vector<std::function<std::size_t(LabeledEvent)>> next;
  std::vector<bool> rejecting;
  std::vector<PartySet> blame;
};

// Walks `a` and `want` in lockstep from the initial states over every event
// and checks the correspondence is a bijection.
void check_isomorphic(const SymbolicAutomaton& a, const Shape& want, const Alphabet& sigma) {
  REQUIRE(a.state_count() == want.next.size());
  std::map<State, std::size_t> fwd{{a.initial(), 0}};
  std::map<std::size_t, State> back{{0, a.initial()}};
  std::vector<State> work{a.initial()};
  const auto events = testing::all_events(sigma);
  while (!work.empty()) {
    const State s = work.back();
    work.pop_back();
    const auto k = fwd.at(s);
    CHECK(a.rejecting(s) == want.rejecting[k]);
    CHECK(a.info(s).blame == want.blame[k]);
    for (auto e : events) {
      auto succ = a.successors(s, e);
      REQUIRE(succ.size() == 1);
      const auto t = succ[0];
      const auto kt = want.next[k](e);
      auto [it, fresh] = fwd.try_emplace(t, kt);
      CHECK(it->second == kt);
      auto [jt, fresh2] = back.try_emplace(kt, t);
      CHECK(jt->second == t);
      if (fresh) work.push_back(t);
    }
  }
  CHECK(fwd.size() == a.state_count());
}

bool has(LabeledEvent e, const Alphabet& s, const char* a, Party p) { return e.contains({s.at(a), p}); }

}  // namespace

TEST_CASE("relay contract automaton") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto& s = f.alphabet;
  auto both = [&](LabeledEvent e, const char* x) { return has(e, s, x, Party::zero) && has(e, s, x, Party::one); };
  // 0 = s0, 1 = sG (which falls back into s0), 2 = s2, 3 = sB
  Shape shape;
  shape.next = {
      [&](LabeledEvent e) -> std::size_t { return both(e, "a") ? 1 : 2; },
      [&](LabeledEvent e) -> std::size_t { return both(e, "a") ? 1 : 2; },
      [&](LabeledEvent e) -> std::size_t { return both(e, "b") ? 1 : 3; },
      [](LabeledEvent) -> std::size_t { return 3; },
  };
  shape.rejecting = {false, false, false, true};
  shape.blame = {{}, {}, {}, {}};
  const auto a = aut(f.contract);
  CHECK(is_deterministic_and_total(a));
  check_isomorphic(a, shape, s);
}

TEST_CASE("relay blame automaton") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto& s = f.alphabet;
  auto both = [&](LabeledEvent e, const char* x) { return has(e, s, x, Party::zero) && has(e, s, x, Party::one); };
  // 0 = s0, 1 = sG, 2 = s2, 3 = sB0, 4 = sB1
  Shape shape;
  shape.next = {
      [&](LabeledEvent e) -> std::size_t { return both(e, "a") ? 1 : 2; },
      [&](LabeledEvent e) -> std::size_t { return both(e, "a") ? 1 : 2; },
      [&](LabeledEvent e) -> std::size_t {
        if (both(e, "b")) return 1;
        return has(e, s, "b", Party::zero) ? 4 : 3;
      },
      [](LabeledEvent) -> std::size_t { return 3; },
      [](LabeledEvent) -> std::size_t { return 4; },
  };
  shape.rejecting = {false, false, false, true, true};
  shape.blame = {{}, {}, {}, PartySet::of(Party::zero), PartySet::of(Party::one)};
  const auto b = blaut(f.contract);
  CHECK(is_deterministic_and_total(b));
  check_isomorphic(b, shape, s);
}

TEST_CASE("raw translation keeps the recursion jump") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto t = translate(f.contract, false);
  CHECK(t.has_epsilon());
  CHECK(t.info(t.initial()).name == "s0");
  CHECK_FALSE(finalize(t).has_epsilon());
}

TEST_CASE("constants") {
  const auto t = aut(top());
  CHECK(t.state_count() == 2);
  CHECK(t.info(t.successors(t.initial(), LabeledEvent{})[0]).role == StateRole::good);
  const auto b = aut(bottom());
  CHECK(b.state_count() == 2);
  CHECK(b.rejecting(b.successors(b.initial(), LabeledEvent{})[0]));
}

TEST_CASE("products") {
  const Alphabet s({"a"});
  SymbolicAutomaton x, y;
  auto x0 = x.add_state("p"), x1 = x.add_state("q", StateRole::bad, PartySet::of(Party::zero));
  x.add_edge(x0, Guard::atom(0, Party::zero), x1);
  x.add_edge(x0, negate(Guard::atom(0, Party::zero)), x0);
  x.add_edge(x1, Guard::truth(), x1);
  auto y0 = y.add_state("u"), y1 = y.add_state("v", StateRole::bad, PartySet::of(Party::one));
  y.add_edge(y0, Guard::atom(0, Party::one), y1);
  y.add_edge(y1, Guard::truth(), y1);

  const auto sp = sync_product(x, y);
  // Only a_1 moves y, so pairs with y in u need a_1 false.
  CHECK(sp.info(sp.initial()).name == "(p,u)");
  LabeledEvent both{{0, Party::zero}, {0, Party::one}};
  auto r = run(sp, std::vector<LabeledEvent>{both});
  REQUIRE(r.first_rejecting);
  CHECK(sp.info(r.path[1]).blame == PartySet::both());
  auto stuck = sp.successors(sp.initial(), LabeledEvent{});
  CHECK(stuck.empty());

  const auto rp = relaxed_product(x, y);
  auto moved = rp.successors(rp.initial(), LabeledEvent{});
  REQUIRE(moved.size() == 1);
  CHECK(rp.info(moved[0]).name == "(p,u)");
}

TEST_CASE("dot output") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto dot = to_dot(blaut(f.contract), f.alphabet, "relay");
  CHECK(dot.find("digraph \"relay\"") == 0);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("b_0") != std::string::npos);
  CHECK(dot.find("{1}") != std::string::npos);
}

TEST_CASE("automata are deterministic, total and agree with the evaluator") {
  testing::Rng rng(404);
  const auto& sigma = testing::ab();
  for (int k = 0; k < 400; ++k) {
    auto c = testing::random_contract(rng, sigma);
    const auto a = aut(c);
    REQUIRE(is_deterministic_and_total(a));
    REQUIRE(is_deterministic_and_total(blaut(c)));
    for (int t = 0; t < 10; ++t) {
      auto x = testing::random_interaction(rng, sigma, 4);
      const auto v = evaluate(c, x);
      const auto r = run(a, to_labeled(x));
      if (v.kind == VerdictKind::violated) {
        REQUIRE(r.first_rejecting);
        CHECK(*r.first_rejecting == v.index);
      } else {
        CHECK_FALSE(r.first_rejecting);
      }
    }
  }
}

TEST_CASE("regex-free automata grow linearly") {
  testing::Rng rng(406);
  const auto& sigma = testing::ab();
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    for (int k = 0; k < 20; ++k) {
      auto c = testing::random_contract_of_size(rng, sigma, n, {.max_size = n, .regexes = false});
      CHECK(aut(c).state_count() <= 2 * (contract_size(c) + 2));
    }
  }
}

namespace {

bool same_guard(const Guard& g, const Guard& h, const Alphabet& sigma) {
  for (auto e : testing::all_events(sigma))
    if (g.holds(e) != h.holds(e)) return false;
  return true;
}

// Is there an edge from->to with a guard equivalent to g (or an ε edge when g is empty)?
bool has_edge(const SymbolicAutomaton& a, const std::string& from, const std::optional<Guard>& g,
              const std::string& to, const Alphabet& sigma) {
  for (const auto& e : a.edges()) {
    if (a.info(e.source).name != from || a.info(e.target).name != to) continue;
    if (!g && e.epsilon()) return true;
    if (g && e.guard && same_guard(*e.guard, *g, sigma)) return true;
  }
  return false;
}

// Calls f on every trace of length 1..n.
void for_each_trace(const Alphabet& sigma, std::size_t n, const std::function<void(const LabeledTrace&)>& f) {
  const auto events = testing::all_events(sigma);
  LabeledTrace t;
  std::function<void()> walk = [&] {
    if (!t.empty()) f(t);
    if (t.size() == n) return;
    for (auto e : events) {
      t.push_back(e);
      walk();
      t.pop_back();
    }
  };
  walk();
}

bool rejects(const SymbolicAutomaton& a, const LabeledTrace& t) { return run(a, t).first_rejecting.has_value(); }

}  // namespace

TEST_CASE("translation rules for constants and norms") {
  const Alphabet s({"a"});
  const Guard a0 = Guard::atom(0, Party::zero), a1 = Guard::atom(0, Party::one);
  const auto t = translate(top(), false);
  CHECK(t.state_count() == 2);
  CHECK(t.edge_count() == 1);
  CHECK(has_edge(t, "s0", Guard::truth(), "sG", s));

  const auto o = translate(obligation(Party::one, 0), false);
  CHECK(o.edge_count() == 2);
  CHECK(has_edge(o, "s0", conj(a1, a0), "sG", s));
  CHECK(has_edge(o, "s0", negate(conj(a1, a0)), "sB", s));

  const auto bo = translate(obligation(Party::zero, 0), true);
  CHECK(has_edge(bo, "s0", negate(a0), "sB0", s));
  CHECK(has_edge(bo, "s0", conj(a0, negate(a1)), "sB1", s));
}

TEST_CASE("relay contract before ε elimination") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto& s = f.alphabet;
  auto both = [&](const char* x) { return conj(Guard::atom(s.at(x), Party::zero), Guard::atom(s.at(x), Party::one)); };
  const auto t = translate(f.contract, false);
  CHECK(t.state_count() == 4);
  CHECK(t.edge_count() == 5);
  // s1 is the intermediate state of the sequence: the good state of the body.
  CHECK(has_edge(t, "s0", both("a"), "s1", s));
  CHECK(has_edge(t, "s0", negate(both("a")), "s2", s));
  CHECK(has_edge(t, "s2", both("b"), "s1", s));
  CHECK(has_edge(t, "s2", negate(both("b")), "sB", s));
  CHECK(has_edge(t, "s1", std::nullopt, "s0", s));
}

TEST_CASE("runs of the relay automaton") {
  auto f = load_contract(CDL_TEST_DATA "/relay.cdl");
  const auto a = aut(f.contract);
  const auto ev = [&](std::initializer_list<std::pair<const char*, Party>> xs) {
    LabeledEvent e;
    for (auto [n, p] : xs) e.insert({f.alphabet.at(n), p});
    return e;
  };
  const LabeledTrace lasso{ev({{"a", Party::zero}, {"c", Party::one}}), ev({{"b", Party::zero}, {"b", Party::one}}),
                           ev({{"a", Party::zero}, {"b", Party::one}}), ev({{"b", Party::zero}, {"c", Party::one}})};
  auto r = run(a, lasso);
  REQUIRE(r.first_rejecting);
  CHECK(*r.first_rejecting == 3);
  auto empty = run(a, LabeledTrace{});
  CHECK(empty.path == std::vector<SymbolicAutomaton::State>{a.initial()});
  CHECK_FALSE(empty.first_rejecting);
}

TEST_CASE("top never rejects") {
  testing::Rng rng(3);
  const auto a = aut(top()), b = blaut(top());
  for (int k = 0; k < 100; ++k) {
    auto t = to_labeled(testing::random_interaction(rng, testing::ab(), 6));
    CHECK_FALSE(rejects(a, t));
    CHECK_FALSE(rejects(b, t));
  }
  for (SymbolicAutomaton::State q = 0; q < b.state_count(); ++q) CHECK_FALSE(b.rejecting(q));
}

TEST_CASE("conjunction waits for the longer side") {
  const Alphabet s({"a", "b"});
  auto c = conj(obligation(Party::zero, 0), seq(obligation(Party::zero, 0), obligation(Party::zero, 1)));
  Interaction x;
  x.push_back(Event{0}, Event{0});
  x.push_back(Event{1}, Event{1});
  CHECK(evaluate(c, x) == Verdict::satisfied_at(1));
  const auto a = aut(c);
  auto r = run(a, to_labeled(x));
  CHECK(a.info(r.path[1]).role == StateRole::plain);
  CHECK(a.info(r.path[2]).role == StateRole::good);
}

TEST_CASE("product with the universal automaton is the identity") {
  SymbolicAutomaton u;
  u.add_state("u");
  u.add_edge(0, Guard::truth(), 0);
  testing::Rng rng(77);
  for (int k = 0; k < 50; ++k) {
    const auto a = aut(testing::random_contract(rng, testing::ab()));
    const auto p = sync_product(a, u);
    CHECK(p.state_count() == a.state_count());
    CHECK(relaxed_product(a, u).state_count() == a.state_count());
    for (int t = 0; t < 20; ++t) {
      auto w = to_labeled(testing::random_interaction(rng, testing::ab(), 5));
      CHECK(run(p, w).first_rejecting == run(a, w).first_rejecting);
    }
  }
}

TEST_CASE("synchronous product rejects what either side rejects") {
  testing::Rng rng(78);
  for (int k = 0; k < 6; ++k) {
    const auto a = aut(testing::random_contract(rng, testing::ab()));
    const auto b = aut(testing::random_contract(rng, testing::ab()));
    const auto p = sync_product(a, b);
    const auto r = relaxed_product(a, b);
    CHECK(r.state_count() == p.state_count());  // total automata: relaxation never fires
    std::size_t n = 0;
    for_each_trace(testing::ab(), 4, [&](const LabeledTrace& t) {
      const bool want = rejects(a, t) || rejects(b, t);
      if (rejects(p, t) != want) CHECK(rejects(p, t) == want);
      ++n;
    });
    CHECK(n == 16 + 256 + 4096 + 65536);
  }
}

TEST_CASE("finalising an automaton twice is the identity on traces up to length 4") {
  testing::Rng rng(79);
  for (int k = 0; k < 8; ++k) {
    const auto a = aut(testing::random_contract(rng, testing::ab()));
    const auto b = finalize(a);
    CHECK(b.state_count() == a.state_count());
    for_each_trace(testing::ab(), 4, [&](const LabeledTrace& t) {
      if (rejects(a, t) != rejects(b, t)) CHECK(rejects(a, t) == rejects(b, t));
    });
  }
}
