// One line per acceptance criterion. Exits nonzero if any line says FAIL.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cdl/blame.hpp"
#include "cdl/construct.hpp"
#include "cdl/io.hpp"
#include "cdl/moore.hpp"
#include "cdl/quant.hpp"
#include "cdl/semantics.hpp"
#include "cdl/wellformed.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace cdl;

namespace {

// Pinned sizes and tolerances.
constexpr int kGridContracts = 1000;
constexpr int kGridInteractionsPerContract = 100;  // 100,000 pairs
constexpr std::size_t kGridMaxLength = 4;
constexpr std::size_t kGridMaxSize = 8;
constexpr int kRegexes = 200;
constexpr int kRegexDepth = 3;
constexpr std::size_t kRegexTraceLength = 4;
constexpr int kSizeSamplesPerN = 100;
constexpr std::size_t kMaxN = 64;
constexpr double kLinearFactor = 2.0;

const std::string data = CDL_TEST_DATA;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

int failures = 0;

void report(int n, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %d: %s  %s  (%.1fs)%s%s\n", n, o.pass ? "PASS" : "FAIL", title, secs,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

LabeledEvent lev(const Alphabet& s, std::initializer_list<const char*> atoms) {
  LabeledEvent e;
  for (std::string x : atoms) {
    auto cut = x.rfind('_');
    e.insert({s.at(x.substr(0, cut)), party_from_index(x[cut + 1] - '0')});
  }
  return e;
}

// 1 -------------------------------------------------------------------------

Outcome relay_end_to_end() {
  Outcome o;
  auto f = load_contract(data + "/relay.cdl");
  const auto& s = f.alphabet;
  auto m0 = load_machine(data + "/relay_m0.json", s);
  auto m1 = load_machine(data + "/relay_m1.json", s);

  // The 4-state shape: s0 and sG agree, s2 waits for the reparation, sB absorbs.
  const auto a = aut(f.contract);
  o.require(a.state_count() == 4, "aut state count " + std::to_string(a.state_count()));
  o.require(is_deterministic_and_total(a), "aut not deterministic and total");
  const auto both = [&](LabeledEvent e, const char* x) {
    return e.contains({s.at(x), Party::zero}) && e.contains({s.at(x), Party::one});
  };
  std::vector<int> role(a.state_count(), -1);  // 0 = s0/sG, 2 = s2, 3 = sB
  role[a.initial()] = 0;
  std::vector<SymbolicAutomaton::State> work{a.initial()};
  while (!work.empty() && o.pass) {
    const auto q = work.back();
    work.pop_back();
    for (auto e : testing::all_events(s)) {
      const auto next = a.successors(q, e);
      if (next.size() != 1) {
        o.require(false, "nondeterministic step");
        break;
      }
      int want = 0;
      if (role[q] == 0) want = both(e, "a") ? 0 : 2;
      if (role[q] == 2) want = both(e, "b") ? 0 : 3;
      if (role[q] == 3) want = 3;
      if (role[next[0]] == -1) {
        role[next[0]] = want;
        work.push_back(next[0]);
      }
      o.require(role[next[0]] == want, "edge out of " + a.info(q).name + " lands in the wrong state");
      o.require(a.rejecting(next[0]) == (want == 3), "rejecting flag of " + a.info(next[0]).name);
    }
  }
  o.require(std::count(role.begin(), role.end(), 0) == 2 && std::count(role.begin(), role.end(), 2) == 1 &&
                std::count(role.begin(), role.end(), 3) == 1,
            "state roles do not match the 4-state shape");

  // The composition is exactly the lasso (s0,s0) (s1,s1) (s0,s1) (s1,s0)↺.
  const std::vector<LabeledEvent> lasso{lev(s, {"a_0", "c_1"}), lev(s, {"b_0", "b_1"}), lev(s, {"a_0", "b_1"}),
                                        lev(s, {"b_0", "c_1"})};
  const auto p = moore_product(m0, m1, s);
  o.require(p.state_count() == 4 && p.edge_count() == 4, "product is not a 4-state lasso");
  auto r = run(p, lasso);
  const std::vector<std::string> names{"(s0,s0)", "(s1,s1)", "(s0,s1)", "(s1,s0)", "(s1,s0)"};
  o.require(r.path.size() == 5, "lasso does not replay in the product");
  for (std::size_t k = 0; k < r.path.size() && k < names.size(); ++k)
    o.require(p.info(r.path[k]).name == names[k], "product state " + std::to_string(k));

  auto cx = model_check(m0, m1, f.contract);
  o.require(cx && cx->trace == lasso && cx->violation_index == 3, "model_check counterexample");
  auto b1 = blame_check(m0, m1, f.contract, Party::one);
  o.require(b1 && b1->blamed == PartySet::of(Party::one), "blame_check(1) should find a counterexample");
  o.require(!blame_check(m0, m1, f.contract, Party::zero), "blame_check(0) should be Ok");
  return o;
}

// 2-4 -----------------------------------------------------------------------

Outcome robots_goldens() {
  Outcome o;
  auto f = load_contract(data + "/collab_robot.cdl");
  auto x = load_trace(data + "/robots_decline.json", f.alphabet);
  auto y = load_trace(data + "/robots_no_lift.json", f.alphabet);
  o.require(evaluate(f.contract, x) == Verdict::violated_at(3), "verdict " + to_string(evaluate(f.contract, x)));
  o.require(blame(f.contract, x) == BlameVerdict{3, PartySet::of(Party::one)}, "blame should be {1}");
  o.require(blame(f.contract, y) == BlameVerdict{3, PartySet::of(Party::zero)}, "variant blame should be {0}");
  return o;
}

Outcome score_golden() {
  Outcome o;
  auto f = load_contract(data + "/collab_robot.cdl");
  auto x = load_trace(data + "/robots_permissive.json", f.alphabet);
  const auto s0 = score(f.contract, x, 0, Party::zero), s1 = score(f.contract, x, 0, Party::one);
  o.require(s0.score == 1, "party 0 score " + std::to_string(s0.score));
  o.require(s1.score == 0, "party 1 score " + std::to_string(s1.score));
  return o;
}

Outcome conflict_goldens() {
  Outcome o;
  auto f = load_contract(data + "/conflict.cdl");
  auto g = load_contract(data + "/conflict_after.cdl");
  o.require(conflict(f.contract->lhs, f.contract->rhs, Interaction()), "O/F pair should conflict at once");
  const ActionId a = g.alphabet.at("a");
  Interaction step;
  step.push_back(Event{a}, Event{a});
  o.require(!conflict(g.contract->lhs, g.contract->rhs, Interaction()), "pair should not conflict at once");
  o.require(conflict(g.contract->lhs, g.contract->rhs, step), "pair should conflict after {a_0,a_1}");

  for (const auto& [file, prefix] : {std::pair{f, LabeledTrace{}}, std::pair{g, LabeledTrace{to_labeled(step)}}}) {
    const auto b = blaut(file.contract);
    const auto r = run(b, prefix);
    for (auto e : testing::all_events(file.alphabet)) {
      const auto next = b.successors(r.path.back(), e);
      o.require(next.size() == 1 && b.rejecting(next[0]) && b.info(next[0]).blame.empty(),
                "blame automaton does not route the conflict to the untagged bad state");
    }
  }
  return o;
}

// 5-7 -----------------------------------------------------------------------

struct Grid {
  std::size_t pairs = 0, violated = 0;
  Outcome theorem, blame, lemmas;
};

Grid run_grid() {
  Grid g;
  testing::Rng rng(20241015);
  const auto& sigma = testing::ab();
  for (int k = 0; k < kGridContracts; ++k) {
    const auto c = testing::random_contract(rng, sigma, {.max_size = kGridMaxSize});
    const auto text = to_string(c, sigma);
    const auto a = aut(c);
    const auto b = blaut(c);
    for (int t = 0; t < kGridInteractionsPerContract; ++t) {
      const auto x = testing::random_interaction(rng, sigma, 1 + rng() % kGridMaxLength);
      const auto lx = to_labeled(x);
      ++g.pairs;
      const auto where = " on " + text;

      const auto v = evaluate(c, x);
      const auto ra = run(a, lx);
      const bool viol = v.kind == VerdictKind::violated;
      g.violated += viol;
      g.theorem.require(ra.first_rejecting.has_value() == viol && (!viol || *ra.first_rejecting == v.index),
                        "rejection index differs" + where);

      const auto bv = blame(c, x);
      const auto rb = run(b, lx);
      g.blame.require(bv.has_value() == rb.first_rejecting.has_value(), "blame automaton verdict differs" + where);
      if (bv && rb.first_rejecting)
        g.blame.require(bv->blamed == b.info(rb.path[*rb.first_rejecting + 1]).blame, "blamed set differs" + where);

      Evaluator ev(c, x);
      Blamer bl(ev);
      const auto& sets = ev.sets(0);
      g.lemmas.require(sets.sat.size() <= 1 && sets.viol.size() <= 1, "more than one deciding index" + where);
      g.lemmas.require(sets.sat.empty() || sets.viol.empty(), "both satisfied and violated" + where);
      for (std::size_t j = 0; j < x.size(); ++j) {
        const auto who = bl.blamed(0, j);
        const bool vj = std::binary_search(sets.viol.begin(), sets.viol.end(), j);
        const bool sj = std::binary_search(sets.sat.begin(), sets.sat.end(), j);
        g.lemmas.require(who.empty() || vj, "blame without violation" + where);
        g.lemmas.require(!sj || who.empty(), "blame after satisfaction" + where);
      }
      const auto bound = norm_count(unfold_recursion(c, x.size()));
      const auto want = v.kind == VerdictKind::satisfied ? ScoreStatus::sat
                        : viol                           ? ScoreStatus::viol
                                                         : ScoreStatus::unknown;
      for (Party p : {Party::zero, Party::one}) {
        const auto s = score(c, x, 0, p);
        g.lemmas.require(s.status == want && (want == ScoreStatus::unknown || s.index == v.index),
                         "score status differs" + where);
        g.lemmas.require(s.score <= bound, "score above the norm bound" + where);
      }
    }
  }
  return g;
}

// 8 -------------------------------------------------------------------------

Outcome regex_oracle() {
  Outcome o;
  testing::Rng rng(8080);
  const auto& sigma = testing::ab();
  const auto events = testing::all_events(sigma);
  std::size_t checked = 0;
  for (int k = 0; k < kRegexes && o.pass; ++k) {
    const auto re = testing::random_regex(rng, sigma, kRegexDepth);
    const auto d = compile_regex(re);
    std::vector<LabeledEvent> t;
    std::function<void()> walk = [&] {
      if (!t.empty()) {
        ++checked;
        o.require(classify(d, t) == oracle::classify(re, t), "disagreement on " + to_string(re, sigma));
      }
      if (t.size() == kRegexTraceLength) return;
      for (auto e : events) {
        t.push_back(e);
        walk();
        t.pop_back();
      }
    };
    walk();
  }
  if (o.pass) o.detail = std::to_string(checked) + " traces";
  return o;
}

// 9 -------------------------------------------------------------------------

Outcome linear_growth() {
  Outcome o;
  testing::Rng rng(6464);
  const auto& sigma = testing::ab();
  std::vector<std::pair<double, double>> samples, maxima;
  for (std::size_t n = 4; n <= kMaxN; n += 4) {
    double top = 0;
    for (int k = 0; k < kSizeSamplesPerN; ++k) {
      const auto c = testing::random_contract_of_size(rng, sigma, n, {.max_size = n, .regexes = false});
      const double states = static_cast<double>(aut(c).state_count());
      samples.emplace_back(static_cast<double>(contract_size(c)), states);
      top = std::max(top, states);
    }
    maxima.emplace_back(static_cast<double>(n), top);
  }
  // Linear bound states <= slope * n, least-squares fitted through the origin
  // to the per-size maxima, so it tracks the upper envelope rather than the mean.
  double sxx = 0, sxy = 0;
  for (auto [x, y] : maxima) sxx += x * x, sxy += x * y;
  const double slope = sxy / sxx;
  double worst = 0;
  for (auto [x, y] : samples) worst = std::max(worst, y / (slope * x));
  o.require(worst <= kLinearFactor, "a sample is " + std::to_string(worst) + "x the fitted line");
  char buf[160];
  std::snprintf(buf, sizeof buf, "fit states <= %.3f*n over %zu samples; worst sample %.2fx the fit", slope,
                samples.size(), worst);
  o.detail = o.pass ? buf : o.detail + "; " + buf;
  return o;
}

}  // namespace

int main() {
  report(1, "relay contract: automaton shape, product lasso, model and blame checking", relay_end_to_end);
  report(2, "robot goldens: violated at 3, blame {1}, variant blame {0}", robots_goldens);
  report(3, "mistake score golden: party 0 scores 1, party 1 scores 0", score_golden);
  report(4, "conflict goldens and blameless routing", conflict_goldens);

  Grid grid;
  const auto t0 = std::chrono::steady_clock::now();
  grid = run_grid();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string note = std::to_string(grid.pairs) + " pairs, " + std::to_string(grid.violated) + " violated";
  auto with_note = [&](Outcome o) {
    o.detail = o.pass ? note : o.detail;
    return o;
  };
  std::printf("(random grid built in %.1fs)\n", secs);
  const bool big_enough = grid.pairs >= 10000;
  grid.theorem.require(big_enough, "grid too small");
  report(5, "automaton first rejection equals the violation index", [&] { return with_note(grid.theorem); });
  report(6, "blame automaton tag equals the blamed set", [&] { return with_note(grid.blame); });
  report(7, "uniqueness, disjointness, blame and score properties", [&] { return with_note(grid.lemmas); });

  report(8, "regex classification agrees with the set-definition oracle", regex_oracle);
  report(9, "regex-free automata grow linearly in contract size", linear_growth);
  return failures == 0 ? 0 : 1;
}
