#include "cdl/rex.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cdl/wellformed.hpp"

namespace cdl {

const char* to_string(RexClass c) noexcept {
  switch (c) {
    case RexClass::tight_match: return "tight_match";
    case RexClass::prefix: return "prefix";
    case RexClass::fell_out: return "fell_out";
    case RexClass::past: return "past";
  }
  return "?";
}

namespace {

using PosSet = std::vector<std::uint32_t>;  // sorted

PosSet unite(const PosSet& a, const PosSet& b) {
  PosSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Position automaton: position 0 is the start, 1..m are regex atoms.
struct Glushkov {
  std::vector<Guard> guard{Guard::truth()};
  std::vector<PosSet> follow{{}};
  std::vector<bool> last{false};

  struct Info {
    PosSet first, last;
  };

  Info build(const Regex& r) {
    switch (r->kind) {
      case RegexKind::atom: {
        auto p = static_cast<std::uint32_t>(guard.size());
        guard.push_back(r->atom);
        follow.emplace_back();
        last.push_back(false);
        return {{p}, {p}};
      }
      case RegexKind::choice: {
        auto a = build(r->lhs);
        auto b = build(r->rhs);
        return {unite(a.first, b.first), unite(a.last, b.last)};
      }
      case RegexKind::sequence: {
        auto a = build(r->lhs);
        auto b = build(r->rhs);
        for (auto x : a.last) follow[x] = unite(follow[x], b.first);
        return {a.first, b.last};
      }
      case RegexKind::plus: {
        auto a = build(r->lhs);
        for (auto x : a.last) follow[x] = unite(follow[x], a.first);
        return a;
      }
    }
    return {};
  }
};

}  // namespace

TightDfa compile_regex(const Regex& re) {
  if (!regex_nonempty(re)) throw std::invalid_argument("regular expression denotes the empty language");
  Glushkov g;
  auto info = g.build(re);
  g.follow[0] = info.first;
  for (auto x : info.last) g.last[x] = true;

  // Keep only positions from which a match is still reachable, so that every
  // nonempty subset really is a strict prefix of some tight match.
  const auto m = g.guard.size();
  std::vector<bool> useful(m, false);
  for (std::size_t p = 1; p < m; ++p) useful[p] = g.last[p] && satisfiable(g.guard[p]);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t p = 1; p < m; ++p) {
      if (useful[p] || !satisfiable(g.guard[p])) continue;
      for (auto q : g.follow[p])
        if (useful[q]) {
          useful[p] = grew = true;
          break;
        }
    }
  }
  for (auto& f : g.follow) std::erase_if(f, [&](std::uint32_t q) { return !useful[q]; });

  TightDfa d;
  std::map<PosSet, TightDfa::State> ids;
  std::vector<PosSet> pending;
  // Real subsets get ids in discovery order; the two sinks are appended last.
  ids[PosSet{0}] = 0;
  pending.push_back(PosSet{0});

  constexpr TightDfa::State match_mark = 0xfffffffeu, fail_mark = 0xffffffffu;
  std::vector<std::vector<std::pair<TightDfa::State, std::vector<std::vector<Guard>>>>> grouped;
  std::vector<std::uint64_t> masks;

  for (std::size_t k = 0; k < pending.size(); ++k) {
    const PosSet cur = pending[k];
    PosSet cand;
    for (auto q : cur) cand = unite(cand, g.follow[q]);
    std::uint64_t mask = 0;
    for (auto p : cand) mask |= g.guard[p].atom_mask();

    std::vector<std::pair<TightDfa::State, std::vector<std::vector<Guard>>>> out;
    auto add = [&](TightDfa::State t, LabeledEvent e) {
      std::vector<Guard> lits;
      for (unsigned bit = 0; bit < 64; ++bit) {
        if (!((mask >> bit) & 1u)) continue;
        auto lit = Guard::atom(LabeledAction{bit / 2, party_from_index(static_cast<int>(bit % 2))});
        lits.push_back((e.bits() >> bit) & 1u ? lit : negate(lit));
      }
      for (auto& [tgt, terms] : out)
        if (tgt == t) {
          terms.push_back(std::move(lits));
          return;
        }
      out.push_back({t, {std::move(lits)}});
    };
    for_each_minterm(mask, [&](LabeledEvent e) {
      PosSet next;
      bool hit = false;
      for (auto p : cand)
        if (g.guard[p].holds(e)) {
          next.push_back(p);
          hit = hit || g.last[p];
        }
      if (hit) return add(match_mark, e);
      if (next.empty()) return add(fail_mark, e);
      auto [it, fresh] = ids.try_emplace(next, static_cast<TightDfa::State>(pending.size()));
      if (fresh) pending.push_back(next);
      add(it->second, e);
    });
    grouped.push_back(std::move(out));
    masks.push_back(mask);
  }

  const auto n = static_cast<TightDfa::State>(pending.size());
  d.matched_ = n;
  d.failed_ = n + 1;
  d.edges_.resize(n + 2);
  for (TightDfa::State s = 0; s < n; ++s) {
    for (auto& [tgt, terms] : grouped[s]) {
      const auto target = tgt == match_mark ? d.matched_ : tgt == fail_mark ? d.failed_ : tgt;
      // Accepted set: minterms routed to this target.
      std::vector<std::uint64_t> accepted;
      for (const auto& lits : terms) {
        std::uint64_t bits = 0;
        for (const auto& l : lits)
          if (l.kind() == Guard::Kind::atom) bits |= std::uint64_t{1} << l.atom_value().bit();
        accepted.push_back(bits);
      }
      std::sort(accepted.begin(), accepted.end());
      auto guard = simplify_cover(terms, masks[s], [&](LabeledEvent e) {
        return std::binary_search(accepted.begin(), accepted.end(), e.bits() & masks[s]);
      });
      d.edges_[s].push_back({guard, target});
    }
  }
  d.edges_[d.matched_].push_back({Guard::truth(), d.matched_});
  d.edges_[d.failed_].push_back({Guard::truth(), d.failed_});
  return d;
}

TightDfa::State TightDfa::step(State s, LabeledEvent e) const {
  for (const auto& edge : edges_.at(s))
    if (edge.guard.holds(e)) return edge.target;
  throw std::logic_error("tight DFA is not total");
}

std::vector<RexClass> classify_prefixes(const TightDfa& d, std::span<const LabeledEvent> t) {
  std::vector<RexClass> out;
  out.reserve(t.size());
  auto s = d.initial();
  for (auto e : t) {
    const auto prev = s;
    s = d.step(s, e);
    if (prev == d.matched() || prev == d.failed())
      out.push_back(RexClass::past);
    else if (s == d.matched())
      out.push_back(RexClass::tight_match);
    else if (s == d.failed())
      out.push_back(RexClass::fell_out);
    else
      out.push_back(RexClass::prefix);
  }
  return out;
}

RexClass classify(const TightDfa& d, std::span<const LabeledEvent> t) {
  if (t.empty()) throw std::invalid_argument("classify needs a nonempty trace");
  return classify_prefixes(d, t).back();
}

}  // namespace cdl
