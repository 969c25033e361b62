#include "cdl/blame.hpp"

#include <algorithm>

namespace cdl {

PartySet norm_blame(const ContractNode& n, Event e0, Event e1) {
  const Party q = n.party;
  const Event mine = q == Party::zero ? e0 : e1;
  const Event theirs = q == Party::zero ? e1 : e0;
  const bool p = mine.contains(n.action), o = theirs.contains(n.action);
  switch (n.kind) {
    case ContractKind::obligation:
      if (!p) return PartySet::of(q);
      if (!o) return PartySet::of(other(q));
      return {};
    case ContractKind::prohibition: return p && o ? PartySet::of(q) : PartySet{};
    case ContractKind::permission: return p && !o ? PartySet::of(other(q)) : PartySet{};
    default: return {};
  }
}

PartySet Blamer::blamed(const ContractNode* c, std::size_t i, std::size_t j) {
  Key k{c, i, j};
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  auto r = compute(c, i, j);
  memo_[k] = r;
  return r;
}

PartySet Blamer::compute(const ContractNode* c, std::size_t i, std::size_t j) {
  const auto& x = ev_.interaction();
  if (j < i || j >= x.size()) return {};
  switch (c->kind) {
    case ContractKind::top:
    case ContractKind::bottom: return {};
    case ContractKind::obligation:
    case ContractKind::prohibition:
    case ContractKind::permission:
      if (i != j) return {};
      return norm_blame(*c, x.at(Party::zero, i), x.at(Party::one, i));

    case ContractKind::trigger: {
      auto k = ev_.tight_match(c->regex, i);
      if (!k || *k >= j) return {};
      return blamed(c->lhs.get(), *k + 1, j);
    }

    case ContractKind::guard:
      if (ev_.regex_class(c->regex, i, j) != RexClass::prefix) return {};
      return blamed(c->lhs.get(), i, j);

    case ContractKind::conjunction: {
      const PartySet cand = blamed(c->lhs.get(), i, j) | blamed(c->rhs.get(), i, j);
      if (cand.empty()) return {};
      // No earlier violation of the conjunction at all, not only none blamed on
      // the other party: otherwise blame could outlive the violation it names.
      const auto& viol = ev_.sets(c, i).viol;
      if (!viol.empty() && viol.front() < j) return {};
      if (conflict_after(c, i, static_cast<std::ptrdiff_t>(j) - 1)) return {};
      return cand;
    }

    case ContractKind::sequence: {
      PartySet out = blamed(c->lhs.get(), i, j);
      for (auto k : ev_.sets(c->lhs.get(), i).sat)
        if (k < j) out |= blamed(c->rhs.get(), k + 1, j);
      return out;
    }

    case ContractKind::reparation: {
      PartySet out;
      for (auto k : ev_.sets(c->lhs.get(), i).viol)
        if (k < j) out |= blamed(c->rhs.get(), k + 1, j);
      return out;
    }

    case ContractKind::recursion: return blamed(c->lhs.get(), i, j);
    case ContractKind::variable: return blamed(ev_.resolve(c), i, j);
  }
  return {};
}

namespace {

// Decided by the end of the prefix: nullopt. Otherwise whether every extension violates.
std::optional<bool> conflict_on(const Contract& conj, const Interaction& prefix,
                                const std::shared_ptr<RegexCache>& cache) {
  const auto mask = observed_atoms(conj);
  const auto last = static_cast<std::uint32_t>(prefix.size());
  std::optional<bool> result = true;
  bool first = true;
  for_each_minterm(mask, [&](LabeledEvent e) {
    if (!result || !*result) return;
    Interaction y = prefix;
    y.push_back(e.project(Party::zero), e.project(Party::one));
    Evaluator ev(Evaluator::Unchecked{}, conj, y, cache);
    const auto& s = ev.sets(0);
    if (first) {
      first = false;
      const bool decided = (!s.sat.empty() && s.sat.front() < last) || (!s.viol.empty() && s.viol.front() < last);
      if (decided) {
        result.reset();
        return;
      }
    }
    if (!std::binary_search(s.viol.begin(), s.viol.end(), last)) result = false;
  });
  return result;
}

}  // namespace

bool Blamer::conflict_after(const ContractNode* conj, std::size_t i, std::ptrdiff_t end) {
  Key k{conj, i, static_cast<std::size_t>(end + 1)};
  if (auto it = conflicts_.find(k); it != conflicts_.end()) return it->second;
  // Aliasing pointer: shares ownership with the root, points at the subterm.
  Contract sub(ev_.root(), conj);
  auto r = conflict_on(sub, slice(ev_.interaction(), i, end), ev_.cache());
  const bool c = r.value_or(false);
  conflicts_[k] = c;
  return c;
}

std::optional<BlameVerdict> blame(const Contract& c, const Interaction& x, std::size_t i) {
  if (i > x.size()) throw std::out_of_range("evaluation start past the interaction");
  Evaluator ev(c, x);
  const auto& s = ev.sets(i);
  if (s.viol.empty()) return std::nullopt;
  if (!s.sat.empty() && s.sat.front() <= s.viol.front()) return std::nullopt;
  const std::size_t j = s.viol.front();
  Blamer b(ev);
  return BlameVerdict{j, b.blamed(i, j)};
}

bool conflict(const Contract& c, const Contract& c2, const Interaction& prefix) {
  auto both = conj(c, c2);
  auto r = conflict_on(both, prefix, std::make_shared<RegexCache>());
  if (!r) throw ConflictPreconditionError("conjunction is already decided on the given prefix");
  return *r;
}

}  // namespace cdl
