#include "cdl/semantics.hpp"

#include <algorithm>
#include <stdexcept>

#include "cdl/wellformed.hpp"

namespace cdl {

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::satisfied: return "satisfied at " + std::to_string(v.index);
    case VerdictKind::violated: return "violated at " + std::to_string(v.index);
    case VerdictKind::unknown: return "unknown";
  }
  return {};
}

NormStatus evaluate_norm(const ContractNode& n, Event e0, Event e1) {
  const Event mine = n.party == Party::zero ? e0 : e1;
  const Event theirs = n.party == Party::zero ? e1 : e0;
  const bool p = mine.contains(n.action), q = theirs.contains(n.action);
  bool ok = false;
  switch (n.kind) {
    case ContractKind::obligation: ok = p && q; break;
    case ContractKind::prohibition: ok = !p || !q; break;
    case ContractKind::permission: ok = !p || q; break;
    default: throw std::invalid_argument("evaluate_norm needs a norm");
  }
  return ok ? NormStatus::sat : NormStatus::viol;
}

const TightDfa& RegexCache::get(const Regex& re) {
  auto it = dfas_.find(re.get());
  if (it == dfas_.end()) it = dfas_.emplace(re.get(), std::make_pair(re, compile_regex(re))).first;
  return it->second.second;
}

Evaluator::Evaluator(Contract root, const Interaction& x, std::shared_ptr<RegexCache> cache)
    : Evaluator(Unchecked{}, (require_wellformed(root), root), x, std::move(cache)) {}

Evaluator::Evaluator(Unchecked, Contract root, const Interaction& x, std::shared_ptr<RegexCache> cache)
    : root_(std::move(root)), x_(x), labeled_(to_labeled(x)), cache_(std::move(cache)) {
  if (!cache_) cache_ = std::make_shared<RegexCache>();
  index_recursions(root_);
}

void Evaluator::index_recursions(const Contract& c) {
  if (c->kind == ContractKind::recursion) recs_[c->name] = c.get();
  if (c->lhs) index_recursions(c->lhs);
  if (c->rhs) index_recursions(c->rhs);
}

const ContractNode* Evaluator::resolve(const ContractNode* var) const {
  auto it = recs_.find(var->name);
  if (it == recs_.end()) throw std::logic_error("unbound recursion variable " + var->name);
  return it->second;
}

const std::vector<RexClass>& Evaluator::classes(const Regex& re, std::size_t i) {
  Key k{re.get(), i};
  auto it = classes_.find(k);
  if (it != classes_.end()) return it->second;
  const auto& dfa = cache_->get(re);
  std::span<const LabeledEvent> rest(labeled_.data() + i, labeled_.size() - i);
  return classes_.emplace(k, classify_prefixes(dfa, rest)).first->second;
}

RexClass Evaluator::regex_class(const Regex& re, std::size_t i, std::size_t j) { return classes(re, i).at(j - i); }

std::optional<std::size_t> Evaluator::tight_match(const Regex& re, std::size_t i) {
  const auto& cls = classes(re, i);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    if (cls[k] == RexClass::tight_match) return i + k;
    if (cls[k] != RexClass::prefix) return std::nullopt;
  }
  return std::nullopt;
}

const Evaluator::Sets& Evaluator::sets(const ContractNode* c, std::size_t i) {
  Key k{c, i};
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  auto s = compute(c, i);
  return memo_.emplace(k, std::move(s)).first->second;
}

namespace {

void add(IndexSet& s, const IndexSet& more) {
  IndexSet out;
  std::set_union(s.begin(), s.end(), more.begin(), more.end(), std::back_inserter(out));
  s = std::move(out);
}

bool has(const IndexSet& s, std::size_t j) { return std::binary_search(s.begin(), s.end(), j); }

}  // namespace

Evaluator::Sets Evaluator::compute(const ContractNode* c, std::size_t i) {
  Sets out;
  const std::size_t n = x_.size();
  if (i >= n) return out;
  const auto at = static_cast<std::uint32_t>(i);

  switch (c->kind) {
    case ContractKind::top: out.sat = {at}; break;
    case ContractKind::bottom: out.viol = {at}; break;
    case ContractKind::obligation:
    case ContractKind::prohibition:
    case ContractKind::permission:
      if (evaluate_norm(*c, x_.at(Party::zero, i), x_.at(Party::one, i)) == NormStatus::sat)
        out.sat = {at};
      else
        out.viol = {at};
      break;

    case ContractKind::trigger: {
      const auto& cls = classes(c->regex, i);
      for (std::size_t k = 0; k < cls.size(); ++k)
        if (cls[k] == RexClass::fell_out) out.sat.push_back(static_cast<std::uint32_t>(i + k));
      if (auto k = tight_match(c->regex, i); k && *k + 1 < n) {
        const auto& body = sets(c->lhs.get(), *k + 1);
        add(out.sat, body.sat);
        add(out.viol, body.viol);
      }
      break;
    }

    case ContractKind::guard: {
      const auto& cls = classes(c->regex, i);
      const auto& body = sets(c->lhs.get(), i);
      // Earliest point at which the body is decided either way.
      std::size_t decided = n;
      if (!body.sat.empty()) decided = std::min<std::size_t>(decided, body.sat.front());
      if (!body.viol.empty()) decided = std::min<std::size_t>(decided, body.viol.front());
      for (std::size_t j = i; j < n; ++j) {
        const auto k = cls[j - i];
        const auto jj = static_cast<std::uint32_t>(j);
        if ((k == RexClass::fell_out || k == RexClass::tight_match) && decided >= j)
          out.sat.push_back(jj);
        else if (k == RexClass::prefix && has(body.sat, j))
          out.sat.push_back(jj);
        if (k == RexClass::prefix && has(body.viol, j)) out.viol.push_back(jj);
      }
      break;
    }

    case ContractKind::conjunction: {
      const auto& a = sets(c->lhs.get(), i);
      const auto& b = sets(c->rhs.get(), i);
      for (auto k : a.sat)
        for (auto l : b.sat) out.sat.push_back(std::max(k, l));
      std::sort(out.sat.begin(), out.sat.end());
      out.sat.erase(std::unique(out.sat.begin(), out.sat.end()), out.sat.end());
      IndexSet v = a.viol;
      add(v, b.viol);
      if (!v.empty()) out.viol = {v.front()};
      break;
    }

    case ContractKind::sequence: {
      const auto& a = sets(c->lhs.get(), i);
      out.viol = a.viol;
      for (auto k : a.sat) {
        if (k + 1 >= n) continue;
        const auto& b = sets(c->rhs.get(), k + 1);
        add(out.sat, b.sat);
        add(out.viol, b.viol);
      }
      break;
    }

    case ContractKind::reparation: {
      const auto& a = sets(c->lhs.get(), i);
      out.sat = a.sat;
      for (auto k : a.viol) {
        if (k + 1 >= n) continue;
        const auto& b = sets(c->rhs.get(), k + 1);
        add(out.sat, b.sat);
        add(out.viol, b.viol);
      }
      break;
    }

    case ContractKind::recursion: out = sets(c->lhs.get(), i); break;
    case ContractKind::variable: out = sets(resolve(c), i); break;
  }
  return out;
}

Verdict evaluate(const Contract& c, const Interaction& x, std::size_t i) {
  if (i > x.size()) throw std::out_of_range("evaluation start past the interaction");
  Evaluator ev(c, x);
  const auto& s = ev.sets(i);
  const bool sat = !s.sat.empty(), viol = !s.viol.empty();
  if (sat && (!viol || s.sat.front() <= s.viol.front())) return Verdict::satisfied_at(s.sat.front());
  if (viol) return Verdict::violated_at(s.viol.front());
  return Verdict::unknown();
}

}  // namespace cdl
