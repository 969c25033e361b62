#include "cdl/quant.hpp"

#include <stdexcept>

#include "cdl/blame.hpp"
#include "cdl/wellformed.hpp"

namespace cdl {

const char* to_string(ScoreStatus s) noexcept {
  switch (s) {
    case ScoreStatus::sat: return "satisfied";
    case ScoreStatus::viol: return "violated";
    case ScoreStatus::unknown: return "unknown";
  }
  return "?";
}

namespace {

using Entry = Scorer::Entry;
using Status = Scorer::Status;

Entry make(Status s, std::size_t at, unsigned score) { return {s, s == Status::unknown ? Status::unknown : s, at, score}; }

bool decided(const Entry& e) { return e.status != Status::unknown; }

// The entry one step after a decision: same outcome, marked as already decided.
Entry settled(const Entry& e) { return {Status::done, e.final_status, e.decided_at, e.score}; }

bool final_sat(const Entry& e) { return decided(e) && e.final_status == Status::sat; }

void collect_recs(const Contract& c, std::map<std::string, const ContractNode*>& out) {
  if (c->kind == ContractKind::recursion) out[c->name] = c.get();
  if (c->lhs) collect_recs(c->lhs, out);
  if (c->rhs) collect_recs(c->rhs, out);
}

}  // namespace

Scorer::Scorer(Contract root, const Interaction& x, Party p)
    : root_(std::move(root)), x_(x), labeled_(to_labeled(x)), p_(p) {
  require_wellformed(root_);
  collect_recs(root_, recs_);
}

const std::vector<RexClass>& Scorer::classes(const Regex& re, std::size_t i) {
  auto key = std::make_pair(static_cast<const void*>(re.get()), i);
  auto it = classes_.find(key);
  if (it != classes_.end()) return it->second;
  std::span<const LabeledEvent> rest(labeled_.data() + i, labeled_.size() - i);
  return classes_.emplace(key, classify_prefixes(cache_.get(re), rest)).first->second;
}

bool Scorer::conflict_before(const ContractNode* c, std::size_t i, std::size_t j) {
  auto prefix = slice(x_, i, static_cast<std::ptrdiff_t>(j) - 1);
  try {
    return conflict(c->lhs, c->rhs, prefix);
  } catch (const ConflictPreconditionError&) {
    return false;
  }
}

const std::vector<Entry>& Scorer::row(const ContractNode* c, std::size_t i) {
  auto key = std::make_pair(static_cast<const void*>(c), i);
  if (auto it = rows_.find(key); it != rows_.end()) return it->second;
  auto r = compute(c, i);
  return rows_.emplace(key, std::move(r)).first->second;
}

Entry Scorer::entry(const ContractNode* c, std::size_t i, std::ptrdiff_t j) {
  if (j < static_cast<std::ptrdiff_t>(i) || i >= x_.size()) return {};
  return row(c, i).at(static_cast<std::size_t>(j) - i);
}

std::vector<Entry> Scorer::compute(const ContractNode* c, std::size_t i) {
  const std::size_t n = x_.size();
  std::vector<Entry> out;
  if (i >= n) return out;
  out.reserve(n - i);
  auto prev = [&]() -> const Entry& { return out.back(); };
  const auto J = [](std::size_t j) { return static_cast<std::ptrdiff_t>(j); };

  for (std::size_t j = i; j < n; ++j) {
    // Once decided, every later slice just carries the outcome.
    if (j > i && decided(prev())) {
      out.push_back(settled(prev()));
      continue;
    }
    Entry e;
    switch (c->kind) {
      case ContractKind::top: e = make(Status::sat, j, 0); break;
      case ContractKind::bottom: e = make(Status::viol, j, 0); break;
      case ContractKind::obligation:
      case ContractKind::prohibition:
      case ContractKind::permission: {
        const auto e0 = x_.at(Party::zero, j), e1 = x_.at(Party::one, j);
        if (evaluate_norm(*c, e0, e1) == NormStatus::sat)
          e = make(Status::sat, j, 0);
        else
          e = make(Status::viol, j, norm_blame(*c, e0, e1).contains(p_) ? 1u : 0u);
        break;
      }

      case ContractKind::trigger: {
        const auto& cls = classes(c->regex, i);
        std::optional<std::size_t> k;
        for (std::size_t m = i; m <= j; ++m)
          if (cls[m - i] == RexClass::tight_match) k = m;
        if (k && *k == j)
          e = make(Status::unknown, j, 0);
        else if (k) {
          e = entry(c->lhs.get(), *k + 1, J(j));
        } else if (cls[j - i] == RexClass::fell_out)
          e = make(Status::sat, j, 0);
        else
          e = make(Status::unknown, j, 0);
        break;
      }

      case ContractKind::guard: {
        const auto cls = classes(c->regex, i)[j - i];
        const auto before = entry(c->lhs.get(), i, J(j) - 1);
        if ((cls == RexClass::fell_out || cls == RexClass::tight_match) && before.status == Status::unknown) {
          e = make(Status::sat, j, before.score);
        } else {
          // Still inside the prefix language: the body decides.
          e = entry(c->lhs.get(), i, J(j));
        }
        break;
      }

      case ContractKind::conjunction: {
        const auto a = entry(c->lhs.get(), i, J(j));
        const auto b = entry(c->rhs.get(), i, J(j));
        if (a.status == Status::viol || b.status == Status::viol) {
          unsigned s;
          if (conflict_before(c, i, j)) {
            s = entry(c->lhs.get(), i, J(j) - 1).score + entry(c->rhs.get(), i, J(j) - 1).score;
          } else {
            s = a.score + b.score;
          }
          e = make(Status::viol, j, s);
        } else if (final_sat(a) && final_sat(b)) {
          e = make(Status::sat, j, a.score + b.score);
        } else {
          e = make(Status::unknown, j, a.score + b.score);
        }
        break;
      }

      case ContractKind::sequence: {
        const auto a = entry(c->lhs.get(), i, J(j));
        if (a.status == Status::viol || a.status == Status::unknown) {
          e = make(a.status, j, a.score);
        } else if (a.status == Status::sat) {
          e = make(Status::unknown, j, a.score);  // C' has seen nothing yet
        } else {
          const auto b = entry(c->rhs.get(), a.decided_at + 1, J(j));
          const Status s = b.status == Status::done ? b.final_status : b.status;
          e = make(s, j, a.score + b.score);
        }
        break;
      }

      case ContractKind::reparation: {
        const auto a = entry(c->lhs.get(), i, J(j));
        if (a.status == Status::sat || a.status == Status::unknown) {
          e = make(a.status, j, a.score);
        } else if (a.status == Status::viol) {
          e = make(Status::unknown, j, a.score);  // reparation has seen nothing yet
        } else {
          const auto b = entry(c->rhs.get(), a.decided_at + 1, J(j));
          const Status s = b.status == Status::done ? b.final_status : b.status;
          e = make(s, j, a.score + b.score);
        }
        break;
      }

      case ContractKind::recursion: e = entry(c->lhs.get(), i, J(j)); break;
      case ContractKind::variable: {
        auto it = recs_.find(c->name);
        if (it == recs_.end()) throw std::logic_error("unbound recursion variable " + c->name);
        e = entry(it->second, i, J(j));
        break;
      }
    }
    // Sub-rows may report an outcome decided earlier; this row decides now.
    if (e.status == Status::done) e.status = e.final_status;
    if (decided(e)) e.decided_at = j;
    out.push_back(e);
  }
  return out;
}

ScoreResult Scorer::result(std::size_t i) {
  const std::size_t n = x_.size();
  if (i > n) throw std::out_of_range("evaluation start past the interaction");
  if (i == n) return {ScoreStatus::unknown, 0, p_, i};
  for (const auto& e : row(root_.get(), i)) {
    if (e.status == Status::sat) return {ScoreStatus::sat, e.score, p_, e.decided_at};
    if (e.status == Status::viol) return {ScoreStatus::viol, e.score, p_, e.decided_at};
  }
  return {ScoreStatus::unknown, row(root_.get(), i).back().score, p_, n - 1};
}

ScoreResult score(const Contract& c, const Interaction& x, std::size_t i, Party p) {
  Scorer s(c, x, p);
  return s.result(i);
}

}  // namespace cdl
