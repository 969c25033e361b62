#include "cdl/wellformed.hpp"

#include <set>

namespace cdl {

namespace {

struct Occurrence {
  std::string path;
  bool tail;
  bool after_reparation;
};

void collect_occurrences(const Contract& c, const std::string& x, const std::string& path, bool tail,
                         bool after_rep, std::vector<Occurrence>& out) {
  switch (c->kind) {
    case ContractKind::variable:
      if (c->name == x) out.push_back({path, tail, after_rep});
      return;
    case ContractKind::sequence:
      collect_occurrences(c->lhs, x, path + ".lhs", false, false, out);
      collect_occurrences(c->rhs, x, path + ".rhs", tail, false, out);
      return;
    case ContractKind::reparation:
      collect_occurrences(c->lhs, x, path + ".lhs", false, false, out);
      collect_occurrences(c->rhs, x, path + ".rhs", tail, true, out);
      return;
    case ContractKind::trigger:
      collect_occurrences(c->lhs, x, path + ".body", tail, false, out);
      return;
    case ContractKind::conjunction:
      collect_occurrences(c->lhs, x, path + ".lhs", false, false, out);
      collect_occurrences(c->rhs, x, path + ".rhs", false, false, out);
      return;
    case ContractKind::guard:
    case ContractKind::recursion:
      collect_occurrences(c->lhs, x, path + ".body", false, false, out);
      return;
    default: return;
  }
}

class Checker {
 public:
  std::vector<WellformednessIssue> issues;

  void walk(const Contract& c, const std::string& path, bool guarded) {
    switch (c->kind) {
      case ContractKind::variable:
        if (!bound_.count(c->name)) report(path, "unbound recursion variable " + c->name);
        return;
      case ContractKind::conjunction:
      case ContractKind::sequence:
      case ContractKind::reparation:
        walk(c->lhs, path + ".lhs", guarded);
        walk(c->rhs, path + ".rhs", guarded);
        return;
      case ContractKind::trigger:
        check_regex(c->regex, path);
        walk(c->lhs, path + ".body", guarded);
        return;
      case ContractKind::guard:
        check_regex(c->regex, path);
        walk(c->lhs, path + ".body", true);
        return;
      case ContractKind::recursion: check_rec(c, path, guarded); return;
      default: return;
    }
  }

 private:
  void report(const std::string& path, std::string msg) { issues.push_back({path, std::move(msg)}); }

  void check_regex(const Regex& re, const std::string& path) {
    if (!regex_nonempty(re)) report(path, "regular expression denotes the empty language");
  }

  void check_rec(const Contract& c, const std::string& path, bool guarded) {
    const auto& x = c->name;
    if (!seen_.insert(x).second) report(path, "recursion variable " + x + " is bound more than once");

    const auto body_kind = c->lhs->kind;
    const bool body_ok = body_kind == ContractKind::sequence || body_kind == ContractKind::trigger ||
                         (guarded && body_kind == ContractKind::reparation);
    if (!body_ok) {
      report(path + ".body", guarded ? "body of rec " + x + " must be a sequence, trigger or reparation"
                                     : "body of rec " + x + " must be a sequence or trigger");
    }

    std::vector<Occurrence> occ;
    collect_occurrences(c->lhs, x, path + ".body", true, false, occ);
    if (occ.size() != 1)
      report(path, "variable " + x + " must occur exactly once in its body (found " + std::to_string(occ.size()) + ")");
    for (const auto& o : occ) {
      if (!o.tail) report(o.path, "variable " + x + " is not in tail position");
      else if (o.after_reparation && !guarded)
        report(o.path, "reparation directly before " + x + " requires the recursion to be guarded");
    }

    bound_.insert(x);
    walk(c->lhs, path + ".body", guarded);
    bound_.erase(x);
  }

  std::multiset<std::string> bound_;
  std::set<std::string> seen_;
};

}  // namespace

bool regex_nonempty(const Regex& re) {
  switch (re->kind) {
    case RegexKind::atom: return satisfiable(re->atom);
    case RegexKind::choice: return regex_nonempty(re->lhs) || regex_nonempty(re->rhs);
    case RegexKind::sequence: return regex_nonempty(re->lhs) && regex_nonempty(re->rhs);
    case RegexKind::plus: return regex_nonempty(re->lhs);
  }
  return false;
}

std::vector<WellformednessIssue> check_wellformed(const Contract& c) {
  Checker k;
  k.walk(c, "$", false);
  return std::move(k.issues);
}

bool is_wellformed(const Contract& c) { return check_wellformed(c).empty(); }

namespace {

std::string summarize(const std::vector<WellformednessIssue>& issues) {
  std::string s = "ill-formed contract";
  for (const auto& i : issues) s += "\n  " + i.path + ": " + i.message;
  return s;
}

}  // namespace

IllFormedContract::IllFormedContract(const std::vector<WellformednessIssue>& issues)
    : std::invalid_argument(summarize(issues)), issues_(issues) {}

void require_wellformed(const Contract& c) {
  auto issues = check_wellformed(c);
  if (!issues.empty()) throw IllFormedContract(issues);
}

Contract substitute(const Contract& c, const std::string& x, const Contract& replacement) {
  switch (c->kind) {
    case ContractKind::variable: return c->name == x ? replacement : c;
    case ContractKind::conjunction:
    case ContractKind::sequence:
    case ContractKind::reparation: {
      auto l = substitute(c->lhs, x, replacement);
      auto r = substitute(c->rhs, x, replacement);
      if (l == c->lhs && r == c->rhs) return c;
      if (c->kind == ContractKind::conjunction) return conj(l, r);
      if (c->kind == ContractKind::sequence) return seq(l, r);
      return rep(l, r);
    }
    case ContractKind::trigger:
    case ContractKind::guard: {
      auto b = substitute(c->lhs, x, replacement);
      if (b == c->lhs) return c;
      return c->kind == ContractKind::trigger ? trigger(c->regex, b) : guarded(c->regex, b);
    }
    case ContractKind::recursion: {
      if (c->name == x) return c;
      auto b = substitute(c->lhs, x, replacement);
      return b == c->lhs ? c : rec(c->name, b);
    }
    default: return c;
  }
}

Contract unfold_recursion(const Contract& c, std::size_t n) {
  switch (c->kind) {
    case ContractKind::conjunction:
    case ContractKind::sequence:
    case ContractKind::reparation: {
      auto l = unfold_recursion(c->lhs, n);
      auto r = unfold_recursion(c->rhs, n);
      if (l == c->lhs && r == c->rhs) return c;
      if (c->kind == ContractKind::conjunction) return conj(l, r);
      if (c->kind == ContractKind::sequence) return seq(l, r);
      return rep(l, r);
    }
    case ContractKind::trigger:
    case ContractKind::guard: {
      auto b = unfold_recursion(c->lhs, n);
      if (b == c->lhs) return c;
      return c->kind == ContractKind::trigger ? trigger(c->regex, b) : guarded(c->regex, b);
    }
    case ContractKind::recursion: {
      auto body = unfold_recursion(c->lhs, n);
      Contract out = top();
      for (std::size_t k = 0; k <= n; ++k) out = substitute(body, c->name, out);
      return out;
    }
    default: return c;
  }
}

}  // namespace cdl
