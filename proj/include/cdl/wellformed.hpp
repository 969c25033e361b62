#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdl/ast.hpp"

namespace cdl {

/// One broken syntactic restriction. `path` locates the offending subterm from
/// the root, e.g. "$.body.rhs" (steps: lhs, rhs, body).
struct WellformednessIssue {
  std::string path;
  std::string message;
};

/// Checks the restrictions on recursion and regexes:
///  - every variable is bound by an enclosing rec, and rec names are unique;
///  - a rec body is a sequence or trigger (or a reparation when the recursion
///    sits under a guard), and its variable occurs exactly once, in tail
///    position, reached only through sequence right-hand sides, trigger bodies
///    and reparation right-hand sides;
///  - a variable directly on the right of a reparation needs an enclosing guard;
///  - no regex denotes the empty language.
std::vector<WellformednessIssue> check_wellformed(const Contract& c);

bool is_wellformed(const Contract& c);

/// Thrown by operations whose precondition is a well-formed contract.
class IllFormedContract : public std::invalid_argument {
 public:
  explicit IllFormedContract(const std::vector<WellformednessIssue>& issues);
  const std::vector<WellformednessIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<WellformednessIssue> issues_;
};

void require_wellformed(const Contract& c);

/// C[X \ replacement]. Names are unique in well-formed contracts, so no capture can occur.
Contract substitute(const Contract& c, const std::string& x, const Contract& replacement);

/// Replaces every rec X.B by n+1 nested copies of B, the innermost copy with X
/// replaced by TOP. unfold(rec X. C;X, 0) = C;TOP. A contract without recursion
/// is returned unchanged (same node).
Contract unfold_recursion(const Contract& c, std::size_t n);

/// Does the regex language contain at least one word?
bool regex_nonempty(const Regex& re);

}  // namespace cdl
