#pragma once

#include "cdl/ast.hpp"
#include "cdl/autom.hpp"

namespace cdl {

/// The transition relation trans(C, s0, sG, sB, {}) before finalisation:
/// ε-transitions for recursion variables are kept, good and bad states still
/// carry whatever the rules gave them. States are named s0, sG, sB (plus sB0,
/// sB1 and sB01 for blame) and s1, s2, ... for fresh ones. Reachable part only.
///
/// With `with_blame` the norms route violations to the bad state tagged with
/// the blamed parties, a reparation's primary clause is absorbed into one
/// fresh state, and conjunction states that can only go bad are sent to the
/// untagged sB (conflict).
SymbolicAutomaton translate(const Contract& c, bool with_blame);

/// Deterministic, total automaton whose runs enter a bad state exactly when
/// the contract is violated. Requires a well-formed contract.
SymbolicAutomaton aut(const Contract& c);

/// As aut, with bad states tagged by the blamed parties.
SymbolicAutomaton blaut(const Contract& c);

}  // namespace cdl
