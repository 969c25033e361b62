#pragma once

#include <memory>
#include <string>

#include "cdl/alphabet.hpp"
#include "cdl/guard.hpp"

namespace cdl {

// ---------------------------------------------------------------------------
// Regular expressions over labeled events. Atoms are guard formulas, each
// consuming exactly one event; there is no empty word and no Kleene star.
// ---------------------------------------------------------------------------

enum class RegexKind : std::uint8_t { atom, choice, sequence, plus };

struct RegexNode;
using Regex = std::shared_ptr<const RegexNode>;

struct RegexNode {
  RegexKind kind = RegexKind::atom;
  Guard atom;
  Regex lhs, rhs;  // plus uses lhs only
};

Regex re_atom(Guard g);
Regex re_choice(Regex a, Regex b);
Regex re_seq(Regex a, Regex b);
Regex re_plus(Regex a);

bool structurally_equal(const Regex& a, const Regex& b);
std::size_t regex_size(const Regex& r);
std::string to_string(const Regex& r, const Alphabet& sigma);

// ---------------------------------------------------------------------------
// Contracts.
// ---------------------------------------------------------------------------

enum class ContractKind : std::uint8_t {
  top,
  bottom,
  obligation,
  prohibition,
  permission,
  conjunction,
  sequence,
  reparation,
  trigger,
  guard,
  variable,
  recursion,
};

struct ContractNode;
using Contract = std::shared_ptr<const ContractNode>;

struct ContractNode {
  ContractKind kind = ContractKind::top;
  Party party = Party::zero;   // norms
  ActionId action = 0;         // norms
  Contract lhs, rhs;           // binary operators; trigger/guard/recursion body in lhs
  Regex regex;                 // trigger, guard
  std::string name;            // variable, recursion

  bool is_norm() const noexcept {
    return kind == ContractKind::obligation || kind == ContractKind::prohibition ||
           kind == ContractKind::permission;
  }
};

Contract top();
Contract bottom();
Contract obligation(Party p, ActionId a);
Contract prohibition(Party p, ActionId a);
Contract permission(Party p, ActionId a);
Contract conj(Contract a, Contract b);
Contract seq(Contract a, Contract b);
Contract rep(Contract primary, Contract reparation);
Contract trigger(Regex re, Contract body);
Contract guarded(Regex re, Contract body);
Contract var(std::string name);
Contract rec(std::string name, Contract body);

bool structurally_equal(const Contract& a, const Contract& b);

/// Number of operator and constant nodes, regex nodes included. Normed
/// actions are not counted separately, so O_0(a) has size 1.
std::size_t contract_size(const Contract& c);

/// Number of obligation/prohibition/permission occurrences.
std::size_t norm_count(const Contract& c);

bool contains_regex(const Contract& c);

/// LabeledEvent bits of every atom the contract can observe: a_0 and a_1 for
/// each normed action, plus the atoms of its regexes.
std::uint64_t observed_atoms(const Contract& c);

/// Concrete syntax accepted by parse_contract (minimal parentheses).
std::string to_string(const Contract& c, const Alphabet& sigma);

}  // namespace cdl
