#pragma once

#include <random>

#include "cdl/ast.hpp"
#include "cdl/moore.hpp"
#include "cdl/trace.hpp"

namespace cdl::testing {

using Rng = std::mt19937_64;

/// Σ = {a, b}.
const Alphabet& ab();

/// Every labeled event over Σ = {a, b} (16 of them).
std::vector<LabeledEvent> all_events(const Alphabet& sigma);

Guard random_guard(Rng& rng, const Alphabet& sigma, int depth);

/// Nonempty-language regex of the given maximum depth.
Regex random_regex(Rng& rng, const Alphabet& sigma, int depth);

struct ContractOptions {
  std::size_t max_size = 8;
  bool regexes = true;
  bool recursion = true;
};

/// Well-formed contract of AST size at most opts.max_size.
Contract random_contract(Rng& rng, const Alphabet& sigma, const ContractOptions& opts = {});

/// Contract of AST size exactly n when possible (rejection-sampled well-formed).
Contract random_contract_of_size(Rng& rng, const Alphabet& sigma, std::size_t n, const ContractOptions& opts);

Interaction random_interaction(Rng& rng, const Alphabet& sigma, std::size_t length);

/// Interaction whose k-th joint step is events[k].
Interaction interaction_of(const std::vector<LabeledEvent>& events);

/// Calls f on every interaction of exactly the given length.
void for_each_interaction(const Alphabet& sigma, std::size_t length, const std::function<void(const Interaction&)>& f);

/// Total machine for `party` with n states, random outputs and transitions.
MooreMachine random_machine(Rng& rng, const Alphabet& sigma, Party party, std::size_t n, bool deterministic);

}  // namespace cdl::testing
