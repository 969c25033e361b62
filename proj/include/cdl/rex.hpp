#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdl/ast.hpp"
#include "cdl/trace.hpp"

namespace cdl {

/// Where a nonempty labeled trace stands relative to a regex:
///   tight_match  in TL(re): matches, no strict prefix matches
///   prefix       in cl(re): a strict prefix of some tight match
///   fell_out     in cl̄(re): just left cl(re) without matching
///   past         strictly extends a tight match or a fell-out trace
enum class RexClass : std::uint8_t { tight_match, prefix, fell_out, past };

const char* to_string(RexClass c) noexcept;

/// Deterministic, total first-match automaton A(re, s0, s✓, s×). Edges are
/// symbolic; the guards out of each state partition the labeled events.
class TightDfa {
 public:
  using State = std::uint32_t;
  struct Edge {
    Guard guard;
    State target;
  };

  State initial() const noexcept { return 0; }
  State matched() const noexcept { return matched_; }
  State failed() const noexcept { return failed_; }
  std::size_t state_count() const noexcept { return edges_.size(); }

  /// Outgoing edges; the two sinks carry a single `true` self-loop.
  const std::vector<Edge>& edges(State s) const { return edges_.at(s); }

  State step(State s, LabeledEvent e) const;

 private:
  friend TightDfa compile_regex(const Regex& re);
  std::vector<std::vector<Edge>> edges_;
  State matched_ = 0;
  State failed_ = 0;
};

/// Glushkov position automaton, subset construction over the minterms of the
/// atoms each subset can read, match-containing subsets collapsed into s✓ and
/// the empty subset into s×. Throws std::invalid_argument when L(re) is empty.
TightDfa compile_regex(const Regex& re);

/// Class of a nonempty trace. The empty trace counts as a member of cl(re).
RexClass classify(const TightDfa& d, std::span<const LabeledEvent> t);

/// classify(d, t[0..k]) for every k.
std::vector<RexClass> classify_prefixes(const TightDfa& d, std::span<const LabeledEvent> t);

}  // namespace cdl
