#pragma once

#include <cstdint>
#include <map>

#include "cdl/semantics.hpp"

namespace cdl {

enum class ScoreStatus : std::uint8_t { sat, viol, unknown };

const char* to_string(ScoreStatus s) noexcept;

/// Mistake score ϟ of one party: how many norm violations it was blamed for
/// along the way (repaired ones included).
struct ScoreResult {
  ScoreStatus status = ScoreStatus::unknown;
  unsigned score = 0;
  Party party = Party::zero;
  std::size_t index = 0;  // decision point; last index for unknown
  friend bool operator==(const ScoreResult&, const ScoreResult&) = default;
};

/// Mistake scoring for party p, computed per (subterm, start) as a row
/// over end positions. Unlike Evaluator it tracks status through the
/// quantitative rules themselves, so the two can be cross-checked.
class Scorer {
 public:
  enum class Status : std::uint8_t { sat, viol, unknown, done };
  struct Entry {
    Status status = Status::unknown;
    Status final_status = Status::unknown;  // sat or viol once decided
    std::size_t decided_at = 0;
    unsigned score = 0;
  };

  /// Throws IllFormedContract unless `root` is well-formed.
  Scorer(Contract root, const Interaction& x, Party p);

  /// Entry for w_i^j; j < i (empty slice) is unknown with score 0.
  Entry entry(const ContractNode* c, std::size_t i, std::ptrdiff_t j);

  ScoreResult result(std::size_t i);

 private:
  const std::vector<Entry>& row(const ContractNode* c, std::size_t i);
  std::vector<Entry> compute(const ContractNode* c, std::size_t i);
  const std::vector<RexClass>& classes(const Regex& re, std::size_t i);
  bool conflict_before(const ContractNode* conj, std::size_t i, std::size_t j);

  Contract root_;
  Interaction x_;
  LabeledTrace labeled_;
  Party p_;
  RegexCache cache_;
  std::map<std::string, const ContractNode*> recs_;
  std::map<std::pair<const void*, std::size_t>, std::vector<Entry>> rows_;
  std::map<std::pair<const void*, std::size_t>, std::vector<RexClass>> classes_;
};

ScoreResult score(const Contract& c, const Interaction& x, std::size_t i, Party p);

}  // namespace cdl
