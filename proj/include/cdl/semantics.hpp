#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdl/ast.hpp"
#include "cdl/rex.hpp"
#include "cdl/trace.hpp"

namespace cdl {

enum class VerdictKind : std::uint8_t { satisfied, violated, unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::unknown;
  std::size_t index = 0;  // meaningful unless unknown

  static Verdict satisfied_at(std::size_t j) { return {VerdictKind::satisfied, j}; }
  static Verdict violated_at(std::size_t j) { return {VerdictKind::violated, j}; }
  static Verdict unknown() { return {}; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

enum class NormStatus : std::uint8_t { sat, viol };

/// Single-step status of an obligation, prohibition or permission.
NormStatus evaluate_norm(const ContractNode& norm, Event e0, Event e1);

/// Compiled tight DFAs shared between evaluations of the same contract.
class RegexCache {
 public:
  const TightDfa& get(const Regex& re);

 private:
  std::map<const RegexNode*, std::pair<Regex, TightDfa>> dfas_;
};

using IndexSet = std::vector<std::uint32_t>;  // sorted, absolute positions

/// Decides informative satisfaction and violation by computing,
/// for each subterm C and start i, the full sets {j : w_i^j ⊨_s C} and
/// {j : w_i^j ⊨_v C}. Results are memoised per (subterm, i).
class Evaluator {
 public:
  struct Sets {
    IndexSet sat, viol;
  };

  /// Throws IllFormedContract unless `root` is well-formed.
  Evaluator(Contract root, const Interaction& x, std::shared_ptr<RegexCache> cache = nullptr);

  const Sets& sets(const ContractNode* c, std::size_t i);
  const Sets& sets(std::size_t i) { return sets(root_.get(), i); }

  /// Class of the labeled slice w_i^j with respect to `re` (j ≥ i).
  RexClass regex_class(const Regex& re, std::size_t i, std::size_t j);
  /// The unique k ≥ i with w_i^k ∈ TL(re), if any.
  std::optional<std::size_t> tight_match(const Regex& re, std::size_t i);

  const ContractNode* resolve(const ContractNode* var) const;
  const Interaction& interaction() const noexcept { return x_; }
  const Contract& root() const noexcept { return root_; }
  const std::shared_ptr<RegexCache>& cache() const noexcept { return cache_; }

  struct Unchecked {};
  /// For closed subterms of a contract already known to be well-formed.
  Evaluator(Unchecked, Contract root, const Interaction& x, std::shared_ptr<RegexCache> cache);

 private:
  Sets compute(const ContractNode* c, std::size_t i);
  const std::vector<RexClass>& classes(const Regex& re, std::size_t i);
  void index_recursions(const Contract& c);

  struct Key {
    const void* node;
    std::size_t i;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<const void*>()(k.node) ^ (k.i * 0x9e3779b97f4a7c15ull);
    }
  };

  Contract root_;
  Interaction x_;
  LabeledTrace labeled_;
  std::shared_ptr<RegexCache> cache_;
  std::unordered_map<std::string, const ContractNode*> recs_;
  std::unordered_map<Key, Sets, KeyHash> memo_;
  std::unordered_map<Key, std::vector<RexClass>, KeyHash> classes_;
};

/// Earliest informative verdict of c on x from position i. i == x.size() gives
/// Unknown; i > x.size() throws std::out_of_range.
Verdict evaluate(const Contract& c, const Interaction& x, std::size_t i = 0);

}  // namespace cdl
