#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radar/semantics.hpp"

namespace radar {

inline constexpr size_t kDefaultDesignSpaceCap = 10'000'000;

// Exact design-space cardinality; may exceed 64 bits, hence the 128-bit
// carrier with a saturation flag for truly degenerate inputs.
struct DesignSpaceSize {
  unsigned __int128 value = 0;
  bool saturated = false;

  bool fits_u64() const;
  uint64_t as_u64() const;  // saturates at UINT64_MAX
  double as_double() const;
  std::string str() const;
};

// Decision list in depth-first source order; the order used by assignment
// vectors everywhere.
std::vector<Decision> collect_decisions(const SemanticModel& model);

// Streams assignments in DFS-lexicographic order without materializing the
// space: decisions ordered as collect_decisions, options in declaration
// order, "unbound" after any bound option. Inactive decisions are unbound
// (-1); bound decisions are exactly the active ones.
class SolutionCursor {
 public:
  explicit SolutionCursor(const SemanticModel& model);

  // writes the next assignment (one int8 per decision, -1 = unbound) and
  // returns true, or returns false when the space is exhausted
  bool next(std::vector<int8_t>& out);

  size_t num_decisions() const { return num_decisions_; }

 private:
  bool active_fast(size_t level) const;
  bool consistent_leaf() const;

  size_t num_decisions_ = 0;
  std::vector<int> option_counts_;
  std::vector<std::vector<std::pair<int, int>>> in_edges_;  // (outer, option)
  bool topological_ = true;  // every edge points forward in DFS order
  bool started_ = false;
  bool finished_ = false;
  std::vector<int8_t> assign_;
  std::vector<int> choice_;
  std::vector<int> num_choices_;
  std::vector<uint8_t> active_now_;
};

// Materialized design space: a dense (solutions x decisions) table of option
// indices, -1 marking unbound decisions.
class DesignSpace {
 public:
  DesignSpace() = default;

  size_t size() const { return num_decisions_ ? table_.size() / num_decisions_ : ones_; }
  size_t num_decisions() const { return num_decisions_; }
  const std::vector<Decision>& decisions() const { return decisions_; }

  std::span<const int8_t> assignment(size_t solution) const {
    return {table_.data() + solution * num_decisions_, num_decisions_};
  }

  // option name bound at `solution`, or "" when unbound
  const std::string& binding(size_t solution, size_t decision) const;

 private:
  friend DesignSpace enumerate_design_space(const SemanticModel&, size_t);

  std::vector<Decision> decisions_;
  size_t num_decisions_ = 0;
  size_t ones_ = 0;  // solution count when there are no decisions
  std::vector<int8_t> table_;
};

// Materializes the space in cursor order. Throws DesignSpaceOverflowError
// when more than `cap` solutions exist.
DesignSpace enumerate_design_space(const SemanticModel& model,
                                   size_t cap = kDefaultDesignSpaceCap);

// Cardinality without materializing: closed-form product over the dependency
// forest when every decision has at most one activating edge, otherwise an
// exact streaming count.
DesignSpaceSize size_without_enumeration(const SemanticModel& model);

}  // namespace radar
