#include "radar/design_space.hpp"

#include <algorithm>
#include <optional>

#include "radar/diag.hpp"

namespace radar {

namespace {

constexpr unsigned __int128 kU128Max = ~static_cast<unsigned __int128>(0);

DesignSpaceSize mul_sat(DesignSpaceSize a, DesignSpaceSize b) {
  if (a.saturated || b.saturated) return {kU128Max, true};
  if (a.value == 0 || b.value == 0) return {0, false};
  unsigned __int128 r = a.value * b.value;
  if (r / a.value != b.value) return {kU128Max, true};
  return {r, false};
}

DesignSpaceSize add_sat(DesignSpaceSize a, DesignSpaceSize b) {
  if (a.saturated || b.saturated) return {kU128Max, true};
  unsigned __int128 r = a.value + b.value;
  if (r < a.value) return {kU128Max, true};
  return {r, false};
}

// Closed-form size when the activation edges form a forest (at most one
// incoming edge per decision): f(d) = sum over options of the product of
// f(child) for the decisions that option activates.
std::optional<DesignSpaceSize> forest_size(const SemanticModel& model) {
  const auto& decs = model.decisions();
  size_t k = decs.size();
  std::vector<int> incoming(k, 0);
  std::vector<std::vector<std::vector<int>>> children(k);
  for (size_t d = 0; d < k; ++d) children[d].assign(decs[d].options.size(), {});
  for (const auto& e : model.dependency_edges()) {
    if (++incoming[e.inner] > 1) return std::nullopt;
    children[e.outer][e.outer_option].push_back(e.inner);
  }
  std::vector<DesignSpaceSize> memo(k);
  std::vector<uint8_t> done(k, 0);
  auto f = [&](auto&& self, size_t d) -> DesignSpaceSize {
    if (done[d]) return memo[d];
    DesignSpaceSize total{0, false};
    for (const auto& kids : children[d]) {
      DesignSpaceSize prod{1, false};
      for (int c : kids) prod = mul_sat(prod, self(self, static_cast<size_t>(c)));
      total = add_sat(total, prod);
    }
    done[d] = 1;
    memo[d] = total;
    return total;
  };
  DesignSpaceSize result{1, false};
  for (size_t d = 0; d < k; ++d) {
    if (incoming[d] == 0) result = mul_sat(result, f(f, d));
  }
  return result;
}

}  // namespace

bool DesignSpaceSize::fits_u64() const {
  return !saturated && value <= static_cast<unsigned __int128>(UINT64_MAX);
}

uint64_t DesignSpaceSize::as_u64() const {
  return fits_u64() ? static_cast<uint64_t>(value) : UINT64_MAX;
}

double DesignSpaceSize::as_double() const {
  if (saturated) return static_cast<double>(kU128Max);
  return static_cast<double>(value);
}

std::string DesignSpaceSize::str() const {
  if (saturated) return "overflow";
  unsigned __int128 v = value;
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<Decision> collect_decisions(const SemanticModel& model) {
  return model.decisions();
}

SolutionCursor::SolutionCursor(const SemanticModel& model) {
  const auto& decs = model.decisions();
  num_decisions_ = decs.size();
  option_counts_.reserve(num_decisions_);
  for (const auto& d : decs) option_counts_.push_back(static_cast<int>(d.options.size()));
  in_edges_.assign(num_decisions_, {});
  for (const auto& e : model.dependency_edges()) {
    in_edges_[e.inner].emplace_back(e.outer, e.outer_option);
    if (e.outer >= e.inner) topological_ = false;
  }
  assign_.assign(num_decisions_, -1);
  choice_.assign(num_decisions_, 0);
  num_choices_.assign(num_decisions_, 0);
  active_now_.assign(num_decisions_, 0);
}

bool SolutionCursor::active_fast(size_t level) const {
  const auto& edges = in_edges_[level];
  if (edges.empty()) return true;
  for (auto [outer, opt] : edges) {
    // in topological mode outer < level, so assign_[outer] is final; a bound
    // outer is by construction an active one
    if (assign_[static_cast<size_t>(outer)] == opt) return true;
  }
  return false;
}

bool SolutionCursor::consistent_leaf() const {
  std::vector<uint8_t> memo(num_decisions_, 0);
  auto active = [&](auto&& self, size_t d) -> bool {
    if (memo[d]) return memo[d] == 1;
    bool a = in_edges_[d].empty();
    if (!a) {
      for (auto [outer, opt] : in_edges_[d]) {
        if (assign_[static_cast<size_t>(outer)] == opt &&
            self(self, static_cast<size_t>(outer))) {
          a = true;
          break;
        }
      }
    }
    memo[d] = a ? 1 : 2;
    return a;
  };
  for (size_t d = 0; d < num_decisions_; ++d) {
    if ((assign_[d] >= 0) != active(active, d)) return false;
  }
  return true;
}

bool SolutionCursor::next(std::vector<int8_t>& out) {
  if (finished_) return false;
  size_t d;
  bool descending;
  if (!started_) {
    started_ = true;
    d = 0;
    descending = true;
  } else {
    d = num_decisions_;
    descending = false;
  }
  for (;;) {
    if (descending) {
      if (d == num_decisions_) {
        if (topological_ || consistent_leaf()) {
          out.assign(assign_.begin(), assign_.end());
          return true;
        }
        descending = false;
        continue;
      }
      // enter level d on its first choice
      if (topological_) {
        bool act = active_fast(d);
        active_now_[d] = act ? 1 : 0;
        num_choices_[d] = act ? option_counts_[d] : 1;
        assign_[d] = act ? 0 : int8_t{-1};
      } else {
        // options first, then (for dependent decisions) unbound last
        num_choices_[d] =
            option_counts_[d] + (in_edges_[d].empty() ? 0 : 1);
        assign_[d] = 0;
      }
      choice_[d] = 0;
      ++d;
    } else {
      if (d == 0) {
        finished_ = true;
        return false;
      }
      --d;
      if (choice_[d] + 1 < num_choices_[d]) {
        ++choice_[d];
        if (topological_) {
          assign_[d] = active_now_[d] ? static_cast<int8_t>(choice_[d]) : int8_t{-1};
        } else {
          assign_[d] = choice_[d] < option_counts_[d] ? static_cast<int8_t>(choice_[d])
                                                      : int8_t{-1};
        }
        descending = true;
        ++d;
      }
    }
  }
}

const std::string& DesignSpace::binding(size_t solution, size_t decision) const {
  static const std::string empty;
  int8_t opt = table_[solution * num_decisions_ + decision];
  if (opt < 0) return empty;
  return decisions_[decision].options[static_cast<size_t>(opt)];
}

DesignSpace enumerate_design_space(const SemanticModel& model, size_t cap) {
  DesignSpace ds;
  ds.decisions_ = model.decisions();
  ds.num_decisions_ = ds.decisions_.size();
  if (auto exact = forest_size(model); exact && exact->fits_u64()) {
    if (exact->as_u64() > cap) {
      throw DesignSpaceOverflowError("design space holds " + exact->str() +
                                     " solutions, cap is " + std::to_string(cap));
    }
    ds.table_.reserve(static_cast<size_t>(exact->as_u64()) * ds.num_decisions_);
  }
  SolutionCursor cursor(model);
  std::vector<int8_t> row;
  size_t count = 0;
  while (cursor.next(row)) {
    if (++count > cap) {
      throw DesignSpaceOverflowError("design space exceeds cap of " + std::to_string(cap) +
                                     " solutions");
    }
    ds.table_.insert(ds.table_.end(), row.begin(), row.end());
  }
  if (ds.num_decisions_ == 0) ds.ones_ = count;
  return ds;
}

DesignSpaceSize size_without_enumeration(const SemanticModel& model) {
  if (auto s = forest_size(model)) return *s;
  SolutionCursor cursor(model);
  std::vector<int8_t> row;
  unsigned __int128 n = 0;
  while (cursor.next(row)) ++n;
  return {n, false};
}

}  // namespace radar
