#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "canonproc/core.hpp"
#include "canonproc/moments.hpp"
#include "canonproc/reports.hpp"
#include "canonproc/suprema.hpp"

namespace canonproc {

/// One block of a partition level: member point indices (ascending), the
/// representative point index, and the index of the enclosing block one
/// level up (npos at level 0).
struct Block {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> members;
  std::size_t representative = 0;
  std::size_t parent = npos;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Budget N_n = 2^{2^n} on the number of blocks at level n (saturating).
std::uint64_t level_budget(std::size_t n);

/// A nested admissible partition sequence of the points {0, ..., size-1}.
class PartitionTree {
 public:
  PartitionTree(std::size_t set_size, std::vector<std::vector<Block>> levels);

  std::size_t set_size() const noexcept { return set_size_; }
  /// Index of the last level.
  std::size_t depth() const noexcept { return levels_.size() - 1; }
  const std::vector<std::vector<Block>>& levels() const noexcept { return levels_; }
  const std::vector<Block>& level(std::size_t n) const { return levels_.at(n); }

  /// Block index containing `point` at level n.
  std::size_t block_of(std::size_t n, std::size_t point) const {
    return block_of_[n][point];
  }
  /// pi_n(point).
  std::size_t representative(std::size_t n, std::size_t point) const {
    return levels_[n][block_of(n, point)].representative;
  }

  friend bool operator==(const PartitionTree& a, const PartitionTree& b) {
    return a.set_size_ == b.set_size_ && a.levels_ == b.levels_;
  }

 private:
  std::size_t set_size_;
  std::vector<std::vector<Block>> levels_;
  std::vector<std::vector<std::size_t>> block_of_;
};

/// Throws ValidationError unless the tree satisfies the cardinality budget,
/// nesting, representative membership and singleton leaves. Run by the
/// PartitionTree constructor.
void validate_tree(std::size_t set_size,
                   const std::vector<std::vector<Block>>& levels);

/// Least n with N_n >= size (n >= 1 unless size == 1).
std::size_t greedy_depth(std::size_t size);

/// Nested farthest-point k-center tree. Level n splits each parent block
/// around centers picked by farthest-point traversal from the parent's
/// representative; the budget N_n is shared among parents in proportion to
/// their sizes. Ties go to the lowest point index.
PartitionTree build_partition_greedy(const FiniteSet& set);

/// sup_t sum_{n>=1} ||X_{pi_n(t)} - X_{pi_{n-1}(t)}||_{2^n} for one tree.
struct ChainBound {
  double value = 0.0;
  std::vector<double> per_point_sums;
  PartitionTree tree;
  MomentModel model;
};

ChainBound chain_bound(const FiniteSet& set, const PartitionTree& tree,
                       const MomentModel& model);

/// Sum set A + B (duplicates removed, first occurrence in a-major order
/// kept) and the product tree: level n+1 holds the blocks A' + B' for A' at
/// level n of A and B' at level n of B, with representative pi(A') + pi(B').
/// A shallower tree repeats its leaf level.
struct SumSetTree {
  FiniteSet set;
  PartitionTree tree;
};

SumSetTree combine_sum_set(const FiniteSet& a, const PartitionTree& tree_a,
                           const FiniteSet& b, const PartitionTree& tree_b);

inline constexpr std::size_t kExhaustiveMaxSize = 5;

/// Exact minimum of chain_bound over every nested admissible tree of depth
/// at most |F| and every choice of representatives. |F| <= 5.
ChainBound exhaustive_gamma(const FiniteSet& set, const MomentModel& model);

/// S_X(F) against 4 * chain bound of the greedy tree. Bernoulli uses exact
/// enumeration for both sides when dim <= d_max (proxy norms and Monte Carlo
/// otherwise); Gaussian uses Monte Carlo for S and exact Gaussian norms.
ComparisonReport verify_theorem2(const FiniteSet& set, ProcessKind kind,
                                 std::size_t samples, Seed seed,
                                 std::size_t d_max = kDefaultDMax);

}  // namespace canonproc
