#include "canonproc/chaining.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "canonproc/errors.hpp"

namespace canonproc {

std::uint64_t level_budget(std::size_t n) {
  if (n >= 6) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << (std::uint64_t{1} << n);
}

void validate_tree(std::size_t set_size,
                   const std::vector<std::vector<Block>>& levels) {
  auto fail = [](std::size_t n, const std::string& what) {
    throw ValidationError("partition level " + std::to_string(n) + ": " + what);
  };
  if (set_size == 0) throw ValidationError("partition of an empty set");
  if (levels.empty()) throw ValidationError("partition tree has no levels");
  if (levels[0].size() != 1) fail(0, "must be the single block T");

  std::vector<std::size_t> owner(set_size);
  std::vector<std::size_t> prev_owner;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto& level = levels[n];
    if (n >= 1 && level.size() > level_budget(n)) {
      fail(n, std::to_string(level.size()) + " blocks exceed the budget");
    }
    std::fill(owner.begin(), owner.end(), Block::npos);
    for (std::size_t b = 0; b < level.size(); ++b) {
      const auto& block = level[b];
      if (block.members.empty()) fail(n, "empty block");
      if (!std::is_sorted(block.members.begin(), block.members.end())) {
        fail(n, "block members must be ascending");
      }
      for (std::size_t m : block.members) {
        if (m >= set_size) fail(n, "member index out of range");
        if (owner[m] != Block::npos) fail(n, "blocks overlap");
        owner[m] = b;
      }
      if (!std::binary_search(block.members.begin(), block.members.end(),
                              block.representative)) {
        fail(n, "representative is not a member of its block");
      }
      if (n == 0) {
        if (block.parent != Block::npos) fail(n, "root block has a parent");
      } else {
        if (block.parent >= levels[n - 1].size()) fail(n, "bad parent index");
        for (std::size_t m : block.members) {
          if (prev_owner[m] != block.parent) fail(n, "block is not nested");
        }
      }
    }
    if (std::find(owner.begin(), owner.end(), Block::npos) != owner.end()) {
      fail(n, "blocks do not cover the set");
    }
    prev_owner = owner;
  }
  for (const auto& block : levels.back()) {
    if (block.members.size() != 1) fail(levels.size() - 1, "leaf is not a singleton");
  }
}

PartitionTree::PartitionTree(std::size_t set_size,
                             std::vector<std::vector<Block>> levels)
    : set_size_(set_size), levels_(std::move(levels)) {
  validate_tree(set_size_, levels_);
  block_of_.assign(levels_.size(), std::vector<std::size_t>(set_size_));
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    for (std::size_t b = 0; b < levels_[n].size(); ++b) {
      for (std::size_t m : levels_[n][b].members) block_of_[n][m] = b;
    }
  }
}

std::size_t greedy_depth(std::size_t size) {
  if (size <= 1) return 0;
  std::size_t n = 1;
  while (level_budget(n) < size) ++n;
  return n;
}

namespace {

double sq_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Children per parent: proportional to parent size, at least one each, at
// most the parent size, total at most `budget`. Leftover slots go to the
// largest fractional remainders, ties to the lower block index.
std::vector<std::size_t> allocate_children(const std::vector<Block>& parents,
                                           std::size_t total,
                                           std::size_t budget) {
  const std::size_t k = parents.size();
  std::vector<std::size_t> count(k);
  std::vector<double> remainder(k);
  std::size_t used = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double share = double(budget) * double(parents[j].members.size()) /
                         double(total);
    count[j] = std::clamp<std::size_t>(static_cast<std::size_t>(share), 1,
                                       parents[j].members.size());
    remainder[j] = share - std::floor(share);
    used += count[j];
  }
  while (used > budget) {
    // Take from the block with the most children, lowest index on ties.
    std::size_t best = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] > 1 && (best == k || count[j] > count[best])) best = j;
    }
    if (best == k) break;
    --count[best];
    --used;
  }
  while (used < budget) {
    std::size_t best = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] >= parents[j].members.size()) continue;
      if (best == k || remainder[j] > remainder[best]) best = j;
    }
    if (best == k) break;
    ++count[best];
    remainder[best] -= 1.0;
    ++used;
  }
  return count;
}

// Farthest-point traversal inside one parent block, starting at its
// representative; returns child blocks in center order.
std::vector<Block> split_block(const FiniteSet& set, const Block& parent,
                               std::size_t parent_index, std::size_t k) {
  const auto& members = parent.members;
  std::vector<std::size_t> centers{parent.representative};
  std::vector<double> dist(members.size());
  std::vector<std::size_t> nearest(members.size(), 0);
  for (std::size_t i = 0; i < members.size(); ++i) {
    dist[i] = sq_dist(set[members[i]], set[parent.representative]);
  }
  while (centers.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (dist[i] > dist[far]) far = i;  // strict: lowest index wins ties
    }
    const std::size_t c = members[far];
    centers.push_back(c);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double d = sq_dist(set[members[i]], set[c]);
      if (d < dist[i]) {
        dist[i] = d;
        nearest[i] = centers.size() - 1;
      }
    }
    dist[far] = 0.0;
    nearest[far] = centers.size() - 1;
  }
  std::vector<Block> children(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    children[c].representative = centers[c];
    children[c].parent = parent_index;
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    children[nearest[i]].members.push_back(members[i]);
  }
  return children;
}

}  // namespace

PartitionTree build_partition_greedy(const FiniteSet& set) {
  const std::size_t size = set.size();
  std::vector<std::vector<Block>> levels(1);
  Block root;
  root.members.resize(size);
  for (std::size_t i = 0; i < size; ++i) root.members[i] = i;
  root.representative = 0;
  levels[0].push_back(std::move(root));

  const std::size_t depth = greedy_depth(size);
  for (std::size_t n = 1; n <= depth; ++n) {
    const auto& parents = levels[n - 1];
    const std::size_t budget = static_cast<std::size_t>(
        std::min<std::uint64_t>(level_budget(n), size));
    const auto counts = allocate_children(parents, size, budget);
    std::vector<Block> level;
    for (std::size_t j = 0; j < parents.size(); ++j) {
      auto children = split_block(set, parents[j], j, counts[j]);
      for (auto& c : children) level.push_back(std::move(c));
    }
    levels.push_back(std::move(level));
  }
  return PartitionTree(size, std::move(levels));
}

ChainBound chain_bound(const FiniteSet& set, const PartitionTree& tree,
                       const MomentModel& model) {
  if (tree.set_size() != set.size()) {
    throw ValidationError("partition tree is for a set of " +
                          std::to_string(tree.set_size()) + " points, not " +
                          std::to_string(set.size()));
  }
  // The increment of a level-n block depends only on the block.
  std::vector<std::vector<double>> increment(tree.depth() + 1);
  for (std::size_t n = 1; n <= tree.depth(); ++n) {
    const auto& level = tree.level(n);
    const auto& up = tree.level(n - 1);
    increment[n].resize(level.size(), 0.0);
    for (std::size_t b = 0; b < level.size(); ++b) {
      const std::size_t from = up[level[b].parent].representative;
      const std::size_t to = level[b].representative;
      if (from == to) continue;
      increment[n][b] = model.norm(set[to] - set[from], std::ldexp(1.0, int(n)));
    }
  }
  ChainBound out{0.0, std::vector<double>(set.size(), 0.0), tree, model};
  for (std::size_t t = 0; t < set.size(); ++t) {
    double sum = 0.0;
    for (std::size_t n = 1; n <= tree.depth(); ++n) {
      sum += increment[n][tree.block_of(n, t)];
    }
    out.per_point_sums[t] = sum;
    out.value = std::max(out.value, sum);
  }
  return out;
}

SumSetTree combine_sum_set(const FiniteSet& a, const PartitionTree& tree_a,
                           const FiniteSet& b, const PartitionTree& tree_b) {
  if (tree_a.set_size() != a.size() || tree_b.set_size() != b.size()) {
    throw ValidationError("partition tree does not match its set");
  }
  // Distinct sums, first occurrence in (a, b) lexicographic order.
  std::vector<Point> sums;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  std::map<std::vector<double>, std::size_t> index_of;
  std::vector<std::size_t> pair_to_point(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      Point s = a[i] + b[j];
      std::vector<double> key(s.coords().begin(), s.coords().end());
      auto [it, fresh] = index_of.emplace(std::move(key), sums.size());
      if (fresh) {
        sums.push_back(std::move(s));
        origin.emplace_back(i, j);
      }
      pair_to_point[i * b.size() + j] = it->second;
    }
  }
  FiniteSet sum_set(a.name() + "+" + b.name(), sums);

  const std::size_t inner_depth = std::max(tree_a.depth(), tree_b.depth());
  std::vector<std::vector<Block>> levels;
  // Level 0 is the single block; its representative is pi_0(A) + pi_0(B).
  {
    Block root;
    root.members.resize(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) root.members[i] = i;
    root.representative =
        pair_to_point[tree_a.level(0)[0].representative * b.size() +
                      tree_b.level(0)[0].representative];
    levels.push_back({std::move(root)});
  }
  // prev_key maps (block of A, block of B) at the previous source levels to
  // the output block index.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> prev_key{{{0, 0}, 0}};
  std::size_t prev_la = 0, prev_lb = 0;
  for (std::size_t k = 0; k <= inner_depth; ++k) {
    const std::size_t la = std::min(k, tree_a.depth());
    const std::size_t lb = std::min(k, tree_b.depth());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> key;
    std::vector<Block> level;
    // Iterate in (block of A, block of B) order for a deterministic layout.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t p = 0; p < sums.size(); ++p) {
      const auto [i, j] = origin[p];
      groups[{tree_a.block_of(la, i), tree_b.block_of(lb, j)}].push_back(p);
    }
    for (auto& [blocks, members] : groups) {
      const auto& block_a = tree_a.level(la)[blocks.first];
      const auto& block_b = tree_b.level(lb)[blocks.second];
      Block out;
      out.members = std::move(members);
      const std::size_t parent_a = la == prev_la ? blocks.first : block_a.parent;
      const std::size_t parent_b = lb == prev_lb ? blocks.second : block_b.parent;
      out.parent = k == 0 ? 0 : prev_key.at({parent_a, parent_b});
      const std::size_t wanted =
          pair_to_point[block_a.representative * b.size() +
                        block_b.representative];
      if (std::binary_search(out.members.begin(), out.members.end(), wanted)) {
        out.representative = wanted;
      } else {
        // The intended sum coincides with a point owned by another block;
        // fall back to the closest member.
        out.representative = out.members.front();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : out.members) {
          const double d = (sums[m] - sums[wanted]).norm2();
          if (d < best) {
            best = d;
            out.representative = m;
          }
        }
      }
      key[blocks] = level.size();
      level.push_back(std::move(out));
    }
    levels.push_back(std::move(level));
    prev_key = std::move(key);
    prev_la = la;
    prev_lb = lb;
  }
  const std::size_t n_points = sums.size();
  return SumSetTree{std::move(sum_set), PartitionTree(n_points, std::move(levels))};
}

namespace {

// Exact search over nested trees of a set of at most five points.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const FiniteSet& set, const MomentModel& model)
      : set_(set), model_(model), size_(set.size()), max_depth_(set.size()) {
    memo_.assign(std::size_t{1} << size_,
                 std::vector<std::vector<Entry>>(
                     max_depth_ + 2, std::vector<Entry>(size_)));
  }

  // Best remaining cost for block `mask` entering level n with
  // representative q at level n - 1.
  double solve(unsigned mask, std::size_t n, std::size_t q) {
    Entry& e = memo_[mask][n][q];
    if (e.done) return e.cost;
    e.done = true;
    if (std::popcount(mask) == 1) {
      e.cost = 0.0;
      return 0.0;
    }
    e.cost = std::numeric_limits<double>::infinity();
    if (n > max_depth_) return e.cost;
    const std::uint64_t budget = level_budget(n);
    for_each_partition(mask, [&](const std::vector<unsigned>& parts) {
      if (parts.size() > budget) return;
      // Force singletons at the deepest level.
      if (n == max_depth_ && parts.size() != std::size_t(std::popcount(mask))) return;
      double worst = 0.0;
      std::vector<std::size_t> reps;
      for (unsigned part : parts) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_rep = 0;
        for (std::size_t r = 0; r < size_; ++r) {
          if (!(part >> r & 1U)) continue;
          const double c = increment(q, r, n) + solve(part, n + 1, r);
          if (c < best) {
            best = c;
            best_rep = r;
          }
        }
        reps.push_back(best_rep);
        worst = std::max(worst, best);
        if (worst >= e.cost) return;
      }
      e.cost = worst;
      e.parts = parts;
      e.reps = std::move(reps);
    });
    return e.cost;
  }

  double best_root(std::size_t& root_rep) {
    const unsigned all = (1U << size_) - 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < size_; ++r) {
      const double c = solve(all, 1, r);
      if (c < best) {
        best = c;
        root_rep = r;
      }
    }
    return best;
  }

  PartitionTree build(std::size_t root_rep) {
    std::vector<std::vector<Block>> levels;
    struct Open {
      unsigned mask;
      std::size_t rep;
    };
    const unsigned all = (1U << size_) - 1;
    levels.push_back({make_block(all, root_rep, Block::npos)});
    std::vector<Open> frontier{{all, root_rep}};
    for (std::size_t n = 1;; ++n) {
      bool all_single = true;
      for (const auto& o : frontier) all_single &= std::popcount(o.mask) == 1;
      if (all_single) break;
      std::vector<Open> next;
      std::vector<Block> level;
      for (std::size_t pi = 0; pi < frontier.size(); ++pi) {
        const auto& o = frontier[pi];
        if (std::popcount(o.mask) == 1) {
          level.push_back(make_block(o.mask, o.rep, pi));
          next.push_back(o);
          continue;
        }
        solve(o.mask, n, o.rep);
        const Entry& e = memo_[o.mask][n][o.rep];
        for (std::size_t c = 0; c < e.parts.size(); ++c) {
          level.push_back(make_block(e.parts[c], e.reps[c], pi));
          next.push_back({e.parts[c], e.reps[c]});
        }
      }
      levels.push_back(std::move(level));
      frontier = std::move(next);
    }
    return PartitionTree(size_, std::move(levels));
  }

 private:
  struct Entry {
    bool done = false;
    double cost = 0.0;
    std::vector<unsigned> parts;
    std::vector<std::size_t> reps;
  };

  static Block make_block(unsigned mask, std::size_t rep, std::size_t parent) {
    Block b;
    for (std::size_t i = 0; i < 32; ++i) {
      if (mask >> i & 1U) b.members.push_back(i);
    }
    b.representative = rep;
    b.parent = parent;
    return b;
  }

  double increment(std::size_t from, std::size_t to, std::size_t n) {
    if (from == to) return 0.0;
    const auto key = std::make_tuple(std::min(from, to), std::max(from, to), n);
    auto it = norms_.find(key);
    if (it != norms_.end()) return it->second;
    const double v = model_.norm(set_[to] - set_[from], std::ldexp(1.0, int(n)));
    norms_.emplace(key, v);
    return v;
  }

  // Calls f with every set partition of `mask` (blocks as bit masks).
  template <class F>
  static void for_each_partition(unsigned mask, F&& f) {
    std::vector<unsigned> parts;
    std::function<void(unsigned)> rec = [&](unsigned rest) {
      if (rest == 0) {
        f(parts);
        return;
      }
      const unsigned low = rest & (~rest + 1U);
      const unsigned others = rest & ~low;
      // Every subset of `others` joins the lowest element.
      for (unsigned sub = others;; sub = (sub - 1) & others) {
        parts.push_back(low | sub);
        rec(others & ~sub);
        parts.pop_back();
        if (sub == 0) break;
      }
    };
    rec(mask);
  }

  const FiniteSet& set_;
  const MomentModel& model_;
  std::size_t size_;
  std::size_t max_depth_;
  std::vector<std::vector<std::vector<Entry>>> memo_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> norms_;
};

}  // namespace

ChainBound exhaustive_gamma(const FiniteSet& set, const MomentModel& model) {
  if (set.size() > kExhaustiveMaxSize) {
    throw CapacityError("exhaustive gamma needs |F| <= " +
                        std::to_string(kExhaustiveMaxSize) + " (got " +
                        std::to_string(set.size()) + ")");
  }
  ExhaustiveSearch search(set, model);
  std::size_t root_rep = 0;
  search.best_root(root_rep);
  PartitionTree tree = search.build(root_rep);
  // Re-evaluate through the public path so value and per-point sums agree.
  return chain_bound(set, tree, model);
}

ComparisonReport verify_theorem2(const FiniteSet& set, ProcessKind kind,
                                 std::size_t samples, Seed seed,
                                 std::size_t d_max) {
  const PartitionTree tree = build_partition_greedy(set);
  SupEstimate sup;
  MomentModel model = MomentModel::gaussian_exact();
  if (kind == ProcessKind::Bernoulli) {
    if (set.dim() <= d_max) {
      sup = brute_force_bernoulli_sup(set, d_max);
      model = MomentModel::bernoulli_exact(d_max);
    } else {
      sup = mc_sup(kind, set, samples, seed);
      model = MomentModel::bernoulli_proxy();
    }
  } else {
    sup = mc_sup(kind, set, samples, seed);
  }
  const ChainBound bound = chain_bound(set, tree, model);
  const std::string s_name = kind == ProcessKind::Bernoulli ? "S_B" : "S_G";
  return make_comparison(s_name + "(F) <= 4 * chain_bound(F)",
                         {s_name, sup.value, sup.std_error},
                         {"chain_bound/" + std::string(to_string(model.kind())),
                          bound.value, 0.0},
                         4.0);
}

}  // namespace canonproc
