#pragma once

// Slow, direct reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline long double dot_signs(const Vec& t, unsigned long mask) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < t.size(); ++i) s += (mask >> i & 1UL) ? -t[i] : t[i];
  return s;
}

// (E|sum eps_i t_i|^p)^(1/p) by looping over every sign mask.
inline double bernoulli_norm(const Vec& t, double p) {
  const unsigned long n = 1UL << t.size();
  long double acc = 0.0L;
  for (unsigned long m = 0; m < n; ++m) acc += std::pow(std::fabs(dot_signs(t, m)), (long double)p);
  return double(std::pow(acc / n, 1.0L / p));
}

// E max_t sum eps_i t_i.
inline double bernoulli_sup(const std::vector<Vec>& pts) {
  const unsigned long n = 1UL << pts.front().size();
  long double acc = 0.0L;
  for (unsigned long m = 0; m < n; ++m) {
    long double best = -std::numeric_limits<long double>::infinity();
    for (const auto& t : pts) best = std::max(best, dot_signs(t, m));
    acc += best;
  }
  return double(acc / n);
}

// E|g|^p by composite Simpson on [0, 60], g standard normal.
inline double gaussian_abs_moment(double p) {
  const int n = 600000;
  const long double h = 60.0L / n;
  const long double c = std::sqrt(2.0L / 3.14159265358979323846264338327950288L);
  auto f = [&](long double x) {
    return x == 0.0L ? (p == 0.0 ? c : 0.0L) : c * std::pow(x, (long double)p) * std::exp(-x * x / 2);
  };
  long double s = f(0) + f(60.0L);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
  return double(s * h / 3);
}

inline double gaussian_norm(const Vec& t, double p) {
  double s = 0.0;
  for (double x : t) s += x * x;
  return std::sqrt(s) * std::pow(gaussian_abs_moment(p), 1.0 / p);
}

// Sum of the p largest |t_i| plus sqrt(p) times the l2 norm of the rest,
// via a full sort.
inline double proxy(Vec t, std::size_t p) {
  for (double& x : t) x = std::fabs(x);
  std::sort(t.begin(), t.end(), std::greater<>());
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i < p) head += t[i];
    else tail += t[i] * t[i];
  }
  return head + std::sqrt(double(p)) * std::sqrt(tail);
}

// min over I with |I^c| <= p of sum_{i in I} (t_i - s_i)^2, by subsets.
inline double trimmed_sq(const Vec& s, const Vec& t, std::size_t p) {
  const std::size_t d = t.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long m = 0; m < (1UL << d); ++m) {
    if (std::size_t(__builtin_popcountl(m)) > p) continue;
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (!(m >> i & 1UL)) acc += (t[i] - s[i]) * (t[i] - s[i]);
    }
    best = std::min(best, acc);
  }
  return best;
}

// All set partitions of `items` (restricted growth strings).
inline std::vector<std::vector<std::vector<std::size_t>>> partitions(
    const std::vector<std::size_t>& items) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  std::vector<std::size_t> label(items.size(), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == items.size()) {
      std::vector<std::vector<std::size_t>> blocks(used);
      for (std::size_t k = 0; k < items.size(); ++k) blocks[label[k]].push_back(items[k]);
      out.push_back(std::move(blocks));
      return;
    }
    for (std::size_t l = 0; l <= used; ++l) {
      label[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (!items.empty()) rec(0, 0);
  return out;
}

// Minimum over nested admissible partition sequences (levels 1..|F|, ending in
// singletons, |A_n| <= 2^(2^n)) and representatives of the worst chain sum,
// where dist(a, b, n) is the cost of moving from point a to b at level n.
inline double gamma_bruteforce(std::size_t size,
                               const std::function<double(std::size_t, std::size_t, std::size_t)>& dist) {
  struct Part {
    std::vector<std::size_t> members;
    std::size_t rep;
  };
  auto budget = [](std::size_t n) { return n >= 6 ? ~0ULL : 1ULL << (1ULL << n); };
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> sums(size, 0.0);

  std::function<void(const std::vector<Part>&, std::size_t)> level;
  level = [&](const std::vector<Part>& current, std::size_t n) {
    bool done = std::all_of(current.begin(), current.end(),
                            [](const Part& p) { return p.members.size() == 1; });
    if (done) {
      best = std::min(best, *std::max_element(sums.begin(), sums.end()));
      return;
    }
    if (n > size) return;
    // Choose a refinement of every block, then representatives.
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> options;
    for (const auto& p : current) options.push_back(partitions(p.members));
    std::vector<Part> next;
    std::function<void(std::size_t)> pick_block = [&](std::size_t b) {
      if (next.size() > budget(n)) return;
      if (b == current.size()) {
        level(next, n + 1);
        return;
      }
      for (const auto& refinement : options[b]) {
        const std::size_t base = next.size();
        std::function<void(std::size_t)> pick_rep = [&](std::size_t k) {
          if (k == refinement.size()) {
            pick_block(b + 1);
            return;
          }
          for (std::size_t r : refinement[k]) {
            const double c = r == current[b].rep ? 0.0 : dist(current[b].rep, r, n);
            for (std::size_t m : refinement[k]) sums[m] += c;
            next.push_back({refinement[k], r});
            pick_rep(k + 1);
            next.pop_back();
            for (std::size_t m : refinement[k]) sums[m] -= c;
          }
        };
        pick_rep(0);
        next.resize(base);
      }
    };
    pick_block(0);
  };

  std::vector<std::size_t> all(size);
  for (std::size_t i = 0; i < size; ++i) all[i] = i;
  for (std::size_t r = 0; r < size; ++r) level({Part{all, r}}, 1);
  return best;
}

}  // namespace oracle
