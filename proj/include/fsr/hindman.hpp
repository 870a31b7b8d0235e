#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <unordered_set>
#include <vector>

#include "fsr/coloring.hpp"
#include "fsr/constructions.hpp"
#include "fsr/core.hpp"
#include "fsr/fs_set.hpp"
#include "fsr/index_set.hpp"

namespace fsr {

namespace detail {

/// Evaluates strata in index order across `workers` threads and returns the
/// result of the least stratum that produced one.  Strata past the current
/// best hit are skipped; the outcome does not depend on scheduling.
template <typename R>
std::optional<R> parallel_least_hit(std::size_t strata, unsigned workers,
                                    const std::function<std::optional<R>(std::size_t)>& eval) {
  if (strata == 0) return std::nullopt;
  if (workers <= 1) {
    for (std::size_t i = 0; i < strata; ++i)
      if (auto r = eval(i)) return r;
    return std::nullopt;
  }
  std::vector<std::optional<R>> results(strata);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{strata};
  auto run = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= strata) return;
      if (i > best.load()) continue;
      auto r = eval(i);
      if (r) {
        results[i] = std::move(r);
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < strata; ++i)
    if (results[i]) return std::move(results[i]);
  return std::nullopt;
}

}  // namespace detail

/// A bijective prefix whose full finite-sums set lies inside the universe and
/// carries one color.
struct MonoFsWitness {
  SumsequencePrefix sumsequence;
  FsSet fs;
  std::uint32_t color = 0;
};

/// Independent re-check: recompute every sum by direct subset enumeration and
/// every color from scratch.
inline bool verify_mono_fs(const Universe& u, const Coloring& coloring, const MonoFsWitness& w) {
  const SemigroupHandle& s = w.sumsequence.base.semigroup;
  SumsequencePrefix replay;
  try {
    replay = make_sumsequence(w.sumsequence.base, w.sumsequence.index_sets);
  } catch (const Error&) {
    return false;
  }
  if (replay.derived != w.sumsequence.derived) return false;
  if (!is_bijective_prefix(replay.derived_prefix())) return false;
  const auto& b = replay.derived;
  std::unordered_set<Element, ElementHash> fs;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << b.size()); ++mask) {
    std::optional<Element> acc;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) acc = acc ? s.add(*acc, b[i]) : b[i];
    fs.insert(*acc);
  }
  if (fs.size() != w.fs.elements.size()) return false;
  for (const auto& e : w.fs.elements) {
    if (!fs.count(e)) return false;
    auto c = u.color_of(coloring, e);
    if (!c || *c != w.color) return false;
  }
  for (std::size_t i = 0; i < w.fs.elements.size(); ++i)
    if (sum_over(replay.derived_prefix(), w.fs.witnesses[i]) != w.fs.elements[i]) return false;
  return true;
}

namespace detail {

/// Core monochromatic finite-sums search over singleton picks from the
/// universe, in lexicographic order of picked ranks.  `color_fn` may return
/// nullopt for elements that are off limits; `max_color` bounds accepted
/// witness colors (used by the recoloring loop to shut out bookkeeping
/// colors).
inline std::optional<std::vector<std::uint32_t>> mono_fs_scan(
    const Universe& u, const std::function<std::optional<std::uint32_t>(const Element&)>& color_fn,
    std::size_t k, std::uint64_t budget, std::uint32_t max_color, std::size_t first_rank,
    std::uint64_t& nodes) {
  const SemigroupHandle& s = u.prefix.semigroup;
  const std::size_t n = u.size();
  std::vector<std::uint32_t> chosen;
  std::vector<Element> fs_list;
  std::unordered_set<Element, ElementHash> fs_set;
  std::optional<std::uint32_t> color;

  std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
    if (chosen.size() == k) return true;
    for (std::size_t r = from; r <= n; ++r) {
      if (chosen.empty() && first_rank != 0 && r != first_rank) continue;
      if (nodes >= budget) return false;
      ++nodes;
      const Element& cand = u.prefix.elements[r - 1];
      if (fs_set.count(cand)) continue;  // not bijective / collides with a sum
      auto c0 = color_fn(cand);
      if (!c0 || *c0 > max_color) continue;
      if (color && *c0 != *color) continue;
      std::vector<Element> fresh;
      fresh.push_back(cand);
      bool ok = true;
      for (const auto& e : fs_list) {
        Element t = s.add(e, cand);
        auto ct = color_fn(t);
        if (!ct || ct != c0) {
          ok = false;
          break;
        }
        fresh.push_back(std::move(t));
      }
      if (!ok) continue;
      // All fresh sums must be new distinct values to keep the prefix
      // bijective and the witness replayable.
      std::optional<std::uint32_t> saved_color = color;
      std::vector<Element> inserted;
      for (auto& e : fresh) {
        if (fs_set.insert(e).second) inserted.push_back(e);
      }
      std::size_t fs_list_len = fs_list.size();
      for (const auto& e : inserted) fs_list.push_back(e);
      chosen.push_back(static_cast<std::uint32_t>(r));
      color = c0;
      if (dfs(r + 1)) return true;
      chosen.pop_back();
      color = saved_color;
      fs_list.resize(fs_list_len);
      for (const auto& e : inserted) fs_set.erase(e);
      if (chosen.empty() && first_rank != 0) break;
    }
    return false;
  };
  if (dfs(1)) return chosen;
  return std::nullopt;
}

}  // namespace detail

/// First (in rank-lexicographic order) bijective k-term prefix drawn from the
/// universe whose finite-sums set stays inside the universe and is
/// monochromatic.
inline std::optional<MonoFsWitness> find_mono_fs(const Universe& u, const Coloring& coloring,
                                                 std::size_t k, std::uint64_t budget = 1'000'000,
                                                 unsigned workers = 1) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  const std::size_t n = u.size();
  if (n == 0 || k > n) return std::nullopt;
  auto color_fn = [&](const Element& e) { return u.color_of(coloring, e); };
  const std::size_t strata = n - k + 1;
  const std::uint64_t stratum_budget = std::max<std::uint64_t>(1, budget / strata);
  auto eval = [&](std::size_t i) -> std::optional<std::vector<std::uint32_t>> {
    std::uint64_t nodes = 0;
    return detail::mono_fs_scan(u, color_fn, k, stratum_budget, coloring.colors, i + 1, nodes);
  };
  auto hit = detail::parallel_least_hit<std::vector<std::uint32_t>>(strata, workers, eval);
  if (!hit) return std::nullopt;
  MonoFsWitness w;
  w.sumsequence = make_subsequence(u.prefix, *hit);
  w.fs = fs_set(w.sumsequence.derived_prefix());
  w.color = *u.color_of(coloring, w.sumsequence.derived.front());
  return w;
}

/// Like find_mono_fs, but candidates are sumsequences of `base`: increasing
/// index-set chains whose derived terms are pairwise distinct.
inline std::optional<MonoFsWitness> find_mono_fs_within(const Universe& u,
                                                        const SequencePrefix& base,
                                                        const Coloring& coloring, std::size_t k,
                                                        std::uint64_t budget = 1'000'000,
                                                        std::size_t max_block = 3) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  const SemigroupHandle& s = base.semigroup;
  const auto candidates = detail::candidate_sets(base.length(), max_block);
  std::uint64_t nodes = 0;
  std::vector<IndexSet> chain;
  std::vector<Element> fs_list;
  std::unordered_set<Element, ElementHash> fs_set_;
  std::optional<std::uint32_t> color;

  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t last_max) -> bool {
    if (chain.size() == k) return true;
    for (const auto& f : candidates) {
      if (f.min() <= last_max) continue;
      if (nodes >= budget) return false;
      ++nodes;
      Element cand = sum_over(base, f);
      if (fs_set_.count(cand)) continue;
      auto c0 = u.color_of(coloring, cand);
      if (!c0) continue;
      if (color && *c0 != *color) continue;
      std::vector<Element> fresh;
      fresh.push_back(cand);
      bool ok = true;
      for (const auto& e : fs_list) {
        Element t = s.add(e, cand);
        auto ct = u.color_of(coloring, t);
        if (!ct || ct != c0) {
          ok = false;
          break;
        }
        fresh.push_back(std::move(t));
      }
      if (!ok) continue;
      std::optional<std::uint32_t> saved_color = color;
      std::vector<Element> inserted;
      for (auto& e : fresh)
        if (fs_set_.insert(e).second) inserted.push_back(e);
      std::size_t fs_len = fs_list.size();
      for (const auto& e : inserted) fs_list.push_back(e);
      chain.push_back(f);
      color = c0;
      if (dfs(f.max())) return true;
      chain.pop_back();
      color = saved_color;
      fs_list.resize(fs_len);
      for (const auto& e : inserted) fs_set_.erase(e);
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  MonoFsWitness w;
  w.sumsequence = make_sumsequence(base, chain);
  w.fs = fs_set(w.sumsequence.derived_prefix());
  w.color = *color;
  return w;
}

struct ThresholdResult {
  bool reached = false;
  std::size_t threshold = 0;                          // least forced universe size
  std::vector<std::uint32_t> avoider;                 // rank colors 1..threshold-1
  std::uint64_t colorings_checked = 0;
};

namespace detail {

/// Witness check used inside the threshold scan: some bijective k-subset of
/// ranks whose FS stays inside [1..n] and is monochromatic under `colors`.
inline bool forced_coloring(const Universe& u, const std::vector<std::uint32_t>& colors,
                            std::size_t k) {
  const SemigroupHandle& s = u.prefix.semigroup;
  const std::size_t n = colors.size();
  std::vector<std::uint32_t> chosen;
  std::vector<Element> fs_list;
  std::unordered_set<Element, ElementHash> fs_set_;
  std::function<bool(std::size_t, std::uint32_t)> dfs = [&](std::size_t from,
                                                            std::uint32_t color) -> bool {
    if (chosen.size() == k) return true;
    for (std::size_t r = from; r <= n; ++r) {
      const Element& cand = u.prefix.elements[r - 1];
      if (fs_set_.count(cand)) continue;
      if (colors[r - 1] != color && !chosen.empty()) continue;
      std::uint32_t c0 = chosen.empty() ? colors[r - 1] : color;
      std::vector<Element> fresh;
      fresh.push_back(cand);
      bool ok = true;
      for (const auto& e : fs_list) {
        Element t = s.add(e, cand);
        auto rank = u.rank(t);
        if (!rank || *rank > n || colors[*rank - 1] != c0) {
          ok = false;
          break;
        }
        fresh.push_back(std::move(t));
      }
      if (!ok) continue;
      std::vector<Element> inserted;
      for (auto& e : fresh)
        if (fs_set_.insert(e).second) inserted.push_back(e);
      std::size_t len = fs_list.size();
      for (const auto& e : inserted) fs_list.push_back(e);
      chosen.push_back(static_cast<std::uint32_t>(r));
      if (dfs(r + 1, c0)) return true;
      chosen.pop_back();
      fs_list.resize(len);
      for (const auto& e : inserted) fs_set_.erase(e);
    }
    return false;
  };
  return dfs(1, 0);
}

}  // namespace detail

/// Least universe size N (up to max_n) such that every r-coloring of the
/// first N enumerated elements forces a k-term monochromatic finite-sums
/// witness; the returned avoider certifies N-1.  The first element's color is
/// pinned to 0 (color permutations preserve forcing), and colorings are
/// enumerated exhaustively within each leading-pattern stratum.
inline ThresholdResult exhaustive_threshold(const SemigroupHandle& s, std::size_t k,
                                            std::uint32_t r, std::size_t max_n,
                                            unsigned workers = 1) {
  if (r < 1 || k < 2) throw Error(ErrorCode::InvalidParameter, "need r >= 1 and k >= 2");
  ThresholdResult out;
  std::vector<std::uint32_t> last_avoider;
  std::uint64_t checked = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto u = make_universe(s, n);
    if (u.size() < n) break;  // carrier exhausted; larger universes impossible
    // Stratify on the colors of ranks 2..4; each stratum enumerates the rest.
    const std::size_t fixed = n >= 4 ? 3 : (n - 1);
    std::size_t strata = 1;
    for (std::size_t i = 0; i < fixed; ++i) strata *= r;
    std::atomic<std::uint64_t> stratum_checked{0};
    auto eval = [&](std::size_t stratum) -> std::optional<std::vector<std::uint32_t>> {
      std::vector<std::uint32_t> colors(n, 0);
      std::size_t rem = stratum;
      for (std::size_t i = 0; i < fixed; ++i) {
        colors[1 + i] = static_cast<std::uint32_t>(rem % r);
        rem /= r;
      }
      const std::size_t free_from = 1 + fixed;
      std::vector<std::uint32_t> found;
      std::function<bool(std::size_t)> enumerate = [&](std::size_t pos) -> bool {
        if (pos == n) {
          stratum_checked.fetch_add(1);
          if (!detail::forced_coloring(u, colors, k)) {
            found = colors;
            return true;
          }
          return false;
        }
        for (std::uint32_t c = 0; c < r; ++c) {
          colors[pos] = c;
          if (enumerate(pos + 1)) return true;
        }
        return false;
      };
      if (enumerate(free_from)) return found;
      return std::nullopt;
    };
    auto avoider = detail::parallel_least_hit<std::vector<std::uint32_t>>(strata, workers, eval);
    checked += stratum_checked.load();
    if (!avoider) {
      out.reached = true;
      out.threshold = n;
      out.avoider = std::move(last_avoider);
      out.colorings_checked = checked;
      return out;
    }
    last_avoider = std::move(*avoider);
  }
  out.colorings_checked = checked;
  return out;
}

struct DisjointFamilies {
  std::vector<MonoFsWitness> families;  // monochromatic under the original coloring
  std::vector<FsSet> fs2_sets;          // the finite B_i recorded per family
  struct TraceEntry {
    std::size_t iteration = 0;
    bool found = false;
    std::uint32_t color = 0;
    std::size_t alpha_size = 0;  // recolored A \ B so far
    std::size_t beta_size = 0;   // recolored B so far
  };
  std::vector<TraceEntry> trace;
};

/// Iteratively finds monochromatic finite-sums families, after each one
/// recoloring its elements with two bookkeeping colors (alpha on A \ B, beta
/// on B, where B is the FS>=2 part of the found prefix) and searching again.
/// Returned families are pairwise disjoint and monochromatic under the
/// original coloring.
inline DisjointFamilies find_disjoint_mono_families(const Universe& u, const Coloring& coloring,
                                                    std::size_t m, std::size_t k,
                                                    std::uint64_t budget = 1'000'000) {
  if (m < 1 || k < 2) throw Error(ErrorCode::InvalidParameter, "need m >= 1 and k >= 2");
  DisjointFamilies out;
  std::unordered_set<Element, ElementHash> alpha, beta;
  const std::uint32_t alpha_color = coloring.colors;
  const std::uint32_t beta_color = coloring.colors + 1;
  for (std::size_t iter = 1; iter <= m; ++iter) {
    auto color_fn = [&](const Element& e) -> std::optional<std::uint32_t> {
      if (beta.count(e)) return beta_color;
      if (alpha.count(e)) return alpha_color;
      return u.color_of(coloring, e);
    };
    std::uint64_t nodes = 0;
    auto hit = detail::mono_fs_scan(u, color_fn, k, budget, coloring.colors - 1, 0, nodes);
    DisjointFamilies::TraceEntry t;
    t.iteration = iter;
    if (!hit) {
      t.alpha_size = alpha.size();
      t.beta_size = beta.size();
      out.trace.push_back(t);
      break;
    }
    MonoFsWitness w;
    w.sumsequence = make_subsequence(u.prefix, *hit);
    w.fs = fs_set(w.sumsequence.derived_prefix());
    w.color = *u.color_of(coloring, w.sumsequence.derived.front());
    FsSet b_set = fs_ge2(w.sumsequence.derived_prefix());
    std::unordered_set<Element, ElementHash> b_elems(b_set.elements.begin(), b_set.elements.end());
    for (const auto& e : w.fs.elements)
      if (b_elems.count(e)) beta.insert(e);
      else alpha.insert(e);
    t.found = true;
    t.color = w.color;
    t.alpha_size = alpha.size();
    t.beta_size = beta.size();
    out.trace.push_back(t);
    out.families.push_back(std::move(w));
    out.fs2_sets.push_back(std::move(b_set));
  }
  return out;
}

}  // namespace fsr
