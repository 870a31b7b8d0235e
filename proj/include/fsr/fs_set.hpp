#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsr/core.hpp"
#include "fsr/index_set.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

inline constexpr std::size_t kDefaultPrefixCap = 22;
inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 22;

/// Deduplicated finite-sums set with one witness index set per element.
/// Witnesses are the least index sets in bitmask order and replay exactly:
/// folding the prefix over witnesses[i] yields elements[i].
struct FsSet {
  std::vector<Element> elements;   // sorted in the semigroup's rank order
  std::vector<IndexSet> witnesses; // parallel to elements

  std::size_t size() const { return elements.size(); }
  bool contains(const Element& e) const {
    for (const auto& x : elements)
      if (x == e) return true;
    return false;
  }
};

namespace detail {

using MaskMap = std::unordered_map<Element, std::uint64_t, ElementHash>;

inline void upsert_min(MaskMap& m, const Element& e, std::uint64_t mask) {
  auto [it, inserted] = m.emplace(e, mask);
  if (!inserted && mask < it->second) it->second = mask;
}

struct FsDp {
  MaskMap all;  // element -> least mask over any nonempty F
  MaskMap ge2;  // element -> least mask over F with |F| >= 2
};

inline FsDp fs_forward_dp(const SequencePrefix& p, std::size_t cap) {
  const std::size_t n = p.length();
  if (n > cap || n > 63)
    throw Error(ErrorCode::PrefixTooLong,
                "prefix length " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  FsDp dp;
  std::vector<std::pair<Element, std::uint64_t>> snapshot;
  for (std::size_t j = 0; j < n; ++j) {
    const Element& a = p.elements[j];
    const std::uint64_t bit = 1ull << j;
    snapshot.assign(dp.all.begin(), dp.all.end());
    for (const auto& [e, m] : snapshot) {
      Element s = p.semigroup.add(e, a);
      upsert_min(dp.all, s, m | bit);
      upsert_min(dp.ge2, std::move(s), m | bit);
    }
    upsert_min(dp.all, a, bit);
  }
  return dp;
}

inline FsSet collect_fs(const SemigroupHandle& s, const MaskMap& m) {
  std::vector<std::pair<Element, std::uint64_t>> items(m.begin(), m.end());
  std::sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
    return s.rank_less(a.first, b.first);
  });
  FsSet out;
  out.elements.reserve(items.size());
  out.witnesses.reserve(items.size());
  for (auto& [e, mask] : items) {
    out.elements.push_back(std::move(e));
    out.witnesses.push_back(IndexSet::from_mask(mask));
  }
  return out;
}

/// Set of all sums a_F with F a nonempty subset of positions [from..to]
/// (1-based, inclusive).  Witness-free; size-guarded.
inline std::unordered_set<Element, ElementHash> fs_window_set(const SequencePrefix& p,
                                                              std::size_t from, std::size_t to,
                                                              std::size_t budget) {
  std::unordered_set<Element, ElementHash> s;
  std::vector<Element> fresh;
  for (std::size_t j = to; j >= from; --j) {
    const Element& a = p.elements[j - 1];
    fresh.clear();
    fresh.push_back(a);
    for (const auto& e : s) fresh.push_back(p.semigroup.add(a, e));
    for (auto& e : fresh) s.insert(std::move(e));
    if (s.size() > budget)
      throw Error(ErrorCode::PrefixTooLong, "finite-sums state exceeds budget");
  }
  return s;
}

/// Dense subset-sum table over a short prefix: pool of distinct sums plus a
/// per-mask pool id.  Fold order is left to right.
struct MaskTable {
  std::vector<Element> pool;
  std::unordered_map<Element, std::uint32_t, ElementHash> id_of;
  std::vector<std::uint32_t> value_id;  // indexed by mask, [1 .. 2^n-1]
  std::size_t n = 0;

  std::uint32_t intern(const Element& e) {
    auto it = id_of.find(e);
    if (it != id_of.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(pool.size());
    pool.push_back(e);
    id_of.emplace(e, id);
    return id;
  }
};

inline MaskTable mask_table(const SequencePrefix& p, std::size_t cap) {
  const std::size_t n = p.length();
  if (n > cap || n > 24)
    throw Error(ErrorCode::PrefixTooLong,
                "prefix length " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  MaskTable t;
  t.n = n;
  t.value_id.assign(std::size_t{1} << n, 0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    int high = 63 - __builtin_clzll(mask);
    const Element& a = p.elements[high];
    if (mask == (std::uint64_t{1} << high)) {
      t.value_id[mask] = t.intern(a);
    } else {
      const Element& prefix_sum = t.pool[t.value_id[mask ^ (std::uint64_t{1} << high)]];
      t.value_id[mask] = t.intern(p.semigroup.add(prefix_sum, a));
    }
  }
  return t;
}

}  // namespace detail

inline FsSet fs_set(const SequencePrefix& p, std::size_t cap = kDefaultPrefixCap) {
  return detail::collect_fs(p.semigroup, detail::fs_forward_dp(p, cap).all);
}

inline FsSet fs_ge2(const SequencePrefix& p, std::size_t cap = kDefaultPrefixCap) {
  return detail::collect_fs(p.semigroup, detail::fs_forward_dp(p, cap).ge2);
}

inline std::unordered_set<Element, ElementHash> fs_element_set(
    const SequencePrefix& p, std::size_t budget = kDefaultStateBudget) {
  return detail::fs_window_set(p, 1, p.length(), budget);
}

inline bool is_bijective_prefix(const SequencePrefix& p) {
  std::unordered_set<Element, ElementHash> seen;
  for (const auto& e : p.elements)
    if (!seen.insert(e).second) return false;
  return true;
}

struct ProperResult {
  bool proper = true;
  IndexSet f1, f2;  // least violating pair when !proper
};

/// A prefix is proper when a_{F1} != a_{F2} for all F1 < F2.  On failure the
/// least violating pair in bitmask order is returned.
inline ProperResult is_proper_prefix(const SequencePrefix& p, std::size_t cap = kDefaultPrefixCap) {
  const std::size_t n = p.length();
  auto table = detail::mask_table(p, cap);
  // latest_start[id] = largest j such that the value appears as a_F with
  // F ⊆ [j..n]; suffix FS sets are nested, so membership is monotone in j.
  std::vector<std::uint32_t> latest_start(table.pool.size(), 0);
  {
    std::unordered_set<std::uint32_t> suffix;
    for (std::size_t j = n; j >= 1; --j) {
      std::vector<std::uint32_t> fresh;
      const Element& a = p.elements[j - 1];
      fresh.push_back(table.id_of.at(a));
      for (auto id : suffix) {
        auto it = table.id_of.find(p.semigroup.add(a, table.pool[id]));
        fresh.push_back(it->second);
      }
      for (auto id : fresh)
        if (suffix.insert(id).second) latest_start[id] = static_cast<std::uint32_t>(j);
    }
  }
  if (n >= 2) {
    for (std::uint64_t f1 = 1; f1 < (std::uint64_t{1} << (n - 1)); ++f1) {
      int high = 63 - __builtin_clzll(f1);
      std::uint32_t id = table.value_id[f1];
      if (latest_start[id] >= static_cast<std::uint32_t>(high + 2)) {
        // Least F2 above position high+1 with the same value.
        const std::uint64_t range = ((std::uint64_t{1} << n) - 1) & ~((std::uint64_t{2} << high) - 1);
        for (std::uint64_t f2 = range & (~range + 1);; f2 = ((f2 | ~range) + 1) & range) {
          if (table.value_id[f2] == id)
            return ProperResult{false, IndexSet::from_mask(f1), IndexSet::from_mask(f2)};
          if (f2 == range) break;
        }
      }
    }
  }
  return ProperResult{};
}

struct DisjointProperResult {
  bool holds = true;
  IndexSet f, g;  // least violating disjoint pair when !holds
};

/// Checks a_F != a_G for every pair of disjoint nonempty index sets.
inline DisjointProperResult disjoint_proper_check(const SequencePrefix& p,
                                                  std::size_t cap = kDefaultPrefixCap) {
  auto table = detail::mask_table(p, cap);
  const std::uint64_t full = (std::uint64_t{1} << table.n) - 1;
  std::vector<std::vector<std::uint64_t>> buckets(table.pool.size());
  for (std::uint64_t m = 1; m <= full; ++m) buckets[table.value_id[m]].push_back(m);
  // A bucket whose masks share a common position has no disjoint pair.
  std::vector<bool> skip(buckets.size(), false);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::uint64_t shared = full;
    for (auto m : buckets[b]) shared &= m;
    skip[b] = shared != 0;
  }
  for (std::uint64_t f = 1; f <= full; ++f) {
    std::uint32_t id = table.value_id[f];
    if (skip[id]) continue;
    for (auto g : buckets[id])
      if (g != f && (g & f) == 0)
        return DisjointProperResult{false, IndexSet::from_mask(f), IndexSet::from_mask(g)};
  }
  return DisjointProperResult{};
}

/// Structural self-test: FS(a) must equal
/// FS(head) ∪ FS(tail) ∪ (FS(head) + FS(tail)) for any split.
inline bool fs_decomposition_check(const SequencePrefix& p, std::size_t split,
                                   std::size_t cap = kDefaultPrefixCap) {
  const std::size_t n = p.length();
  if (split < 1 || split >= n) throw Error(ErrorCode::InvalidParameter, "split must be in 1..n-1");
  if (n > cap) throw Error(ErrorCode::PrefixTooLong, "prefix exceeds cap");
  auto whole = detail::fs_window_set(p, 1, n, kDefaultStateBudget);
  auto head = detail::fs_window_set(p, 1, split, kDefaultStateBudget);
  auto tail = detail::fs_window_set(p, split + 1, n, kDefaultStateBudget);
  std::unordered_set<Element, ElementHash> combined;
  for (const auto& h : head) combined.insert(h);
  for (const auto& t : tail) combined.insert(t);
  for (const auto& h : head)
    for (const auto& t : tail) combined.insert(p.semigroup.add(h, t));
  return combined == whole;
}

enum class TailStatus { stable, unstable, empty };

inline const char* to_string(TailStatus s) {
  switch (s) {
    case TailStatus::stable: return "stable";
    case TailStatus::unstable: return "unstable";
    case TailStatus::empty: return "empty";
  }
  return "?";
}

/// Result of a horizon-bounded tail-intersection computation.  snapshots[i]
/// is the running intersection of the per-horizon window sets
/// FS(a_{ceil(H/2)}, ..., a_H) over horizons up to schedule[i]; it is the
/// at-horizon approximation of the limit set and shrinks monotonically.
/// Nothing stronger than "stable at horizon" is ever claimed.
struct HorizonReport {
  std::vector<std::size_t> horizon_schedule;
  std::vector<std::vector<Element>> snapshots;
  TailStatus status = TailStatus::unstable;
  std::vector<Element> stable_value;  // set when status == stable
  std::size_t stability_window = 3;
};

/// Increasing horizon schedule used when the caller does not supply one:
/// up to six points halving down from h_max, never below 8, padded for
/// short prefixes.
inline std::vector<std::size_t> default_schedule(std::size_t h_max) {
  if (h_max < 2) throw Error(ErrorCode::InvalidParameter, "horizon must be at least 2");
  std::vector<std::size_t> v;
  std::size_t h = h_max;
  while (v.size() < 6 && h >= 8) {
    v.push_back(h);
    h /= 2;
  }
  if (v.empty()) v.push_back(h_max);
  while (v.size() < 4 && v.back() > 2) v.push_back(v.back() - 1);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline HorizonReport tail_intersection(const SequencePrefix& p, std::vector<std::size_t> schedule,
                                       std::size_t stability_window = 3,
                                       std::size_t state_budget = kDefaultStateBudget) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidParameter, "schedule must be nonempty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || (i > 0 && schedule[i] <= schedule[i - 1]))
      throw Error(ErrorCode::InvalidParameter, "schedule must be strictly increasing");
    if (schedule[i] > p.length())
      throw Error(ErrorCode::PrefixTooLong, "horizon beyond available prefix");
  }
  HorizonReport r;
  r.horizon_schedule = schedule;
  r.stability_window = stability_window;
  std::unordered_set<Element, ElementHash> running;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::size_t h = schedule[i];
    const std::size_t m = (h + 1) / 2;
    auto window = detail::fs_window_set(p, m, h, state_budget);
    if (i == 0) {
      running = std::move(window);
    } else {
      std::unordered_set<Element, ElementHash> next;
      for (const auto& e : running)
        if (window.count(e)) next.insert(e);
      running = std::move(next);
    }
    std::vector<Element> snap(running.begin(), running.end());
    std::sort(snap.begin(), snap.end(), [&](const Element& a, const Element& b) {
      return p.semigroup.rank_less(a, b);
    });
    r.snapshots.push_back(std::move(snap));
  }
  if (r.snapshots.back().empty()) {
    r.status = TailStatus::empty;
  } else if (r.snapshots.size() >= stability_window) {
    bool stable = true;
    const auto& last = r.snapshots.back();
    for (std::size_t i = r.snapshots.size() - stability_window; i < r.snapshots.size(); ++i)
      if (r.snapshots[i] != last) stable = false;
    if (stable) {
      r.status = TailStatus::stable;
      r.stable_value = last;
    }
  }
  return r;
}

inline HorizonReport tail_intersection(const SequencePrefix& p) {
  return tail_intersection(p, default_schedule(p.length()));
}

}  // namespace fsr
