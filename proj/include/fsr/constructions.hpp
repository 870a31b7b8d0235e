#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsr/core.hpp"
#include "fsr/fs_set.hpp"
#include "fsr/index_set.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// All index sets over [1..h] of size <= max_size, sorted in bitmask order.
inline std::vector<IndexSet> candidate_sets(std::size_t h, std::size_t max_size) {
  std::vector<IndexSet> out;
  std::vector<std::uint32_t> cur;
  std::function<void(std::uint32_t)> gen = [&](std::uint32_t from) {
    if (!cur.empty()) out.push_back(IndexSet{cur});
    if (cur.size() == max_size) return;
    for (std::uint32_t i = from; i <= h; ++i) {
      cur.push_back(i);
      gen(i + 1);
      cur.pop_back();
    }
  };
  gen(1);
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

/// latest_start[e] = largest window start j with e in FS(a_j, ..., a_n);
/// suffix finite-sums sets are nested, so membership is monotone in j.
inline std::unordered_map<Element, std::uint32_t, ElementHash> latest_suffix_start(
    const SequencePrefix& p, std::size_t budget = kDefaultStateBudget) {
  std::unordered_map<Element, std::uint32_t, ElementHash> latest;
  std::unordered_set<Element, ElementHash> suffix;
  std::vector<Element> fresh;
  for (std::size_t j = p.length(); j >= 1; --j) {
    const Element& a = p.elements[j - 1];
    fresh.clear();
    fresh.push_back(a);
    for (const auto& e : suffix) fresh.push_back(p.semigroup.add(a, e));
    for (auto& e : fresh)
      if (suffix.insert(e).second) latest.emplace(std::move(e), static_cast<std::uint32_t>(j));
    if (suffix.size() > budget) throw Error(ErrorCode::PrefixTooLong, "suffix state exceeds budget");
  }
  return latest;
}

}  // namespace detail

/// Greedy proper-subsequence extraction in a group: grow the chosen prefix,
/// keeping A = FS(chosen) ∪ {identity}, and accept the next stream element x
/// only when no a in A has a + x back in A (that is, x avoids -A + A).
inline SumsequencePrefix group_proper_subsequence(const SequencePrefix& stream,
                                                  std::size_t target_len) {
  const SemigroupHandle& s = stream.semigroup;
  if (!s.is_group()) throw Error(ErrorCode::NotAGroup, family_name(s.family()));
  if (target_len < 1) throw Error(ErrorCode::InvalidParameter, "target length must be >= 1");
  if (!is_bijective_prefix(stream))
    throw Error(ErrorCode::InvalidParameter, "stream must be bijective");

  std::unordered_set<Element, ElementHash> a_set;
  a_set.insert(s.identity());
  std::vector<std::uint32_t> chosen;
  for (std::uint32_t m = 1; m <= stream.length() && chosen.size() < target_len; ++m) {
    const Element& cand = stream.elements[m - 1];
    bool rejected = false;
    for (const auto& a : a_set)
      if (a_set.count(s.add(a, cand))) {
        rejected = true;
        break;
      }
    if (rejected) continue;
    std::vector<Element> grown;
    grown.reserve(a_set.size());
    for (const auto& a : a_set) grown.push_back(s.add(a, cand));
    for (auto& g : grown) a_set.insert(std::move(g));
    chosen.push_back(m);
  }
  if (chosen.size() < target_len)
    throw Error(ErrorCode::StreamExhausted,
                "only " + std::to_string(chosen.size()) + " of " + std::to_string(target_len) +
                    " elements found");
  return make_subsequence(stream, chosen);
}

/// Builds a proper subsequence from a stream whose tail intersection is
/// empty or unstable at horizon: each next pick starts past every suffix
/// window that still meets the finite-sums set of the chosen prefix.
inline SumsequencePrefix tail_to_proper(const SequencePrefix& stream, std::size_t target_len,
                                        std::vector<std::size_t> schedule = {}) {
  if (target_len < 1) throw Error(ErrorCode::InvalidParameter, "target length must be >= 1");
  if (schedule.empty()) schedule = default_schedule(stream.length());
  HorizonReport base = tail_intersection(stream, schedule);
  if (base.status == TailStatus::stable)
    throw Error(ErrorCode::NonEmptyTailIntersection,
                "tail intersection stable with " + std::to_string(base.stable_value.size()) +
                    " elements at horizon");

  auto latest = detail::latest_suffix_start(stream);
  std::vector<std::uint32_t> chosen;
  std::unordered_set<Element, ElementHash> fs_chosen;
  std::uint32_t next_floor = 1;
  while (chosen.size() < target_len) {
    if (next_floor > stream.length())
      throw Error(ErrorCode::StreamExhausted,
                  "only " + std::to_string(chosen.size()) + " of " + std::to_string(target_len) +
                      " elements found");
    const Element& cand = stream.elements[next_floor - 1];
    std::vector<Element> grown;
    grown.push_back(cand);
    for (const auto& e : fs_chosen) grown.push_back(stream.semigroup.add(e, cand));
    chosen.push_back(next_floor);
    std::uint32_t floor = next_floor + 1;
    for (auto& g : grown) {
      auto it = latest.find(g);
      if (it != latest.end()) floor = std::max(floor, it->second + 1);
      fs_chosen.insert(std::move(g));
    }
    next_floor = floor;
  }
  return make_subsequence(stream, chosen);
}

struct DichotomyResult {
  enum class Kind { type1, type2, inconclusive } kind = Kind::inconclusive;
  std::optional<SumsequencePrefix> witness;
  std::uint64_t budget_used = 0;
};

/// Independent checkers for the two sumsequence laws; never reuse search
/// state.
inline bool verify_type1(const SumsequencePrefix& w) {
  const auto& b = w.derived;
  for (std::size_t n = 0; n < b.size(); ++n)
    for (std::size_t m = n + 1; m < b.size(); ++m)
      if (w.base.semigroup.add(b[n], b[m]) != b[n]) return false;
  return !b.empty();
}

inline bool verify_type2(const SumsequencePrefix& w) {
  const auto& b = w.derived;
  if (b.size() < 2) return false;
  const SemigroupHandle& s = w.base.semigroup;
  for (std::size_t n = 1; n < b.size(); ++n) {
    // FS(b_1..b_n) by direct subset enumeration.
    std::unordered_set<Element, ElementHash> fs;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::optional<Element> acc;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) acc = acc ? s.add(*acc, b[i]) : b[i];
      fs.insert(*acc);
    }
    for (const auto& e : fs)
      if (fs.count(s.add(e, b[n]))) return false;
  }
  return true;
}

/// Searches sumsequence prefixes of the stream for a length-k witness of
/// either law: type 1 (b_n + b_m = b_n for n < m) or type 2 (each next term
/// shifts FS of the prefix entirely off itself).  Type 1 is tried first;
/// candidate index sets are scanned in bitmask order, so results are
/// reproducible.  `inconclusive` only ever means "budget exhausted".
inline DichotomyResult sumsequence_dichotomy(const SequencePrefix& stream, std::size_t target_len,
                                             std::uint64_t budget = 1'000'000,
                                             std::size_t max_block = 3,
                                             std::size_t candidate_horizon = 0) {
  if (target_len < 2) throw Error(ErrorCode::InvalidParameter, "target length must be >= 2");
  if (candidate_horizon == 0)
    candidate_horizon = std::min<std::size_t>(stream.length(), 8 * target_len + 16);
  candidate_horizon = std::min(candidate_horizon, stream.length());
  const auto candidates = detail::candidate_sets(candidate_horizon, max_block);
  const SemigroupHandle& s = stream.semigroup;

  DichotomyResult result;
  std::uint64_t nodes = 0;

  // Type 1: every earlier term absorbs every later one on the right.
  {
    const std::uint64_t limit = budget / 2;
    std::vector<IndexSet> chain;
    std::vector<Element> values;
    std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t last_max) -> bool {
      if (chain.size() == target_len) return true;
      for (const auto& f : candidates) {
        if (f.min() <= last_max) continue;
        if (nodes >= limit) return false;
        ++nodes;
        Element v = sum_over(stream, f);
        bool ok = true;
        for (const auto& prev : values)
          if (s.add(prev, v) != prev) {
            ok = false;
            break;
          }
        if (!ok) continue;
        chain.push_back(f);
        values.push_back(std::move(v));
        if (dfs(f.max())) return true;
        chain.pop_back();
        values.pop_back();
      }
      return false;
    };
    if (dfs(0)) {
      result.kind = DichotomyResult::Kind::type1;
      result.witness = make_sumsequence(stream, chain);
      result.budget_used = nodes;
      return result;
    }
  }

  // Type 2: FS(prefix) and FS(prefix) + b_next stay disjoint at every step.
  {
    std::vector<IndexSet> chain;
    std::unordered_set<Element, ElementHash> fs;
    std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t last_max) -> bool {
      if (chain.size() == target_len) return true;
      for (const auto& f : candidates) {
        if (f.min() <= last_max) continue;
        if (nodes >= budget) return false;
        ++nodes;
        Element v = sum_over(stream, f);
        bool ok = true;
        std::vector<Element> shifted;
        if (!chain.empty()) {
          shifted.reserve(fs.size());
          for (const auto& e : fs) {
            Element t = s.add(e, v);
            if (fs.count(t)) {
              ok = false;
              break;
            }
            shifted.push_back(std::move(t));
          }
        }
        if (!ok) continue;
        chain.push_back(f);
        std::vector<Element> added;
        added.push_back(v);
        for (auto& t : shifted) added.push_back(std::move(t));
        std::vector<Element> inserted;
        for (auto& e : added)
          if (fs.insert(e).second) inserted.push_back(e);
        if (dfs(f.max())) return true;
        chain.pop_back();
        for (const auto& e : inserted) fs.erase(e);
      }
      return false;
    };
    if (dfs(0)) {
      result.kind = DichotomyResult::Kind::type2;
      result.witness = make_sumsequence(stream, chain);
      result.budget_used = nodes;
      return result;
    }
  }

  result.budget_used = nodes;
  return result;
}

struct DisjointIpSplit {
  std::vector<SumsequencePrefix> classes;  // generating subsequences, one per part
  std::vector<FsSet> parts;                // finite-sums set of each class
};

/// Splits a disjointly-proper prefix into m parts by index residue mod m and
/// returns the finite-sums set of each class; the parts are re-verified to be
/// pairwise disjoint.
inline DisjointIpSplit split_into_disjoint_ip(const SequencePrefix& p, std::size_t parts,
                                              std::size_t cap = kDefaultPrefixCap) {
  if (parts < 1) throw Error(ErrorCode::InvalidParameter, "parts must be >= 1");
  if (p.length() < 2 * parts)
    throw Error(ErrorCode::TooShort, "prefix must have length >= 2*parts");
  auto d = disjoint_proper_check(p, cap);
  if (!d.holds)
    throw Error(ErrorCode::NotDisjointProper,
                "a_F = a_G for disjoint F=" + to_string(d.f) + ", G=" + to_string(d.g));
  DisjointIpSplit out;
  for (std::size_t i = 1; i <= parts; ++i) {
    std::vector<std::uint32_t> positions;
    for (std::size_t j = i; j <= p.length(); j += parts)
      positions.push_back(static_cast<std::uint32_t>(j));
    auto sub = make_subsequence(p, positions);
    out.parts.push_back(fs_set(sub.derived_prefix(), cap));
    out.classes.push_back(std::move(sub));
  }
  for (std::size_t i = 0; i < out.parts.size(); ++i) {
    std::unordered_set<Element, ElementHash> seen(out.parts[i].elements.begin(),
                                                  out.parts[i].elements.end());
    for (std::size_t j = i + 1; j < out.parts.size(); ++j)
      for (const auto& e : out.parts[j].elements)
        if (seen.count(e))
          throw Error(ErrorCode::NotDisjointProper, "computed parts are not disjoint");
  }
  return out;
}

struct MinimalityProbeReport {
  HorizonReport baseline;
  std::optional<SumsequencePrefix> witness;   // best strict shrinker found
  std::optional<HorizonReport> improved;
  bool witness_bijective = false;
  std::uint64_t candidates_tried = 0;
};

/// Probes whether some sumsequence of the stream has a strictly smaller
/// stable tail intersection than the stream itself.  Candidate order: strided
/// subsequences, then small block sumsequences, then seeded random chains.
/// Candidates are scored by their own stable value; the smallest wins.
inline MinimalityProbeReport minimality_probe(const SequencePrefix& stream, std::size_t trials,
                                              std::uint64_t budget, std::uint64_t seed,
                                              std::vector<std::size_t> schedule = {}) {
  if (schedule.empty()) schedule = default_schedule(stream.length());
  MinimalityProbeReport rep;
  rep.baseline = tail_intersection(stream, schedule);
  if (rep.baseline.status != TailStatus::stable || rep.baseline.stable_value.empty())
    throw Error(ErrorCode::NoStableBaseline, "stream tail intersection is not stable nonempty");

  std::unordered_set<Element, ElementHash> baseline_set(rep.baseline.stable_value.begin(),
                                                        rep.baseline.stable_value.end());
  std::size_t best_size = baseline_set.size();

  auto consider = [&](std::vector<IndexSet> sets) {
    if (rep.candidates_tried >= budget) return;
    ++rep.candidates_tried;
    if (sets.size() < 8) return;
    SumsequencePrefix cand;
    try {
      cand = make_sumsequence(stream, std::move(sets));
      auto report = tail_intersection(cand.derived_prefix(), default_schedule(cand.length()));
      if (report.status != TailStatus::stable || report.stable_value.empty()) return;
      if (report.stable_value.size() >= best_size) return;
      for (const auto& e : report.stable_value)
        if (!baseline_set.count(e)) return;
      best_size = report.stable_value.size();
      rep.witness = std::move(cand);
      rep.improved = std::move(report);
      rep.witness_bijective = is_bijective_prefix(rep.witness->derived_prefix());
    } catch (const Error&) {
      // Candidate too short or too heavy for the schedule; skip it.
    }
  };

  const std::size_t h = stream.length();
  for (std::uint32_t stride = 2; stride <= 8; ++stride)
    for (std::uint32_t offset = 1; offset <= stride; ++offset) {
      std::vector<IndexSet> sets;
      for (std::size_t j = offset; j <= h; j += stride)
        sets.push_back(IndexSet::of({static_cast<std::uint32_t>(j)}));
      consider(std::move(sets));
    }
  for (std::uint32_t block = 2; block <= 3; ++block) {
    std::vector<IndexSet> sets;
    for (std::size_t start = 1; start + block - 1 <= h; start += block) {
      std::vector<std::uint32_t> ix;
      for (std::uint32_t t = 0; t < block; ++t) ix.push_back(static_cast<std::uint32_t>(start + t));
      sets.push_back(IndexSet::of(std::move(ix)));
    }
    consider(std::move(sets));
  }
  std::uint64_t state = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<IndexSet> sets;
    std::uint32_t next = 1 + static_cast<std::uint32_t>(detail::splitmix64_next(state) % 3);
    while (next <= h) {
      std::uint32_t size = 1 + static_cast<std::uint32_t>(detail::splitmix64_next(state) % 3);
      std::vector<std::uint32_t> ix;
      std::uint32_t pos = next;
      for (std::uint32_t q = 0; q < size && pos <= h; ++q) {
        ix.push_back(pos);
        pos += 1 + static_cast<std::uint32_t>(detail::splitmix64_next(state) % 2);
      }
      if (ix.empty()) break;
      sets.push_back(IndexSet::of(std::move(ix)));
      next = sets.back().max() + 1 + static_cast<std::uint32_t>(detail::splitmix64_next(state) % 3);
    }
    if (!sets.empty()) consider(std::move(sets));
  }
  return rep;
}

struct RightIdealScanResult {
  std::vector<std::vector<Element>> ideals;  // increasing size, then bitmask order
  std::vector<bool> maximal_proper;          // parallel: maximal among proper right ideals
};

/// All nonempty R within a finite closed carrier with R + carrier ⊆ R.
inline RightIdealScanResult right_ideal_scan(const SemigroupHandle& s,
                                             const std::vector<Element>& carrier) {
  if (carrier.empty() || carrier.size() > 16)
    throw Error(ErrorCode::CarrierTooLarge, "carrier size must be 1..16");
  std::unordered_map<Element, std::size_t, ElementHash> pos;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    s.validate(carrier[i]);
    if (!pos.emplace(carrier[i], i).second)
      throw Error(ErrorCode::InvalidParameter, "carrier elements must be distinct");
  }
  const std::size_t n = carrier.size();
  std::vector<std::size_t> sum(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto it = pos.find(s.add(carrier[i], carrier[j]));
      if (it == pos.end())
        throw Error(ErrorCode::NotASubsemigroup, "carrier is not closed under add");
      sum[i * n + j] = it->second;
    }
  std::vector<std::uint32_t> ideal_masks;
  for (std::uint32_t r = 1; r < (1u << n); ++r) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i) {
      if (!(r & (1u << i))) continue;
      for (std::size_t j = 0; j < n && closed; ++j)
        if (!(r & (1u << sum[i * n + j]))) closed = false;
    }
    if (closed) ideal_masks.push_back(r);
  }
  std::sort(ideal_masks.begin(), ideal_masks.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  RightIdealScanResult out;
  const std::uint32_t full = static_cast<std::uint32_t>((1u << n) - 1);
  for (auto r : ideal_masks) {
    std::vector<Element> elems;
    for (std::size_t i = 0; i < n; ++i)
      if (r & (1u << i)) elems.push_back(carrier[i]);
    bool maximal = r != full;
    for (auto other : ideal_masks)
      if (other != r && other != full && (other & r) == r) maximal = false;
    out.ideals.push_back(std::move(elems));
    out.maximal_proper.push_back(maximal);
  }
  return out;
}

struct LengthDeterminedResult {
  bool holds = true;
  std::vector<std::pair<std::size_t, Element>> by_length;  // k >= 2 -> common value
  IndexSet f1, f2;                                         // differing pair when !holds
};

/// Checks whether every ordered sum of k >= 2 prefix terms depends only on k.
inline LengthDeterminedResult length_determined_check(const SequencePrefix& p,
                                                      std::size_t cap = kDefaultPrefixCap) {
  auto table = detail::mask_table(p, cap);
  const std::size_t n = p.length();
  LengthDeterminedResult out;
  for (std::size_t k = 2; k <= n; ++k) {
    std::optional<std::uint64_t> first_mask;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      if (static_cast<std::size_t>(__builtin_popcountll(m)) != k) continue;
      if (!first_mask) {
        first_mask = m;
        continue;
      }
      if (table.value_id[m] != table.value_id[*first_mask]) {
        out.holds = false;
        out.f1 = IndexSet::from_mask(*first_mask);
        out.f2 = IndexSet::from_mask(m);
        return out;
      }
    }
    out.by_length.emplace_back(k, table.pool[table.value_id[*first_mask]]);
  }
  return out;
}

}  // namespace fsr
