#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "fsr/core.hpp"
#include "fsr/fs_set.hpp"
#include "fsr/index_set.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

enum class Pattern { type_a, type_b, type_c };

inline const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::type_a: return "type_a";
    case Pattern::type_b: return "type_b";
    case Pattern::type_c: return "type_c";
  }
  return "?";
}

enum class Exactness { exact_for_family, at_horizon };

inline const char* to_string(Exactness e) {
  return e == Exactness::exact_for_family ? "exact_for_family" : "at_horizon";
}

/// One replayable identity: fold terms left to right, then either compare to
/// `equals` or test membership in the witness cap set.
struct SumClaim {
  std::vector<Element> terms;
  std::optional<Element> equals;
  bool in_cap = false;
};

struct DistinctClaim {
  std::vector<Element> elements;
};

/// Finite witness for one of the three obstruction patterns.  Witnesses are
/// evidence at horizon, not proofs; exact_for_family is set only from the
/// per-family whitelist where the family law extends the pattern without
/// bound.
struct ForbiddenWitness {
  Pattern pattern = Pattern::type_a;
  Exactness exactness = Exactness::at_horizon;
  std::vector<Element> family;    // type_a members, type_b leaves, type_c generators
  std::vector<Element> cap_set;   // type_a only
  std::optional<Element> center;  // type_b / type_c idempotent e
  std::vector<SumClaim> sum_claims;
  std::vector<DistinctClaim> distinct_claims;
};

/// Replays every listed identity from scratch.  Returns the index of the
/// first failing claim (sum claims first, then distinct claims), or nullopt
/// when everything holds.
inline std::optional<std::size_t> first_failing_claim(const SemigroupHandle& s,
                                                      const ForbiddenWitness& w) {
  std::unordered_set<Element, ElementHash> cap(w.cap_set.begin(), w.cap_set.end());
  for (std::size_t i = 0; i < w.sum_claims.size(); ++i) {
    const auto& c = w.sum_claims[i];
    if (c.terms.empty()) return i;
    Element acc = c.terms[0];
    for (std::size_t t = 1; t < c.terms.size(); ++t) acc = s.add(acc, c.terms[t]);
    if (c.in_cap) {
      if (!cap.count(acc)) return i;
    } else if (!c.equals || acc != *c.equals) {
      return i;
    }
  }
  for (std::size_t i = 0; i < w.distinct_claims.size(); ++i) {
    const auto& d = w.distinct_claims[i];
    std::unordered_set<Element, ElementHash> seen;
    for (const auto& e : d.elements)
      if (!seen.insert(e).second) return w.sum_claims.size() + i;
  }
  if (w.pattern == Pattern::type_a && w.family.size() <= w.cap_set.size())
    return w.sum_claims.size() + w.distinct_claims.size();
  return std::nullopt;
}

inline bool verify_forbidden_witness(const SemigroupHandle& s, const ForbiddenWitness& w) {
  return !first_failing_claim(s, w).has_value();
}

namespace detail {

inline bool is_idempotent(const SemigroupHandle& s, const Element& e) {
  return s.add(e, e) == e;
}

/// Probe elements at fixed ranks; independent of the search horizon so that
/// witnesses are stable under horizon extension.
inline std::vector<Element> fingerprint_probes(const std::vector<Element>& universe) {
  static constexpr std::size_t ranks[] = {1, 2, 3, 5, 8, 13};
  std::vector<Element> probes;
  for (auto r : ranks)
    if (r <= universe.size()) probes.push_back(universe[r - 1]);
  return probes;
}

}  // namespace detail

/// Searches the first `horizon` elements for `family_size` distinct elements
/// whose pairwise sums (both orders, including self sums) land in a set of at
/// most `cap` values.  Elements are bucketed by their sums against a fixed
/// probe set first; each bucket's leading members are then verified exactly.
inline std::optional<ForbiddenWitness> detect_type_a(const SemigroupHandle& s,
                                                     std::size_t family_size, std::size_t cap,
                                                     std::size_t horizon) {
  if (cap < 1 || family_size <= cap)
    throw Error(ErrorCode::InvalidParameter, "need family_size > cap >= 1");
  auto universe = s.enumerate(horizon);
  auto probes = detail::fingerprint_probes(universe);
  std::map<std::vector<Element>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const Element& x = universe[i];
    std::vector<Element> fp;
    fp.push_back(s.add(x, x));
    for (const auto& p : probes) {
      fp.push_back(s.add(x, p));
      fp.push_back(s.add(p, x));
    }
    std::sort(fp.begin(), fp.end());
    fp.erase(std::unique(fp.begin(), fp.end()), fp.end());
    buckets[std::move(fp)].push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> order;
  for (auto& [fp, members] : buckets)
    if (members.size() >= family_size) order.push_back(&members);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->front() < b->front(); });
  for (const auto* members : order) {
    std::vector<Element> family;
    for (std::size_t i = 0; i < family_size; ++i) family.push_back(universe[(*members)[i]]);
    std::vector<Element> cap_set;
    {
      std::unordered_set<Element, ElementHash> sums;
      for (const auto& x : family)
        for (const auto& y : family) sums.insert(s.add(x, y));
      if (sums.size() > cap) continue;
      cap_set.assign(sums.begin(), sums.end());
      std::sort(cap_set.begin(), cap_set.end(),
                [&](const Element& a, const Element& b) { return s.rank_less(a, b); });
    }
    ForbiddenWitness w;
    w.pattern = Pattern::type_a;
    w.exactness = (s.family() == Family::truncated_nat && s.spec().nat_carrier)
                      ? Exactness::exact_for_family
                      : Exactness::at_horizon;
    w.family = family;
    w.cap_set = cap_set;
    w.distinct_claims.push_back({family});
    for (const auto& x : family)
      for (const auto& y : family) w.sum_claims.push_back({{x, y}, std::nullopt, true});
    return w;
  }
  return std::nullopt;
}

/// Searches for a fan configuration: distinct idempotents e, f_1, ..., f_n
/// with f_i + f_j = e for i != j and e absorbing every leaf on both sides.
inline std::optional<ForbiddenWitness> detect_type_b(const SemigroupHandle& s, std::size_t leaves,
                                                     std::size_t horizon,
                                                     std::uint64_t budget = 1'000'000) {
  if (leaves < 2) throw Error(ErrorCode::InvalidParameter, "need at least 2 leaves");
  auto universe = s.enumerate(horizon);
  std::vector<Element> idem;
  for (const auto& x : universe)
    if (detail::is_idempotent(s, x)) idem.push_back(x);
  for (const auto& e : idem) {
    // Backtracking over absorbed idempotents in rank order; greedy picks can
    // block the only valid leaf set (a top element above two incomparable
    // ones), so dead branches are undone.
    std::vector<Element> pool;
    for (const auto& f : idem)
      if (!(f == e) && s.add(f, e) == e && s.add(e, f) == e) pool.push_back(f);
    std::vector<Element> chosen;
    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
      if (chosen.size() == leaves) return true;
      for (std::size_t i = from; i < pool.size(); ++i) {
        if (nodes >= budget) return false;
        ++nodes;
        bool ok = true;
        for (const auto& g : chosen)
          if (s.add(pool[i], g) != e || s.add(g, pool[i]) != e) {
            ok = false;
            break;
          }
        if (!ok) continue;
        chosen.push_back(pool[i]);
        if (dfs(i + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    if (!dfs(0)) continue;
    ForbiddenWitness w;
    w.pattern = Pattern::type_b;
    w.exactness =
        s.family() == Family::fan ? Exactness::exact_for_family : Exactness::at_horizon;
    w.center = e;
    w.family = chosen;
    {
      std::vector<Element> all = chosen;
      all.push_back(e);
      w.distinct_claims.push_back({std::move(all)});
    }
    w.sum_claims.push_back({{e, e}, e});
    for (const auto& f : chosen) {
      w.sum_claims.push_back({{f, f}, f});
      w.sum_claims.push_back({{f, e}, e});
      w.sum_claims.push_back({{e, f}, e});
      for (const auto& g : chosen)
        if (!(g == f)) w.sum_claims.push_back({{f, g}, e});
    }
    return w;
  }
  return std::nullopt;
}

/// Searches for an idempotent e plus generators whose multiples up to the
/// bound stay distinct and off e, while cross sums of multiples of distinct
/// generators collapse to e and e absorbs every listed multiple.  Cross sums
/// are sampled over a fixed small set of exponent pairs; verifiers replay
/// exactly the listed equations.
inline std::optional<ForbiddenWitness> detect_type_c(const SemigroupHandle& s,
                                                     std::size_t generators,
                                                     std::uint64_t multiple_bound,
                                                     std::size_t horizon,
                                                     std::uint64_t budget = 1'000'000) {
  if (generators < 2 || multiple_bound < 2)
    throw Error(ErrorCode::InvalidParameter, "need generators >= 2 and bound >= 2");
  const std::uint64_t b = multiple_bound;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> samples = {{1, 1}, {1, 2}, {2, 1},
                                                                  {2, 2}, {1, b}, {b, 1}, {b, b}};
  samples.erase(std::remove_if(samples.begin(), samples.end(),
                               [&](const auto& p) { return p.first > b || p.second > b; }),
                samples.end());
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  auto universe = s.enumerate(horizon);
  std::vector<Element> idem;
  for (const auto& x : universe)
    if (detail::is_idempotent(s, x)) idem.push_back(x);

  auto multiples_ok = [&](const Element& e, const Element& c,
                          std::vector<Element>& mults) -> bool {
    mults.clear();
    Element cur = c;
    for (std::uint64_t m = 1; m <= b; ++m) {
      if (m > 1) cur = s.add(cur, c);
      if (cur == e) return false;
      for (const auto& prev : mults)
        if (prev == cur) return false;
      mults.push_back(cur);
    }
    for (const auto& m : mults)
      if (s.add(e, m) != e || s.add(m, e) != e) return false;
    return true;
  };

  for (const auto& e : idem) {
    std::vector<Element> pool;
    std::vector<std::vector<Element>> pool_mults;
    for (const auto& c : universe) {
      if (c == e) continue;
      std::vector<Element> mults;
      if (multiples_ok(e, c, mults)) {
        pool.push_back(c);
        pool_mults.push_back(std::move(mults));
      }
    }
    std::vector<std::size_t> pick;
    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
      if (pick.size() == generators) return true;
      for (std::size_t i = from; i < pool.size(); ++i) {
        if (nodes >= budget) return false;
        ++nodes;
        bool ok = true;
        for (std::size_t j : pick) {
          for (const auto& [m, l] : samples)
            if (s.add(pool_mults[i][m - 1], pool_mults[j][l - 1]) != e ||
                s.add(pool_mults[j][l - 1], pool_mults[i][m - 1]) != e) {
              ok = false;
              break;
            }
          if (!ok) break;
        }
        if (!ok) continue;
        pick.push_back(i);
        if (dfs(i + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (!dfs(0)) continue;
    std::vector<Element> gens;
    std::vector<std::vector<Element>> gen_mults;
    for (std::size_t i : pick) {
      gens.push_back(pool[i]);
      gen_mults.push_back(pool_mults[i]);
    }
    ForbiddenWitness w;
    w.pattern = Pattern::type_c;
    w.exactness =
        s.family() == Family::type_c ? Exactness::exact_for_family : Exactness::at_horizon;
    w.center = e;
    w.family = gens;
    w.sum_claims.push_back({{e, e}, e});
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::vector<Element> block = gen_mults[i];
      block.push_back(e);
      w.distinct_claims.push_back({std::move(block)});
      for (std::uint64_t m = 1; m <= b; ++m) {
        std::vector<Element> absorb_l{e};
        std::vector<Element> absorb_r;
        for (std::uint64_t t = 0; t < m; ++t) {
          absorb_l.push_back(gens[i]);
          absorb_r.push_back(gens[i]);
        }
        absorb_r.push_back(e);
        w.sum_claims.push_back({std::move(absorb_l), e});
        w.sum_claims.push_back({std::move(absorb_r), e});
      }
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (i == j) continue;
        for (const auto& [m, l] : samples) {
          std::vector<Element> terms;
          for (std::uint64_t t = 0; t < m; ++t) terms.push_back(gens[i]);
          for (std::uint64_t t = 0; t < l; ++t) terms.push_back(gens[j]);
          w.sum_claims.push_back({std::move(terms), e});
        }
      }
    }
    return w;
  }
  return std::nullopt;
}

/// Finite certificate that FS of terms of size >= 2 stopped growing along a
/// bijective sumsequence prefix of the stream.
struct Fs2Certificate {
  SumsequencePrefix prefix;
  FsSet fs2;
  std::size_t stable_upto = 0;  // last length at which the set grew
};

inline std::optional<Fs2Certificate> fs2_certificate(const SequencePrefix& stream,
                                                     std::size_t min_len, std::size_t max_len,
                                                     std::size_t cap = kDefaultPrefixCap) {
  if (min_len < 3) throw Error(ErrorCode::InvalidParameter, "min_len must be >= 3");
  if (max_len <= min_len) throw Error(ErrorCode::InvalidParameter, "max_len must exceed min_len");
  max_len = std::min(max_len, cap);
  for (std::uint32_t block = 1; block <= 3; ++block) {
    std::vector<IndexSet> sets;
    for (std::size_t start = 1; start + block - 1 <= stream.length() && sets.size() < max_len;
         start += block) {
      std::vector<std::uint32_t> ix;
      for (std::uint32_t t = 0; t < block; ++t) ix.push_back(static_cast<std::uint32_t>(start + t));
      sets.push_back(IndexSet::of(std::move(ix)));
    }
    if (sets.size() < min_len + 1) continue;
    auto chain = make_sumsequence(stream, std::move(sets));
    if (!is_bijective_prefix(chain.derived_prefix())) continue;
    const auto& b = chain.derived;
    std::unordered_set<Element, ElementHash> all, ge2;
    std::size_t last_growth = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<std::pair<Element, bool>> fresh;  // (sum, goes to ge2)
      for (const auto& e : all) fresh.emplace_back(stream.semigroup.add(e, b[j]), true);
      fresh.emplace_back(b[j], false);
      std::size_t before = ge2.size();
      for (auto& [e, to_ge2] : fresh) {
        if (to_ge2) ge2.insert(e);
        all.insert(std::move(e));
      }
      if (ge2.size() > before) last_growth = j + 1;
    }
    if (std::max(last_growth, min_len) < b.size()) {
      Fs2Certificate cert;
      cert.stable_upto = last_growth;
      cert.fs2 = fs_ge2(chain.derived_prefix(), cap);
      cert.prefix = std::move(chain);
      return cert;
    }
  }
  return std::nullopt;
}

struct ClassifyOptions {
  std::size_t type_a_family = 12;
  std::size_t type_a_cap = 8;
  std::size_t type_b_leaves = 3;
  std::size_t type_c_generators = 2;
  std::uint64_t type_c_bound = 4;
  std::size_t fs2_min = 6;
  std::size_t fs2_max = 14;
};

struct ClassifyReport {
  bool obstruction_found = false;
  std::optional<Pattern> pattern;  // first pattern found, in order a, b, c
  std::optional<ForbiddenWitness> type_a, type_b, type_c;
  std::optional<Fs2Certificate> fs2;
  std::size_t horizon = 0;
};

/// Aggregates the three pattern detectors plus the FS>=2 stability probe.
/// Never claims partition regularity; a clean run only means no witness at
/// this horizon.
inline ClassifyReport classify(const SemigroupHandle& s, std::size_t horizon,
                               const ClassifyOptions& opt = {}) {
  ClassifyReport r;
  r.horizon = horizon;
  r.type_a = detect_type_a(s, opt.type_a_family, opt.type_a_cap, horizon);
  r.type_b = detect_type_b(s, opt.type_b_leaves, horizon);
  r.type_c = detect_type_c(s, opt.type_c_generators, opt.type_c_bound, horizon);
  const std::size_t stream_len = std::min(horizon, opt.fs2_max);
  if (stream_len >= opt.fs2_min + 2) {
    auto universe = s.enumerate(stream_len);
    if (universe.size() >= opt.fs2_min + 2) {
      SequencePrefix stream{s, std::move(universe)};
      r.fs2 = fs2_certificate(stream, opt.fs2_min, stream_len);
    }
  }
  if (r.type_a) {
    r.obstruction_found = true;
    r.pattern = Pattern::type_a;
  } else if (r.type_b) {
    r.obstruction_found = true;
    r.pattern = Pattern::type_b;
  } else if (r.type_c) {
    r.obstruction_found = true;
    r.pattern = Pattern::type_c;
  }
  return r;
}

}  // namespace fsr
