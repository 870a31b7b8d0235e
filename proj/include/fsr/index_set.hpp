#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsr/core.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

/// Nonempty, strictly increasing set of positive indices into a sequence
/// prefix.  "Least" index sets throughout the library means least in the
/// characteristic-bitmask order (colexicographic): compare largest elements
/// first, e.g. {1,2} < {4} < {3,4}.
struct IndexSet {
  std::vector<std::uint32_t> indices;

  static IndexSet of(std::vector<std::uint32_t> ix) {
    if (ix.empty()) throw Error(ErrorCode::InvalidParameter, "index set must be nonempty");
    for (std::size_t i = 0; i < ix.size(); ++i) {
      if (ix[i] < 1) throw Error(ErrorCode::InvalidParameter, "indices are positive");
      if (i > 0 && ix[i] <= ix[i - 1])
        throw Error(ErrorCode::InvalidParameter, "indices must be strictly increasing");
    }
    return IndexSet{std::move(ix)};
  }

  static IndexSet from_mask(std::uint64_t mask) {
    IndexSet f;
    for (std::uint32_t i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1) f.indices.push_back(i + 1);
    return f;
  }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (auto i : indices) m |= 1ull << (i - 1);
    return m;
  }

  std::uint32_t min() const { return indices.front(); }
  std::uint32_t max() const { return indices.back(); }
  std::size_t size() const { return indices.size(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

/// Bitmask (colexicographic) order.
inline bool colex_less(const IndexSet& a, const IndexSet& b) {
  std::size_t i = a.indices.size(), j = b.indices.size();
  while (i > 0 && j > 0) {
    if (a.indices[i - 1] != b.indices[j - 1]) return a.indices[i - 1] < b.indices[j - 1];
    --i;
    --j;
  }
  return j > 0;
}

/// F1 < F2: every index of F1 precedes every index of F2.
inline bool strictly_before(const IndexSet& a, const IndexSet& b) { return a.max() < b.min(); }

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
  std::size_t i = 0, j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] == b.indices[j]) return false;
    if (a.indices[i] < b.indices[j]) ++i;
    else ++j;
  }
  return true;
}

inline std::string to_string(const IndexSet& f) {
  std::string s = "{";
  for (std::size_t i = 0; i < f.indices.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.indices[i]);
  }
  return s + "}";
}

/// A finite prefix a_1, ..., a_n of a sequence in a semigroup.
struct SequencePrefix {
  SemigroupHandle semigroup;
  std::vector<Element> elements;

  std::size_t length() const { return elements.size(); }
};

inline SequencePrefix make_prefix(const SemigroupHandle& s, std::vector<Element> elems) {
  if (elems.empty()) throw Error(ErrorCode::InvalidParameter, "prefix must be nonempty");
  for (const auto& e : elems) s.validate(e);
  return SequencePrefix{s, std::move(elems)};
}

inline SequencePrefix enumerated_prefix(const SemigroupHandle& s, std::size_t n) {
  return SequencePrefix{s, s.enumerate(n)};
}

/// Ordered sum a_F over an index set, folded left to right (safe for
/// noncommutative semigroups).
inline Element sum_over(const SequencePrefix& p, const IndexSet& f) {
  if (f.max() > p.length())
    throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(f.max()) + " beyond prefix");
  Element acc = p.elements[f.indices[0] - 1];
  for (std::size_t i = 1; i < f.indices.size(); ++i)
    acc = p.semigroup.add(acc, p.elements[f.indices[i] - 1]);
  return acc;
}

/// A finite sumsequence prefix b_i = a_{F_i} over increasing index sets
/// F_1 < F_2 < ... ; derived values are recomputed on construction.
struct SumsequencePrefix {
  SequencePrefix base;
  std::vector<IndexSet> index_sets;
  std::vector<Element> derived;

  std::size_t length() const { return index_sets.size(); }

  SequencePrefix derived_prefix() const { return SequencePrefix{base.semigroup, derived}; }
};

inline SumsequencePrefix make_sumsequence(const SequencePrefix& base, std::vector<IndexSet> sets) {
  if (sets.empty()) throw Error(ErrorCode::InvalidParameter, "sumsequence must be nonempty");
  for (std::size_t i = 0; i + 1 < sets.size(); ++i)
    if (!strictly_before(sets[i], sets[i + 1]))
      throw Error(ErrorCode::InvalidParameter, "index sets must satisfy F1 < F2 < ...");
  if (sets.back().max() > base.length())
    throw Error(ErrorCode::IndexOutOfRange, "index set beyond base prefix");
  SumsequencePrefix s;
  s.base = base;
  s.index_sets = std::move(sets);
  s.derived.reserve(s.index_sets.size());
  for (const auto& f : s.index_sets) s.derived.push_back(sum_over(base, f));
  return s;
}

/// Sumsequence consisting of single elements at the given 1-based positions.
inline SumsequencePrefix make_subsequence(const SequencePrefix& base,
                                          const std::vector<std::uint32_t>& positions) {
  std::vector<IndexSet> sets;
  sets.reserve(positions.size());
  for (auto p : positions) sets.push_back(IndexSet::of({p}));
  return make_sumsequence(base, std::move(sets));
}

}  // namespace fsr
