#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>

#include "fsr/core.hpp"
#include "fsr/index_set.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

inline std::uint64_t rotl64(std::uint64_t x, unsigned r) {
  return (x << r) | (x >> (64 - r));
}

/// Bit-exact pseudorandom color: SplitMix64 finalizer over rank xor
/// rotl(seed, 32), reduced mod r.  Ranks are 1-based enumeration indices.
inline std::uint32_t prng_color(std::uint64_t rank, std::uint64_t seed, std::uint32_t r) {
  std::uint64_t z = rank ^ rotl64(seed, 32);
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<std::uint32_t>(z % r);
}

enum class ColoringKind { rank_mod, table, seeded_random };

inline const char* to_string(ColoringKind k) {
  switch (k) {
    case ColoringKind::rank_mod: return "rank_mod";
    case ColoringKind::table: return "table";
    case ColoringKind::seeded_random: return "seeded_random";
  }
  return "?";
}

/// Total deterministic coloring of an enumeration range.
struct Coloring {
  ColoringKind kind = ColoringKind::rank_mod;
  std::uint32_t colors = 1;
  std::uint64_t seed = 0;
  std::map<Element, std::uint32_t> table;  // table kind: explicit entries
  std::uint32_t default_color = 0;

  std::uint32_t color(std::size_t rank, const Element& e) const {
    switch (kind) {
      case ColoringKind::rank_mod: return static_cast<std::uint32_t>(rank % colors);
      case ColoringKind::seeded_random: return prng_color(rank, seed, colors);
      case ColoringKind::table: {
        auto it = table.find(e);
        return it == table.end() ? default_color : it->second;
      }
    }
    return 0;
  }
};

inline Coloring mod_coloring(std::uint32_t r) { return Coloring{ColoringKind::rank_mod, r}; }

inline Coloring random_coloring(std::uint32_t r, std::uint64_t seed) {
  Coloring c;
  c.kind = ColoringKind::seeded_random;
  c.colors = r;
  c.seed = seed;
  return c;
}

/// The named fan preset: center gets color 0, every leaf color 1.
inline Coloring paper_fan_coloring() {
  Coloring c;
  c.kind = ColoringKind::table;
  c.colors = 2;
  c.default_color = 1;
  c.table[scalar_element(1)] = 0;
  return c;
}

/// A finite enumeration window together with the rank of each element; the
/// arena inside which colorings are total and searches are run.
struct Universe {
  SequencePrefix prefix;
  std::unordered_map<Element, std::size_t, ElementHash> rank_of;  // 1-based

  std::size_t size() const { return prefix.length(); }

  std::optional<std::size_t> rank(const Element& e) const {
    auto it = rank_of.find(e);
    if (it == rank_of.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::uint32_t> color_of(const Coloring& c, const Element& e) const {
    auto r = rank(e);
    if (!r) return std::nullopt;
    return c.color(*r, e);
  }
};

inline Universe make_universe(SequencePrefix p) {
  Universe u;
  u.prefix = std::move(p);
  for (std::size_t i = 0; i < u.prefix.length(); ++i)
    u.rank_of.emplace(u.prefix.elements[i], i + 1);
  return u;
}

inline Universe make_universe(const SemigroupHandle& s, std::size_t n) {
  return make_universe(enumerated_prefix(s, n));
}

}  // namespace fsr
