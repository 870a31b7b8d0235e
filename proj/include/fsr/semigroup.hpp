#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsr/core.hpp"

namespace fsr {

enum class Family {
  naturals,
  nat_mod_k,
  fan,
  type_c,
  steinberg,
  left_zero,
  right_zero,
  nat_min,
  nat_max,
  truncated_nat,
  direct_sum_group,
  finite_cayley,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::naturals: return "naturals";
    case Family::nat_mod_k: return "nat_mod_k";
    case Family::fan: return "fan";
    case Family::type_c: return "type_c";
    case Family::steinberg: return "steinberg";
    case Family::left_zero: return "left_zero";
    case Family::right_zero: return "right_zero";
    case Family::nat_min: return "nat_min";
    case Family::nat_max: return "nat_max";
    case Family::truncated_nat: return "truncated_nat";
    case Family::direct_sum_group: return "direct_sum_group";
    case Family::finite_cayley: return "finite_cayley";
  }
  return "?";
}

inline std::optional<Family> family_from_name(const std::string& s) {
  static const std::pair<const char*, Family> names[] = {
      {"naturals", Family::naturals},
      {"nat_mod_k", Family::nat_mod_k},
      {"fan", Family::fan},
      {"type_c", Family::type_c},
      {"steinberg", Family::steinberg},
      {"left_zero", Family::left_zero},
      {"right_zero", Family::right_zero},
      {"nat_min", Family::nat_min},
      {"nat_max", Family::nat_max},
      {"truncated_nat", Family::truncated_nat},
      {"direct_sum_group", Family::direct_sum_group},
      {"finite_cayley", Family::finite_cayley},
  };
  for (auto& [n, f] : names)
    if (s == n) return f;
  return std::nullopt;
}

struct SemigroupSpec {
  Family family = Family::naturals;
  std::uint64_t k = 0;                // nat_mod_k: modulus, k >= 1
  std::uint64_t cap = 0;              // truncated_nat: cap c >= 1
  bool nat_carrier = false;           // truncated_nat: carrier is all of N instead of {1..c}
  std::uint64_t prime = 0;            // direct_sum_group: p prime
  std::size_t order = 0;              // finite_cayley
  std::vector<std::uint64_t> table;   // finite_cayley, row-major x*order+y
};

namespace detail {

inline bool is_small_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Steinberg payload: data[0] = t-exponent, data[1..] = generator indices of
// the normal form t^a x_{i1} ... x_{ik}.  The empty word (a = 0, k = 0) is
// not an element.
inline std::uint64_t steinberg_weight(const Element& e) {
  std::uint64_t w = e.data[0] + (e.data.size() - 1);
  for (std::size_t i = 1; i < e.data.size(); ++i) w += e.data[i];
  return w;
}

// All generator-index lists whose weight (length + index sum) is exactly
// `rem`, emitted in lexicographic order.
inline void steinberg_lists(std::uint64_t rem, std::vector<std::uint64_t>& cur,
                            const std::function<void(const std::vector<std::uint64_t>&)>& sink) {
  if (rem == 0) {
    sink(cur);
    return;
  }
  for (std::uint64_t first = 0; first < rem; ++first) {
    cur.push_back(first);
    steinberg_lists(rem - 1 - first, cur, sink);
    cur.pop_back();
  }
}

}  // namespace detail

/// Immutable handle for one concrete semigroup.  All operations are pure
/// functions of (spec, arguments); the handle is safe to copy and share.
class SemigroupHandle {
 public:
  static SemigroupHandle construct(SemigroupSpec spec) {
    SemigroupHandle h;
    switch (spec.family) {
      case Family::nat_mod_k:
        if (spec.k < 1) throw Error(ErrorCode::InvalidParameter, "nat_mod_k needs k >= 1");
        break;
      case Family::truncated_nat:
        if (spec.cap < 1) throw Error(ErrorCode::InvalidParameter, "truncated_nat needs cap >= 1");
        break;
      case Family::direct_sum_group:
        if (!detail::is_small_prime(spec.prime))
          throw Error(ErrorCode::InvalidParameter, "direct_sum_group needs a prime p");
        break;
      case Family::finite_cayley: {
        const std::size_t n = spec.order;
        if (n < 1 || spec.table.size() != n * n)
          throw Error(ErrorCode::InvalidParameter, "finite_cayley table must be order*order");
        for (auto v : spec.table)
          if (v >= n) throw Error(ErrorCode::InvalidParameter, "finite_cayley table entry out of range");
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
              std::uint64_t ab_c = spec.table[spec.table[a * n + b] * n + c];
              std::uint64_t a_bc = spec.table[a * n + spec.table[b * n + c]];
              if (ab_c != a_bc)
                throw Error(ErrorCode::NonAssociativeTable,
                            "violating triple (" + std::to_string(a) + "," + std::to_string(b) +
                                "," + std::to_string(c) + ")");
            }
        break;
      }
      default:
        break;
    }
    h.spec_ = std::move(spec);
    h.init_flags();
    return h;
  }

  const SemigroupSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  bool is_finite() const { return is_finite_; }
  bool is_group() const { return is_group_; }
  bool has_enumeration() const { return true; }

  std::optional<std::size_t> carrier_size() const {
    switch (spec_.family) {
      case Family::nat_mod_k: return spec_.k;
      case Family::truncated_nat:
        return spec_.nat_carrier ? std::optional<std::size_t>{} : std::optional<std::size_t>{spec_.cap};
      case Family::finite_cayley: return spec_.order;
      default: return std::nullopt;
    }
  }

  void validate(const Element& e) const {
    if (!valid(e)) throw Error(ErrorCode::ForeignElement, "encoding not valid for " + std::string(family_name(spec_.family)));
  }

  bool valid(const Element& e) const {
    const auto& d = e.data;
    switch (spec_.family) {
      case Family::naturals:
      case Family::nat_min:
      case Family::nat_max:
      case Family::left_zero:
      case Family::right_zero:
      case Family::fan:
        return d.size() == 1 && d[0] >= 1;
      case Family::nat_mod_k:
        return d.size() == 1 && d[0] < spec_.k;
      case Family::truncated_nat:
        return d.size() == 1 && d[0] >= 1 && (spec_.nat_carrier || d[0] <= spec_.cap);
      case Family::type_c:
        if (d.empty()) return true;
        return d.size() == 2 && d[0] >= 1 && d[1] >= 1;
      case Family::steinberg:
        if (d.empty()) return false;
        return d.size() >= 2 || d[0] >= 1;
      case Family::direct_sum_group: {
        if (d.size() % 2 != 0) return false;
        std::uint64_t prev_pos = 0;
        for (std::size_t i = 0; i < d.size(); i += 2) {
          if (d[i] <= prev_pos) return false;
          if (d[i + 1] < 1 || d[i + 1] >= spec_.prime) return false;
          prev_pos = d[i];
        }
        return true;
      }
      case Family::finite_cayley:
        return d.size() == 1 && d[0] < spec_.order;
    }
    return false;
  }

  Element add(const Element& x, const Element& y) const {
    validate(x);
    validate(y);
    switch (spec_.family) {
      case Family::naturals: return scalar_element(x.data[0] + y.data[0]);
      case Family::nat_mod_k: return scalar_element((x.data[0] + y.data[0]) % spec_.k);
      case Family::nat_min: return scalar_element(std::min(x.data[0], y.data[0]));
      case Family::nat_max: return scalar_element(std::max(x.data[0], y.data[0]));
      case Family::left_zero: return x;
      case Family::right_zero: return y;
      case Family::truncated_nat: return scalar_element(std::min(x.data[0] + y.data[0], spec_.cap));
      case Family::fan:
        return x.data[0] == y.data[0] ? x : scalar_element(1);
      case Family::type_c: {
        if (x.data.empty() || y.data.empty()) return Element{};
        if (x.data[0] != y.data[0]) return Element{};
        return Element{{x.data[0], x.data[1] + y.data[1]}};
      }
      case Family::steinberg: {
        // Concatenate then reduce: the t-block of y walks the last generator
        // of x down, stopping at index 0.
        Element r;
        if (x.data.size() == 1) {
          r.data.push_back(x.data[0] + y.data[0]);
        } else {
          r.data = x.data;
          std::uint64_t last = r.data.back();
          r.data.back() = last > y.data[0] ? last - y.data[0] : 0;
        }
        r.data.insert(r.data.end(), y.data.begin() + 1, y.data.end());
        return r;
      }
      case Family::direct_sum_group: {
        Element r;
        std::size_t i = 0, j = 0;
        while (i < x.data.size() || j < y.data.size()) {
          if (j >= y.data.size() || (i < x.data.size() && x.data[i] < y.data[j])) {
            r.data.push_back(x.data[i]);
            r.data.push_back(x.data[i + 1]);
            i += 2;
          } else if (i >= x.data.size() || y.data[j] < x.data[i]) {
            r.data.push_back(y.data[j]);
            r.data.push_back(y.data[j + 1]);
            j += 2;
          } else {
            std::uint64_t v = (x.data[i + 1] + y.data[j + 1]) % spec_.prime;
            if (v != 0) {
              r.data.push_back(x.data[i]);
              r.data.push_back(v);
            }
            i += 2;
            j += 2;
          }
        }
        return r;
      }
      case Family::finite_cayley:
        return scalar_element(spec_.table[x.data[0] * spec_.order + y.data[0]]);
    }
    throw Error(ErrorCode::InvalidParameter, "unreachable");
  }

  Element negate(const Element& x) const {
    if (!is_group_) throw Error(ErrorCode::NotAGroup, family_name(spec_.family));
    validate(x);
    switch (spec_.family) {
      case Family::nat_mod_k:
        return scalar_element(x.data[0] == 0 ? 0 : spec_.k - x.data[0]);
      case Family::direct_sum_group: {
        Element r = x;
        for (std::size_t i = 1; i < r.data.size(); i += 2) r.data[i] = spec_.prime - r.data[i];
        return r;
      }
      case Family::finite_cayley:
        return cayley_inverse_[x.data[0]];
      default:
        throw Error(ErrorCode::NotAGroup, family_name(spec_.family));
    }
  }

  Element identity() const {
    if (!is_group_) throw Error(ErrorCode::NotAGroup, family_name(spec_.family));
    switch (spec_.family) {
      case Family::nat_mod_k: return scalar_element(0);
      case Family::direct_sum_group: return Element{};
      case Family::finite_cayley: return scalar_element(cayley_identity_);
      default: throw Error(ErrorCode::NotAGroup, family_name(spec_.family));
    }
  }

  /// First n elements in the documented rank order; for a finite carrier of
  /// size m < n only m elements are returned.
  std::vector<Element> enumerate(std::size_t n) const {
    std::vector<Element> out;
    out.reserve(n);
    switch (spec_.family) {
      case Family::naturals:
      case Family::nat_min:
      case Family::nat_max:
      case Family::left_zero:
      case Family::right_zero:
      case Family::fan:
        for (std::size_t i = 1; i <= n; ++i) out.push_back(scalar_element(i));
        break;
      case Family::nat_mod_k:
        for (std::size_t i = 0; i < n && i < spec_.k; ++i) out.push_back(scalar_element(i));
        break;
      case Family::truncated_nat: {
        std::size_t limit = spec_.nat_carrier ? n : std::min<std::size_t>(n, spec_.cap);
        for (std::size_t i = 1; i <= limit; ++i) out.push_back(scalar_element(i));
        break;
      }
      case Family::type_c: {
        // Rank order: 0 first, then pairs by diagonal m+n, inside a diagonal
        // by ascending n: (1,1), (2,1), (1,2), (3,1), (2,2), (1,3), ...
        out.push_back(Element{});
        for (std::uint64_t s = 2; out.size() < n; ++s)
          for (std::uint64_t nn = 1; nn < s && out.size() < n; ++nn)
            out.push_back(Element{{s - nn, nn}});
        break;
      }
      case Family::steinberg: {
        for (std::uint64_t w = 1; out.size() < n; ++w) {
          for (std::uint64_t a = 0; a <= w && out.size() < n; ++a) {
            std::vector<std::uint64_t> cur;
            detail::steinberg_lists(w - a, cur, [&](const std::vector<std::uint64_t>& xs) {
              if (out.size() >= n) return;
              if (a == 0 && xs.empty()) return;
              Element e;
              e.data.push_back(a);
              e.data.insert(e.data.end(), xs.begin(), xs.end());
              out.push_back(std::move(e));
            });
          }
        }
        break;
      }
      case Family::direct_sum_group: {
        // Rank r encodes the element whose base-p digits are the summand
        // values: rank 1 is the identity.
        for (std::size_t r = 0; r < n; ++r) {
          Element e;
          std::uint64_t v = r;
          std::uint64_t pos = 1;
          while (v > 0) {
            std::uint64_t digit = v % spec_.prime;
            if (digit != 0) {
              e.data.push_back(pos);
              e.data.push_back(digit);
            }
            v /= spec_.prime;
            ++pos;
          }
          out.push_back(std::move(e));
        }
        break;
      }
      case Family::finite_cayley:
        for (std::size_t i = 0; i < n && i < spec_.order; ++i) out.push_back(scalar_element(i));
        break;
    }
    return out;
  }

  Element power(const Element& x, std::uint64_t k) const {
    if (k < 1) throw Error(ErrorCode::InvalidParameter, "power needs k >= 1");
    validate(x);
    Element acc = x;
    Element base = x;
    k -= 1;
    while (k > 0) {
      if (k & 1) acc = add(acc, base);
      base = add(base, base);
      k >>= 1;
    }
    return acc;
  }

  struct CyclicInfo {
    std::uint64_t index;   // first multiple that later repeats (1-based)
    std::uint64_t period;  // cycle length
  };

  /// Index and period of the cyclic subsemigroup generated by x, when it
  /// repeats within `bound` multiples.  Plain iteration.
  std::optional<CyclicInfo> idempotent_power(const Element& x, std::uint64_t bound = 1'000'000) const {
    validate(x);
    std::unordered_map<Element, std::uint64_t, ElementHash> seen;
    Element cur = x;
    seen.emplace(cur, 1);
    for (std::uint64_t k = 2; k <= bound; ++k) {
      cur = add(cur, x);
      auto it = seen.find(cur);
      if (it != seen.end()) return CyclicInfo{it->second, k - it->second};
      seen.emplace(cur, k);
    }
    return std::nullopt;
  }

  /// Enumeration-rank comparison (strict).  Total within each family and
  /// consistent with enumerate().
  bool rank_less(const Element& a, const Element& b) const {
    switch (spec_.family) {
      case Family::type_c: {
        if (a.data.empty()) return !b.data.empty();
        if (b.data.empty()) return false;
        std::uint64_t sa = a.data[0] + a.data[1], sb = b.data[0] + b.data[1];
        if (sa != sb) return sa < sb;
        return a.data[1] < b.data[1];
      }
      case Family::steinberg: {
        std::uint64_t wa = detail::steinberg_weight(a), wb = detail::steinberg_weight(b);
        if (wa != wb) return wa < wb;
        return a.data < b.data;
      }
      case Family::direct_sum_group: {
        // Compare as base-p numerals, most significant position first.
        std::size_t i = a.data.size(), j = b.data.size();
        while (i > 0 && j > 0) {
          std::uint64_t pa = a.data[i - 2], pb = b.data[j - 2];
          if (pa != pb) return pa < pb;
          if (a.data[i - 1] != b.data[j - 1]) return a.data[i - 1] < b.data[j - 1];
          i -= 2;
          j -= 2;
        }
        return j > 0;
      }
      default:
        return a.data[0] < b.data[0];
    }
  }

  std::string format(const Element& e) const {
    switch (spec_.family) {
      case Family::type_c:
        if (e.data.empty()) return "0";
        return "(" + std::to_string(e.data[0]) + "," + std::to_string(e.data[1]) + ")";
      case Family::steinberg: {
        std::string s = "t^" + std::to_string(e.data[0]);
        for (std::size_t i = 1; i < e.data.size(); ++i) s += ".x" + std::to_string(e.data[i]);
        return s;
      }
      case Family::direct_sum_group: {
        if (e.data.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < e.data.size(); i += 2) {
          if (!s.empty()) s += "+";
          s += std::to_string(e.data[i + 1]) + "e" + std::to_string(e.data[i]);
        }
        return s;
      }
      default:
        return std::to_string(e.data[0]);
    }
  }

 private:
  void init_flags() {
    switch (spec_.family) {
      case Family::nat_mod_k:
        is_finite_ = true;
        is_group_ = true;
        break;
      case Family::truncated_nat:
        is_finite_ = !spec_.nat_carrier;
        break;
      case Family::direct_sum_group:
        is_group_ = true;
        break;
      case Family::finite_cayley: {
        is_finite_ = true;
        const std::size_t n = spec_.order;
        std::optional<std::size_t> id;
        for (std::size_t e = 0; e < n && !id; ++e) {
          bool ok = true;
          for (std::size_t x = 0; x < n && ok; ++x)
            ok = spec_.table[e * n + x] == x && spec_.table[x * n + e] == x;
          if (ok) id = e;
        }
        if (id) {
          cayley_identity_ = *id;
          cayley_inverse_.assign(n, Element{});
          bool group = true;
          for (std::size_t x = 0; x < n && group; ++x) {
            bool found = false;
            for (std::size_t y = 0; y < n && !found; ++y)
              if (spec_.table[x * n + y] == *id && spec_.table[y * n + x] == *id) {
                cayley_inverse_[x] = scalar_element(y);
                found = true;
              }
            group = found;
          }
          is_group_ = group;
        }
        break;
      }
      default:
        break;
    }
  }

  SemigroupSpec spec_;
  bool is_finite_ = false;
  bool is_group_ = false;
  std::uint64_t cayley_identity_ = 0;
  std::vector<Element> cayley_inverse_;
};

/// Every labeled associative Cayley table of the given order, by backtracking
/// with associativity pruning.  Tables are emitted in lexicographic cell
/// order; labeled counts (not up to isomorphism) are their own baseline.
inline std::vector<SemigroupSpec> enumerate_finite_semigroups(std::size_t order) {
  if (order < 1 || order > 4) throw Error(ErrorCode::OrderTooLarge, "order must be 1..4");
  const std::size_t n = order;
  std::vector<std::uint64_t> t(n * n, n);  // n = unassigned
  std::vector<SemigroupSpec> out;

  auto defined = [&](std::size_t i, std::size_t j) { return t[i * n + j] < n; };
  auto assoc_ok = [&]() {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!defined(a, b)) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (!defined(b, c)) continue;
          std::uint64_t ab = t[a * n + b], bc = t[b * n + c];
          if (t[ab * n + c] < n && t[a * n + bc] < n && t[ab * n + c] != t[a * n + bc]) return false;
        }
      }
    return true;
  };

  std::function<void(std::size_t)> go = [&](std::size_t cell) {
    if (cell == n * n) {
      SemigroupSpec s;
      s.family = Family::finite_cayley;
      s.order = n;
      s.table = t;
      out.push_back(std::move(s));
      return;
    }
    for (std::uint64_t v = 0; v < n; ++v) {
      t[cell] = v;
      if (assoc_ok()) go(cell + 1);
    }
    t[cell] = n;
  };
  go(0);
  return out;
}

}  // namespace fsr
