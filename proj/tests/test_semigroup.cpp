#include <doctest.h>

#include <unordered_set>

#include "fsr/semigroup.hpp"

using namespace fsr;

namespace {

std::uint64_t mix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SemigroupHandle make(Family f) { return SemigroupHandle::construct({.family = f}); }

Element e_of(std::initializer_list<std::uint64_t> data) { return Element{data}; }

std::vector<SemigroupHandle> sample_handles() {
  std::vector<SemigroupHandle> v;
  v.push_back(make(Family::naturals));
  v.push_back(SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 5}));
  v.push_back(make(Family::fan));
  v.push_back(make(Family::type_c));
  v.push_back(make(Family::steinberg));
  v.push_back(make(Family::left_zero));
  v.push_back(make(Family::right_zero));
  v.push_back(make(Family::nat_min));
  v.push_back(make(Family::nat_max));
  v.push_back(SemigroupHandle::construct({.family = Family::truncated_nat, .cap = 7}));
  v.push_back(SemigroupHandle::construct(
      {.family = Family::truncated_nat, .cap = 10, .nat_carrier = true}));
  v.push_back(SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 2}));
  v.push_back(SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 3}));
  return v;
}

}  // namespace

TEST_CASE("construct: finite cayley validation") {
  // 2-element left-zero table x+y := x.
  SemigroupSpec lz{.family = Family::finite_cayley, .order = 2, .table = {0, 0, 1, 1}};
  auto h = SemigroupHandle::construct(lz);
  CHECK(h.is_finite());
  CHECK_FALSE(h.is_group());
  CHECK(h.add(e_of({0}), e_of({1})) == e_of({0}));

  // (0+0)+1 != 0+(0+1) for this table.
  SemigroupSpec bad{.family = Family::finite_cayley, .order = 2, .table = {1, 0, 0, 0}};
  CHECK_THROWS_WITH_AS(SemigroupHandle::construct(bad), doctest::Contains("triple"), Error);

  auto st = make(Family::steinberg);
  CHECK_FALSE(st.is_finite());
  CHECK_FALSE(st.is_group());
  CHECK(st.has_enumeration());
}

TEST_CASE("construct: parameter validation") {
  CHECK_THROWS_AS(SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 0}), Error);
  CHECK_THROWS_AS(SemigroupHandle::construct({.family = Family::truncated_nat, .cap = 0}), Error);
  CHECK_THROWS_AS(SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 4}),
                  Error);
}

TEST_CASE("add: family laws on the worked examples") {
  auto fan = make(Family::fan);
  CHECK(fan.add(e_of({3}), e_of({5})) == e_of({1}));
  CHECK(fan.add(e_of({4}), e_of({4})) == e_of({4}));

  auto tc = make(Family::type_c);
  CHECK(tc.add(e_of({2, 3}), e_of({2, 5})) == e_of({2, 8}));
  CHECK(tc.add(e_of({1, 1}), e_of({2, 1})) == Element{});
  CHECK(tc.add(Element{}, e_of({7, 2})) == Element{});

  auto nat = make(Family::naturals);
  CHECK_THROWS_AS(nat.add(e_of({0}), e_of({1})), Error);  // 0 is foreign in N
}

TEST_CASE("negate: groups only") {
  auto g2 = SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 2});
  CHECK(g2.negate(e_of({3, 1})) == e_of({3, 1}));
  auto g3 = SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 3});
  CHECK(g3.negate(e_of({1, 1})) == e_of({1, 2}));
  CHECK(g3.add(g3.negate(e_of({1, 1})), e_of({1, 1})) == g3.identity());
  CHECK_THROWS_AS(make(Family::naturals).negate(e_of({1})), Error);

  auto z4 = SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 4});
  CHECK(z4.is_group());
  CHECK(z4.negate(e_of({3})) == e_of({1}));
  CHECK(z4.negate(e_of({0})) == e_of({0}));
}

TEST_CASE("enumerate: documented rank orders, stable golden prefixes") {
  auto nat = make(Family::naturals);
  CHECK(nat.enumerate(3) == std::vector<Element>{e_of({1}), e_of({2}), e_of({3})});

  auto tc = make(Family::type_c);
  CHECK(tc.enumerate(4) ==
        std::vector<Element>{Element{}, e_of({1, 1}), e_of({2, 1}), e_of({1, 2})});
  CHECK(tc.enumerate(7) == std::vector<Element>{Element{}, e_of({1, 1}), e_of({2, 1}),
                                                e_of({1, 2}), e_of({3, 1}), e_of({2, 2}),
                                                e_of({1, 3})});

  SemigroupSpec lz{.family = Family::finite_cayley, .order = 2, .table = {0, 0, 1, 1}};
  CHECK(SemigroupHandle::construct(lz).enumerate(5).size() == 2);

  auto st = make(Family::steinberg);
  // weight order: x_0, t, x_0.x_0, x_1, t.x_0, t^2, ...
  CHECK(st.enumerate(6) == std::vector<Element>{e_of({0, 0}), e_of({1}), e_of({0, 0, 0}),
                                                e_of({0, 1}), e_of({1, 0}), e_of({2})});

  auto g2 = SemigroupHandle::construct({.family = Family::direct_sum_group, .prime = 2});
  CHECK(g2.enumerate(4) ==
        std::vector<Element>{Element{}, e_of({1, 1}), e_of({2, 1}), e_of({1, 1, 2, 1})});

  auto k5 = SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 5});
  CHECK(k5.enumerate(9).size() == 5);

  auto tn = SemigroupHandle::construct({.family = Family::truncated_nat, .cap = 3});
  CHECK(tn.enumerate(9).size() == 3);
  auto tn_nat = SemigroupHandle::construct(
      {.family = Family::truncated_nat, .cap = 3, .nat_carrier = true});
  CHECK(tn_nat.enumerate(9).size() == 9);
}

TEST_CASE("enumerate: injective and consistent with rank_less") {
  for (const auto& h : sample_handles()) {
    auto elems = h.enumerate(300);
    std::unordered_set<Element, ElementHash> seen;
    for (const auto& e : elems) {
      h.validate(e);
      CHECK(seen.insert(e).second);
    }
    for (std::size_t i = 0; i + 1 < elems.size(); ++i)
      CHECK(h.rank_less(elems[i], elems[i + 1]));
  }
}

TEST_CASE("power: examples and homomorphism property") {
  auto nat = make(Family::naturals);
  CHECK(nat.power(e_of({3}), 4) == e_of({12}));
  auto k5 = SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 5});
  CHECK(k5.power(e_of({2}), 5) == e_of({0}));
  auto fan = make(Family::fan);
  CHECK(fan.power(e_of({7}), 3) == e_of({7}));

  std::uint64_t state = 11;
  for (const auto& h : sample_handles()) {
    auto pool = h.enumerate(24);
    for (int t = 0; t < 40; ++t) {
      const Element& x = pool[mix(state) % pool.size()];
      std::uint64_t j = 1 + mix(state) % 6, k = 1 + mix(state) % 6;
      CHECK(h.power(x, j + k) == h.add(h.power(x, j), h.power(x, k)));
    }
  }
}

TEST_CASE("idempotent_power: index and period of the cyclic subsemigroup") {
  auto k6 = SemigroupHandle::construct({.family = Family::nat_mod_k, .k = 6});
  auto info = k6.idempotent_power(e_of({2}));
  REQUIRE(info.has_value());
  CHECK(info->index == 1);
  CHECK(info->period == 3);
  // unique idempotent in <2>: m = 3 with m ≡ 0 mod period, index <= m.
  CHECK(k6.power(e_of({2}), 3) == e_of({0}));
  CHECK(k6.add(e_of({0}), e_of({0})) == e_of({0}));

  auto fan = make(Family::fan);
  auto fi = fan.idempotent_power(e_of({5}));
  REQUIRE(fi.has_value());
  CHECK(fi->index == 1);
  CHECK(fi->period == 1);

  CHECK_FALSE(make(Family::naturals).idempotent_power(e_of({1}), 100).has_value());
}

TEST_CASE("associativity: randomized triples per family") {
  std::uint64_t state = 20260808;
  for (const auto& h : sample_handles()) {
    auto pool = h.enumerate(48);
    const std::size_t trials = 100'000;  // per family
    for (std::size_t t = 0; t < trials; ++t) {
      const Element& a = pool[mix(state) % pool.size()];
      const Element& b = pool[mix(state) % pool.size()];
      const Element& c = pool[mix(state) % pool.size()];
      if (h.add(h.add(a, b), c) != h.add(a, h.add(b, c))) {
        CAPTURE(family_name(h.family()));
        REQUIRE(false);
      }
    }
  }
}

namespace {

// Test-side word reducer over the rewriting rules x_i t -> x_{i-1} (i>0),
// x_0 t -> x_0.  Symbols: -1 is t, i >= 0 is x_i.
std::vector<std::int64_t> reduce_word(std::vector<std::int64_t> w, bool leftmost) {
  for (;;) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] >= 0 && w[i + 1] == -1) {
        at = i;
        if (leftmost) break;
      }
    }
    if (!at) return w;
    std::int64_t x = w[*at];
    w.erase(w.begin() + *at + 1);
    w[*at] = x > 0 ? x - 1 : 0;
  }
}

Element word_to_element(const std::vector<std::int64_t>& normal) {
  Element e;
  std::size_t i = 0;
  std::uint64_t t_power = 0;
  while (i < normal.size() && normal[i] == -1) {
    ++t_power;
    ++i;
  }
  e.data.push_back(t_power);
  for (; i < normal.size(); ++i) e.data.push_back(static_cast<std::uint64_t>(normal[i]));
  return e;
}

}  // namespace

TEST_CASE("steinberg: reduction is confluent and matches add") {
  auto st = make(Family::steinberg);
  std::uint64_t state = 7;
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t len = 1 + mix(state) % 9;
    std::vector<std::int64_t> word;
    for (std::size_t i = 0; i < len; ++i) {
      if (mix(state) % 2) word.push_back(-1);
      else word.push_back(static_cast<std::int64_t>(mix(state) % 5));
    }
    auto left = reduce_word(word, true);
    auto right = reduce_word(word, false);
    CHECK(left == right);

    // The same word folded through add, one generator at a time.
    Element acc = word[0] == -1 ? e_of({1}) : Element{{0, static_cast<std::uint64_t>(word[0])}};
    for (std::size_t i = 1; i < word.size(); ++i) {
      Element g = word[i] == -1 ? e_of({1}) : Element{{0, static_cast<std::uint64_t>(word[i])}};
      acc = st.add(acc, g);
    }
    CHECK(acc == word_to_element(left));
  }
}

TEST_CASE("steinberg: right addition is finite-to-one at horizon") {
  auto st = make(Family::steinberg);
  const std::size_t horizon = 150;
  auto elems = st.enumerate(horizon);
  std::uint64_t max_t = 0;
  for (const auto& e : elems) max_t = std::max(max_t, e.data[0]);
  const std::uint64_t bound = max_t + 1;
  for (std::size_t si = 0; si < 12; ++si) {
    const Element& s = elems[si];
    std::unordered_map<Element, std::uint64_t, ElementHash> counts;
    for (const auto& x : elems) ++counts[st.add(x, s)];
    for (const auto& [y, n] : counts) CHECK(n <= bound);
  }
}

TEST_CASE("enumerate_finite_semigroups: labeled counts against the naive oracle") {
  CHECK(enumerate_finite_semigroups(1).size() == 1);

  // Order 2: check all 16 tables directly.
  std::size_t naive2 = 0;
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    std::vector<std::uint64_t> t(4);
    for (int i = 0; i < 4; ++i) t[i] = (bits >> i) & 1;
    bool ok = true;
    for (int a = 0; a < 2 && ok; ++a)
      for (int b = 0; b < 2 && ok; ++b)
        for (int c = 0; c < 2 && ok; ++c)
          ok = t[t[a * 2 + b] * 2 + c] == t[a * 2 + t[b * 2 + c]];
    if (ok) ++naive2;
  }
  CHECK(naive2 == 8);
  CHECK(enumerate_finite_semigroups(2).size() == naive2);

  // Order 3: check all 3^9 tables directly.
  std::size_t naive3 = 0;
  std::vector<std::uint64_t> t(9);
  for (std::uint64_t code = 0; code < 19683; ++code) {
    std::uint64_t v = code;
    for (int i = 0; i < 9; ++i) {
      t[i] = v % 3;
      v /= 3;
    }
    bool ok = true;
    for (int a = 0; a < 3 && ok; ++a)
      for (int b = 0; b < 3 && ok; ++b)
        for (int c = 0; c < 3 && ok; ++c)
          ok = t[t[a * 3 + b] * 3 + c] == t[a * 3 + t[b * 3 + c]];
    if (ok) ++naive3;
  }
  CHECK(enumerate_finite_semigroups(3).size() == naive3);
  CHECK(naive3 == 113);  // regression baseline

  CHECK_THROWS_AS(enumerate_finite_semigroups(5), Error);
}

TEST_CASE("enumerate_finite_semigroups: order 4 regression baseline") {
  CHECK(enumerate_finite_semigroups(4).size() == 3492);
}

TEST_CASE("finite cayley: group detection") {
  // Z/4 as an explicit table.
  std::vector<std::uint64_t> z4(16);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) z4[a * 4 + b] = (a + b) % 4;
  auto h = SemigroupHandle::construct({.family = Family::finite_cayley, .order = 4, .table = z4});
  CHECK(h.is_group());
  CHECK(h.negate(e_of({3})) == e_of({1}));
  CHECK(h.identity() == e_of({0}));
}
