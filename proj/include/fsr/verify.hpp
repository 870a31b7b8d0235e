#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsr/json_io.hpp"

namespace fsr {

// Body builders and the replay verifier live side by side so the schema stays
// consistent.  Every builder records enough to reconstruct and re-check the
// claim from a fresh handle.

// ---------------------------------------------------------------------------
// Body builders
// ---------------------------------------------------------------------------

inline Json fs_body(const SequencePrefix& p, const FsSet& f, std::size_t cap) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["cap"] = cap;
  b["fs"] = fs_set_to_json(p.semigroup, f);
  return b;
}

inline Json proper_body(const SequencePrefix& p, const ProperResult& r) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["result"] = r.proper ? "proper" : "violation";
  if (!r.proper) {
    b["f1"] = index_set_to_json(r.f1);
    b["f2"] = index_set_to_json(r.f2);
  }
  return b;
}

inline Json disjoint_proper_body(const SequencePrefix& p, const DisjointProperResult& r) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["result"] = r.holds ? "holds" : "violation";
  if (!r.holds) {
    b["f"] = index_set_to_json(r.f);
    b["g"] = index_set_to_json(r.g);
  }
  return b;
}

inline Json tails_body(const SequencePrefix& p, const HorizonReport& r) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["report"] = horizon_report_to_json(p.semigroup, r);
  return b;
}

inline Json subsequence_positions(const SumsequencePrefix& w) {
  Json pos = Json::array();
  for (const auto& f : w.index_sets) pos.push_back(f.indices[0]);
  return pos;
}

inline Json group_proper_body(const SequencePrefix& stream, const SumsequencePrefix& w,
                              std::size_t target_len) {
  Json b;
  b["stream"] = elements_to_wire(stream.semigroup, stream.elements);
  b["target_len"] = target_len;
  b["positions"] = subsequence_positions(w);
  b["derived"] = elements_to_wire(stream.semigroup, w.derived);
  return b;
}

inline Json tail_proper_body(const SequencePrefix& stream, const SumsequencePrefix& w,
                             std::size_t target_len, const std::vector<std::size_t>& schedule) {
  Json b = group_proper_body(stream, w, target_len);
  b["schedule"] = schedule;
  return b;
}

inline Json dichotomy_body(const SequencePrefix& stream, const DichotomyResult& r) {
  Json b;
  b["stream"] = elements_to_wire(stream.semigroup, stream.elements);
  switch (r.kind) {
    case DichotomyResult::Kind::type1: b["kind"] = "type1"; break;
    case DichotomyResult::Kind::type2: b["kind"] = "type2"; break;
    case DichotomyResult::Kind::inconclusive: b["kind"] = "inconclusive"; break;
  }
  b["budget_used"] = r.budget_used;
  if (r.witness) {
    b["index_sets"] = index_sets_to_json(r.witness->index_sets);
    b["derived"] = elements_to_wire(stream.semigroup, r.witness->derived);
  }
  return b;
}

inline Json split_ip_body(const SequencePrefix& p, const DisjointIpSplit& r) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["parts"] = r.parts.size();
  Json classes = Json::array();
  Json fs = Json::array();
  for (std::size_t i = 0; i < r.parts.size(); ++i) {
    classes.push_back(subsequence_positions(r.classes[i]));
    fs.push_back(fs_set_to_json(p.semigroup, r.parts[i]));
  }
  b["classes"] = classes;
  b["fs"] = fs;
  return b;
}

inline Json minimality_body(const SequencePrefix& stream, const std::vector<std::size_t>& schedule,
                            const MinimalityProbeReport& r) {
  Json b;
  b["stream"] = elements_to_wire(stream.semigroup, stream.elements);
  b["schedule"] = schedule;
  b["baseline"] = horizon_report_to_json(stream.semigroup, r.baseline);
  b["candidates_tried"] = r.candidates_tried;
  b["improved"] = r.witness.has_value();
  if (r.witness) {
    b["witness_index_sets"] = index_sets_to_json(r.witness->index_sets);
    b["witness_bijective"] = r.witness_bijective;
    b["improved_report"] = horizon_report_to_json(stream.semigroup, *r.improved);
  }
  return b;
}

inline Json right_ideals_body(const SemigroupHandle& s, const std::vector<Element>& carrier,
                              const RightIdealScanResult& r) {
  Json b;
  b["carrier"] = elements_to_wire(s, carrier);
  Json ideals = Json::array();
  for (const auto& ideal : r.ideals) ideals.push_back(elements_to_wire(s, ideal));
  b["ideals"] = ideals;
  b["maximal_proper"] = r.maximal_proper;
  return b;
}

inline Json length_determined_body(const SequencePrefix& p, const LengthDeterminedResult& r) {
  Json b;
  b["prefix"] = elements_to_wire(p.semigroup, p.elements);
  b["result"] = r.holds ? "holds" : "violation";
  if (r.holds) {
    Json map = Json::array();
    for (const auto& [k, e] : r.by_length)
      map.push_back(Json::array({k, element_to_wire(p.semigroup, e)}));
    b["by_length"] = map;
  } else {
    b["f1"] = index_set_to_json(r.f1);
    b["f2"] = index_set_to_json(r.f2);
  }
  return b;
}

inline Json forbidden_body(const SemigroupHandle& s, std::size_t horizon,
                           const std::optional<ForbiddenWitness>& w) {
  Json b;
  b["horizon"] = horizon;
  b["found"] = w.has_value();
  if (w) b["witness"] = forbidden_witness_to_json(s, *w);
  return b;
}

inline Json fs2_certificate_body(const SequencePrefix& stream, std::size_t min_len,
                                 std::size_t max_len, const std::optional<Fs2Certificate>& c) {
  Json b;
  b["stream"] = elements_to_wire(stream.semigroup, stream.elements);
  b["min_len"] = min_len;
  b["max_len"] = max_len;
  b["found"] = c.has_value();
  if (c) {
    b["index_sets"] = index_sets_to_json(c->prefix.index_sets);
    b["derived"] = elements_to_wire(stream.semigroup, c->prefix.derived);
    b["stable_upto"] = c->stable_upto;
    b["fs2"] = fs_set_to_json(stream.semigroup, c->fs2);
  }
  return b;
}

inline Json classify_body(const SemigroupHandle& s, const ClassifyReport& r) {
  Json b;
  b["horizon"] = r.horizon;
  b["verdict"] = r.obstruction_found ? "OBSTRUCTION_FOUND" : "NO_WITNESS_AT_HORIZON";
  if (r.pattern) b["pattern"] = to_string(*r.pattern);
  b["type_a"] = r.type_a ? forbidden_witness_to_json(s, *r.type_a) : Json();
  b["type_b"] = r.type_b ? forbidden_witness_to_json(s, *r.type_b) : Json();
  b["type_c"] = r.type_c ? forbidden_witness_to_json(s, *r.type_c) : Json();
  if (r.fs2) {
    Json c;
    c["index_sets"] = index_sets_to_json(r.fs2->prefix.index_sets);
    c["derived"] = elements_to_wire(s, r.fs2->prefix.derived);
    c["stable_upto"] = r.fs2->stable_upto;
    c["fs2"] = fs_set_to_json(s, r.fs2->fs2);
    c["stream"] = elements_to_wire(s, r.fs2->prefix.base.elements);
    b["fs2"] = c;
  } else {
    b["fs2"] = Json();
  }
  return b;
}

inline Json mono_fs_witness_to_json(const SemigroupHandle& s, const MonoFsWitness& w) {
  Json j;
  j["index_sets"] = index_sets_to_json(w.sumsequence.index_sets);
  j["derived"] = elements_to_wire(s, w.sumsequence.derived);
  j["fs"] = fs_set_to_json(s, w.fs);
  j["color"] = w.color;
  return j;
}

inline Json mono_fs_body(const SemigroupHandle& s, std::size_t universe_size,
                         const Coloring& coloring, std::size_t k,
                         const std::optional<SequencePrefix>& base,
                         const std::optional<MonoFsWitness>& w) {
  Json b;
  b["universe_size"] = universe_size;
  b["coloring"] = coloring_to_json(s, coloring);
  b["k"] = k;
  if (base) b["base"] = elements_to_wire(s, base->elements);
  b["found"] = w.has_value();
  if (w) b["witness"] = mono_fs_witness_to_json(s, *w);
  return b;
}

inline Json threshold_body(const SemigroupHandle& s, std::size_t k, std::uint32_t r,
                           std::size_t max_n, const ThresholdResult& t) {
  (void)s;
  // colorings_checked is deliberately omitted: it depends on worker
  // scheduling, and witness bodies must be byte-identical across runs.
  Json b;
  b["k"] = k;
  b["colors"] = r;
  b["max_n"] = max_n;
  b["reached"] = t.reached;
  if (t.reached) {
    b["threshold"] = t.threshold;
    b["avoider"] = t.avoider;
  }
  return b;
}

inline Json disjoint_families_body(const SemigroupHandle& s, std::size_t universe_size,
                                   const Coloring& coloring, std::size_t m, std::size_t k,
                                   const DisjointFamilies& d) {
  Json b;
  b["universe_size"] = universe_size;
  b["coloring"] = coloring_to_json(s, coloring);
  b["m"] = m;
  b["k"] = k;
  Json fams = Json::array();
  for (const auto& f : d.families) fams.push_back(mono_fs_witness_to_json(s, f));
  b["families"] = fams;
  Json fs2 = Json::array();
  for (const auto& f : d.fs2_sets) fs2.push_back(fs_set_to_json(s, f));
  b["fs2_sets"] = fs2;
  Json trace = Json::array();
  for (const auto& t : d.trace) {
    Json tj;
    tj["iteration"] = t.iteration;
    tj["found"] = t.found;
    if (t.found) tj["color"] = t.color;
    tj["alpha_size"] = t.alpha_size;
    tj["beta_size"] = t.beta_size;
    trace.push_back(tj);
  }
  b["trace"] = trace;
  return b;
}

inline Json oracle_count_body(std::size_t order, const std::vector<SemigroupSpec>& tables,
                              bool emit_tables) {
  Json b;
  b["order"] = order;
  b["count"] = tables.size();
  if (emit_tables) {
    Json t = Json::array();
    for (const auto& spec : tables) t.push_back(spec.table);
    b["tables"] = t;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Replay verification
// ---------------------------------------------------------------------------

struct VerifyOutcome {
  bool ok = true;
  std::string failure;
};

namespace detail {

inline FsSet fs_set_from_json(const SemigroupHandle& s, const Json& j) {
  FsSet f;
  f.elements = elements_from_wire(s, j.at("elements"));
  f.witnesses = index_sets_from_json(j.at("witnesses"));
  if (f.elements.size() != f.witnesses.size())
    throw Error(ErrorCode::MalformedWitness, "fs elements/witnesses length mismatch");
  return f;
}

inline bool fs_sets_equal(const FsSet& a, const FsSet& b) {
  return a.elements == b.elements && [&] {
    for (std::size_t i = 0; i < a.witnesses.size(); ++i)
      if (!(a.witnesses[i] == b.witnesses[i])) return false;
    return true;
  }();
}

inline HorizonReport horizon_report_from_json(const SemigroupHandle& s, const Json& j) {
  HorizonReport r;
  for (const auto& h : j.at("horizon_schedule")) r.horizon_schedule.push_back(h.get<std::size_t>());
  for (auto h : r.horizon_schedule)
    r.snapshots.push_back(elements_from_wire(s, j.at("snapshots").at(std::to_string(h))));
  const std::string st = j.at("status").get<std::string>();
  r.status = st == "stable" ? TailStatus::stable
                            : (st == "empty" ? TailStatus::empty : TailStatus::unstable);
  r.stability_window = j.at("stability_window").get<std::size_t>();
  if (r.status == TailStatus::stable) r.stable_value = elements_from_wire(s, j.at("value"));
  return r;
}

inline bool horizon_reports_equal(const HorizonReport& a, const HorizonReport& b) {
  return a.horizon_schedule == b.horizon_schedule && a.snapshots == b.snapshots &&
         a.status == b.status && a.stable_value == b.stable_value;
}

inline MonoFsWitness mono_fs_witness_from_json(const SequencePrefix& base, const Json& j) {
  MonoFsWitness w;
  w.sumsequence = make_sumsequence(base, index_sets_from_json(j.at("index_sets")));
  auto derived = elements_from_wire(base.semigroup, j.at("derived"));
  if (derived != w.sumsequence.derived)
    throw Error(ErrorCode::MalformedWitness, "derived elements do not replay");
  w.fs = fs_set_from_json(base.semigroup, j.at("fs"));
  w.color = j.at("color").get<std::uint32_t>();
  return w;
}

}  // namespace detail

/// Replays every claim recorded in a witness file against a fresh handle.
inline VerifyOutcome verify_witness_json(const Json& file) {
  auto fail = [](std::string why) { return VerifyOutcome{false, std::move(why)}; };
  SemigroupHandle s = SemigroupHandle::construct(spec_from_json(file.at("spec")));
  const std::string kind = file.at("kind").get<std::string>();
  const Json& body = file.at("body");

  if (file.at("header").at("hash").get<std::string>() != fnv1a64_hex(body.dump()))
    return fail("body hash mismatch");
  if (!file.at("verified").get<bool>()) return fail("witness not marked verified");

  if (kind == "fs_set" || kind == "fs_ge2") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    std::size_t cap = body.at("cap").get<std::size_t>();
    auto claimed = detail::fs_set_from_json(s, body.at("fs"));
    for (std::size_t i = 0; i < claimed.elements.size(); ++i)
      if (sum_over(prefix, claimed.witnesses[i]) != claimed.elements[i])
        return fail("witness fold mismatch at element " + std::to_string(i));
    auto fresh = kind == "fs_set" ? fs_set(prefix, cap) : fs_ge2(prefix, cap);
    if (!detail::fs_sets_equal(fresh, claimed)) return fail("recomputed fs set differs");
    return {};
  }

  if (kind == "proper") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    auto fresh = is_proper_prefix(prefix);
    const bool claimed_proper = body.at("result").get<std::string>() == "proper";
    if (fresh.proper != claimed_proper) return fail("properness verdict differs");
    if (!claimed_proper) {
      auto f1 = index_set_from_json(body.at("f1"));
      auto f2 = index_set_from_json(body.at("f2"));
      if (!(fresh.f1 == f1) || !(fresh.f2 == f2)) return fail("violating pair differs");
      if (sum_over(prefix, f1) != sum_over(prefix, f2)) return fail("claimed violation does not replay");
    }
    return {};
  }

  if (kind == "disjoint_proper") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    auto fresh = disjoint_proper_check(prefix);
    const bool claimed_holds = body.at("result").get<std::string>() == "holds";
    if (fresh.holds != claimed_holds) return fail("disjoint-properness verdict differs");
    if (!claimed_holds) {
      auto f = index_set_from_json(body.at("f"));
      auto g = index_set_from_json(body.at("g"));
      if (!(fresh.f == f) || !(fresh.g == g)) return fail("violating pair differs");
      if (!disjoint(f, g)) return fail("claimed pair is not disjoint");
      if (sum_over(prefix, f) != sum_over(prefix, g)) return fail("claimed violation does not replay");
    }
    return {};
  }

  if (kind == "tails") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    auto claimed = detail::horizon_report_from_json(s, body.at("report"));
    auto fresh = tail_intersection(prefix, claimed.horizon_schedule, claimed.stability_window);
    if (!detail::horizon_reports_equal(fresh, claimed)) return fail("tail report differs");
    return {};
  }

  if (kind == "group_proper" || kind == "tail_proper") {
    auto stream = make_prefix(s, elements_from_wire(s, body.at("stream")));
    std::vector<std::uint32_t> positions;
    for (const auto& p : body.at("positions")) positions.push_back(p.get<std::uint32_t>());
    auto sub = make_subsequence(stream, positions);
    if (elements_from_wire(s, body.at("derived")) != sub.derived)
      return fail("derived elements do not replay");
    if (sub.length() != body.at("target_len").get<std::size_t>()) return fail("length mismatch");
    if (!is_proper_prefix(sub.derived_prefix()).proper) return fail("output is not proper");
    if (kind == "tail_proper") {
      std::vector<std::size_t> schedule;
      for (const auto& h : body.at("schedule")) schedule.push_back(h.get<std::size_t>());
      if (tail_intersection(stream, schedule).status == TailStatus::stable)
        return fail("stream tail intersection is stable; precondition fails");
    }
    return {};
  }

  if (kind == "dichotomy") {
    const std::string k = body.at("kind").get<std::string>();
    if (k == "inconclusive") return {};
    auto stream = make_prefix(s, elements_from_wire(s, body.at("stream")));
    auto chain = make_sumsequence(stream, index_sets_from_json(body.at("index_sets")));
    if (elements_from_wire(s, body.at("derived")) != chain.derived)
      return fail("derived elements do not replay");
    if (k == "type1" && !verify_type1(chain)) return fail("type1 law does not replay");
    if (k == "type2" && !verify_type2(chain)) return fail("type2 law does not replay");
    return {};
  }

  if (kind == "split_ip") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    if (!disjoint_proper_check(prefix).holds) return fail("prefix is not disjointly proper");
    const auto& classes = body.at("classes");
    const auto& fs = body.at("fs");
    std::unordered_set<Element, ElementHash> seen;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      std::vector<std::uint32_t> positions;
      for (const auto& p : classes[i]) positions.push_back(p.get<std::uint32_t>());
      auto sub = make_subsequence(prefix, positions);
      auto fresh = fs_set(sub.derived_prefix());
      auto claimed = detail::fs_set_from_json(s, fs[i]);
      if (!detail::fs_sets_equal(fresh, claimed))
        return fail("part " + std::to_string(i + 1) + " fs set differs");
      for (const auto& e : claimed.elements)
        if (!seen.insert(e).second) return fail("parts are not pairwise disjoint");
    }
    return {};
  }

  if (kind == "minimality") {
    auto stream = make_prefix(s, elements_from_wire(s, body.at("stream")));
    std::vector<std::size_t> schedule;
    for (const auto& h : body.at("schedule")) schedule.push_back(h.get<std::size_t>());
    auto baseline = detail::horizon_report_from_json(s, body.at("baseline"));
    if (!detail::horizon_reports_equal(tail_intersection(stream, schedule), baseline))
      return fail("baseline report differs");
    if (body.at("improved").get<bool>()) {
      auto chain = make_sumsequence(stream, index_sets_from_json(body.at("witness_index_sets")));
      auto improved = detail::horizon_report_from_json(s, body.at("improved_report"));
      auto fresh = tail_intersection(chain.derived_prefix(), default_schedule(chain.length()));
      if (!detail::horizon_reports_equal(fresh, improved)) return fail("improved report differs");
      if (improved.status != TailStatus::stable || improved.stable_value.empty())
        return fail("improved report is not stable nonempty");
      std::unordered_set<Element, ElementHash> base_set(baseline.stable_value.begin(),
                                                        baseline.stable_value.end());
      if (improved.stable_value.size() >= baseline.stable_value.size())
        return fail("improvement is not a strict subset");
      for (const auto& e : improved.stable_value)
        if (!base_set.count(e)) return fail("improvement is not a subset of the baseline");
    }
    return {};
  }

  if (kind == "right_ideals") {
    auto carrier = elements_from_wire(s, body.at("carrier"));
    auto fresh = right_ideal_scan(s, carrier);
    const auto& ideals = body.at("ideals");
    if (ideals.size() != fresh.ideals.size()) return fail("ideal count differs");
    for (std::size_t i = 0; i < fresh.ideals.size(); ++i)
      if (elements_from_wire(s, ideals[i]) != fresh.ideals[i])
        return fail("ideal " + std::to_string(i + 1) + " differs");
    std::vector<bool> maximal;
    for (const auto& m : body.at("maximal_proper")) maximal.push_back(m.get<bool>());
    if (maximal != fresh.maximal_proper) return fail("maximality flags differ");
    return {};
  }

  if (kind == "length_determined") {
    auto prefix = make_prefix(s, elements_from_wire(s, body.at("prefix")));
    auto fresh = length_determined_check(prefix);
    const bool claimed_holds = body.at("result").get<std::string>() == "holds";
    if (fresh.holds != claimed_holds) return fail("verdict differs");
    if (claimed_holds) {
      const auto& map = body.at("by_length");
      if (map.size() != fresh.by_length.size()) return fail("length map size differs");
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i].at(0).get<std::size_t>() != fresh.by_length[i].first ||
            element_from_wire(s, map[i].at(1)) != fresh.by_length[i].second)
          return fail("length map entry differs");
      }
    } else {
      auto f1 = index_set_from_json(body.at("f1"));
      auto f2 = index_set_from_json(body.at("f2"));
      if (f1.size() != f2.size()) return fail("violating pair sizes differ");
      if (sum_over(prefix, f1) == sum_over(prefix, f2)) return fail("claimed violation does not replay");
    }
    return {};
  }

  if (kind == "forbidden") {
    if (!body.at("found").get<bool>()) return {};
    auto w = forbidden_witness_from_json(s, body.at("witness"));
    if (auto bad = first_failing_claim(s, w))
      return fail("identity claim " + std::to_string(*bad) + " does not replay");
    return {};
  }

  if (kind == "fs2_certificate") {
    if (!body.at("found").get<bool>()) return {};
    auto stream = make_prefix(s, elements_from_wire(s, body.at("stream")));
    auto chain = make_sumsequence(stream, index_sets_from_json(body.at("index_sets")));
    if (elements_from_wire(s, body.at("derived")) != chain.derived)
      return fail("derived elements do not replay");
    if (!is_bijective_prefix(chain.derived_prefix())) return fail("prefix is not bijective");
    auto claimed = detail::fs_set_from_json(s, body.at("fs2"));
    if (!detail::fs_sets_equal(fs_ge2(chain.derived_prefix()), claimed))
      return fail("fs2 set differs");
    const std::size_t stable_upto = body.at("stable_upto").get<std::size_t>();
    for (std::size_t len = std::max<std::size_t>(stable_upto, 2); len < chain.length(); ++len) {
      SequencePrefix head{s, std::vector<Element>(chain.derived.begin(),
                                                  chain.derived.begin() + len)};
      if (fs_ge2(head).size() != claimed.elements.size())
        return fail("fs2 set grew past stable_upto");
    }
    return {};
  }

  if (kind == "classify") {
    for (const char* key : {"type_a", "type_b", "type_c"}) {
      if (body.at(key).is_null()) continue;
      auto w = forbidden_witness_from_json(s, body.at(key));
      if (auto bad = first_failing_claim(s, w))
        return fail(std::string(key) + " claim " + std::to_string(*bad) + " does not replay");
    }
    const bool obstruction = body.at("verdict").get<std::string>() == "OBSTRUCTION_FOUND";
    const bool any = !body.at("type_a").is_null() || !body.at("type_b").is_null() ||
                     !body.at("type_c").is_null();
    if (obstruction != any) return fail("verdict inconsistent with recorded witnesses");
    if (!body.at("fs2").is_null()) {
      const auto& c = body.at("fs2");
      auto stream = make_prefix(s, elements_from_wire(s, c.at("stream")));
      auto chain = make_sumsequence(stream, index_sets_from_json(c.at("index_sets")));
      if (!detail::fs_sets_equal(fs_ge2(chain.derived_prefix()),
                                 detail::fs_set_from_json(s, c.at("fs2"))))
        return fail("classify fs2 set differs");
    }
    return {};
  }

  if (kind == "mono_fs") {
    auto u = make_universe(s, body.at("universe_size").get<std::size_t>());
    auto coloring = coloring_from_json(s, body.at("coloring"));
    if (!body.at("found").get<bool>()) return {};
    SequencePrefix base =
        body.contains("base") ? make_prefix(s, elements_from_wire(s, body.at("base"))) : u.prefix;
    auto w = detail::mono_fs_witness_from_json(base, body.at("witness"));
    if (w.sumsequence.length() != body.at("k").get<std::size_t>()) return fail("witness length differs");
    if (!verify_mono_fs(u, coloring, w)) return fail("monochromatic witness does not replay");
    return {};
  }

  if (kind == "threshold") {
    if (!body.at("reached").get<bool>()) return {};
    const std::size_t threshold = body.at("threshold").get<std::size_t>();
    const std::size_t k = body.at("k").get<std::size_t>();
    std::vector<std::uint32_t> avoider;
    for (const auto& c : body.at("avoider")) avoider.push_back(c.get<std::uint32_t>());
    if (avoider.size() != threshold - 1) return fail("avoider length differs from threshold-1");
    const std::uint32_t r = body.at("colors").get<std::uint32_t>();
    for (auto c : avoider)
      if (c >= r) return fail("avoider uses an out-of-range color");
    if (threshold > 1) {
      auto u = make_universe(s, threshold - 1);
      if (u.size() == threshold - 1 && detail::forced_coloring(u, avoider, k))
        return fail("claimed avoider admits a monochromatic witness");
    }
    return {};
  }

  if (kind == "disjoint_families") {
    auto u = make_universe(s, body.at("universe_size").get<std::size_t>());
    auto coloring = coloring_from_json(s, body.at("coloring"));
    std::unordered_set<Element, ElementHash> seen;
    const auto& fams = body.at("families");
    const auto& fs2s = body.at("fs2_sets");
    if (fams.size() != fs2s.size()) return fail("families/fs2_sets length mismatch");
    for (std::size_t i = 0; i < fams.size(); ++i) {
      auto w = detail::mono_fs_witness_from_json(u.prefix, fams[i]);
      if (!verify_mono_fs(u, coloring, w))
        return fail("family " + std::to_string(i + 1) + " does not replay");
      for (const auto& e : w.fs.elements)
        if (!seen.insert(e).second) return fail("families are not pairwise disjoint");
      if (!detail::fs_sets_equal(fs_ge2(w.sumsequence.derived_prefix()),
                                 detail::fs_set_from_json(s, fs2s[i])))
        return fail("family " + std::to_string(i + 1) + " fs2 set differs");
    }
    return {};
  }

  if (kind == "oracle_count") {
    const std::size_t order = body.at("order").get<std::size_t>();
    auto tables = enumerate_finite_semigroups(order);
    if (tables.size() != body.at("count").get<std::size_t>()) return fail("oracle count differs");
    if (body.contains("tables")) {
      if (body.at("tables").size() != tables.size()) return fail("table list size differs");
      for (std::size_t i = 0; i < tables.size(); ++i) {
        std::vector<std::uint64_t> t;
        for (const auto& v : body.at("tables")[i]) t.push_back(v.get<std::uint64_t>());
        if (t != tables[i].table) return fail("table " + std::to_string(i) + " differs");
      }
    }
    return {};
  }

  throw Error(ErrorCode::MalformedWitness, "unknown witness kind " + kind);
}

}  // namespace fsr
