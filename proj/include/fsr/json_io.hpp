#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsr/coloring.hpp"
#include "fsr/constructions.hpp"
#include "fsr/core.hpp"
#include "fsr/detectors.hpp"
#include "fsr/fs_set.hpp"
#include "fsr/hindman.hpp"
#include "fsr/index_set.hpp"
#include "fsr/semigroup.hpp"

namespace fsr {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

inline Json element_to_wire(const SemigroupHandle& s, const Element& e) {
  switch (s.family()) {
    case Family::type_c:
      if (e.data.empty()) return Json("0");
      return Json::array({e.data[0], e.data[1]});
    case Family::steinberg: {
      Json j;
      j["t"] = e.data[0];
      j["x"] = Json::array();
      for (std::size_t i = 1; i < e.data.size(); ++i) j["x"].push_back(e.data[i]);
      return j;
    }
    case Family::direct_sum_group: {
      Json j = Json::array();
      for (std::size_t i = 0; i < e.data.size(); i += 2)
        j.push_back(Json::array({e.data[i], e.data[i + 1]}));
      return j;
    }
    default:
      return Json(e.data[0]);
  }
}

inline Element element_from_wire(const SemigroupHandle& s, const Json& j) {
  Element e;
  switch (s.family()) {
    case Family::type_c:
      if (j.is_string()) {
        if (j.get<std::string>() != "0")
          throw Error(ErrorCode::ForeignElement, "type_c string element must be \"0\"");
      } else if (j.is_number_integer() && j.get<std::int64_t>() == 0) {
        // accept bare 0 for the absorbing element
      } else if (j.is_array() && j.size() == 2) {
        e.data = {j[0].get<std::uint64_t>(), j[1].get<std::uint64_t>()};
      } else {
        throw Error(ErrorCode::ForeignElement, "type_c element must be \"0\" or [m,n]");
      }
      break;
    case Family::steinberg: {
      if (!j.is_object()) throw Error(ErrorCode::ForeignElement, "steinberg element must be an object");
      e.data.push_back(j.at("t").get<std::uint64_t>());
      if (j.contains("x"))
        for (const auto& i : j.at("x")) e.data.push_back(i.get<std::uint64_t>());
      break;
    }
    case Family::direct_sum_group: {
      if (!j.is_array()) throw Error(ErrorCode::ForeignElement, "group element must be an array of [pos,val]");
      for (const auto& p : j) {
        e.data.push_back(p.at(0).get<std::uint64_t>());
        e.data.push_back(p.at(1).get<std::uint64_t>());
      }
      break;
    }
    default:
      if (!j.is_number_integer())
        throw Error(ErrorCode::ForeignElement, "element must be an integer");
      e.data.push_back(j.get<std::uint64_t>());
      break;
  }
  s.validate(e);
  return e;
}

inline Json elements_to_wire(const SemigroupHandle& s, const std::vector<Element>& v) {
  Json j = Json::array();
  for (const auto& e : v) j.push_back(element_to_wire(s, e));
  return j;
}

inline std::vector<Element> elements_from_wire(const SemigroupHandle& s, const Json& j) {
  std::vector<Element> v;
  for (const auto& w : j) v.push_back(element_from_wire(s, w));
  return v;
}

// ---------------------------------------------------------------------------
// Semigroup specs
// ---------------------------------------------------------------------------

inline Json spec_to_json(const SemigroupSpec& s) {
  Json j;
  j["family"] = family_name(s.family);
  Json params = Json::object();
  switch (s.family) {
    case Family::nat_mod_k: params["k"] = s.k; break;
    case Family::truncated_nat:
      params["cap"] = s.cap;
      params["carrier"] = s.nat_carrier ? "nat" : "finite";
      break;
    case Family::direct_sum_group: params["p"] = s.prime; break;
    case Family::finite_cayley:
      params["order"] = s.order;
      params["table"] = s.table;
      break;
    default: break;
  }
  j["params"] = params;
  return j;
}

inline SemigroupSpec spec_from_json(const Json& j) {
  SemigroupSpec s;
  auto fam = family_from_name(j.at("family").get<std::string>());
  if (!fam) throw Error(ErrorCode::InvalidParameter, "unknown family " + j.at("family").dump());
  s.family = *fam;
  Json params = j.contains("params") ? j.at("params") : Json::object();
  switch (s.family) {
    case Family::nat_mod_k: s.k = params.at("k").get<std::uint64_t>(); break;
    case Family::truncated_nat:
      s.cap = params.at("cap").get<std::uint64_t>();
      s.nat_carrier = params.contains("carrier") && params.at("carrier").get<std::string>() == "nat";
      break;
    case Family::direct_sum_group: s.prime = params.at("p").get<std::uint64_t>(); break;
    case Family::finite_cayley:
      s.order = params.at("order").get<std::size_t>();
      for (const auto& v : params.at("table")) s.table.push_back(v.get<std::uint64_t>());
      break;
    default: break;
  }
  return s;
}

inline SemigroupHandle handle_from_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open spec file " + path);
  Json j = Json::parse(in);
  return SemigroupHandle::construct(spec_from_json(j));
}

// ---------------------------------------------------------------------------
// Index sets, prefixes, FS sets
// ---------------------------------------------------------------------------

inline Json index_set_to_json(const IndexSet& f) {
  Json j = Json::array();
  for (auto i : f.indices) j.push_back(i);
  return j;
}

inline IndexSet index_set_from_json(const Json& j) {
  std::vector<std::uint32_t> ix;
  for (const auto& v : j) ix.push_back(v.get<std::uint32_t>());
  return IndexSet::of(std::move(ix));
}

inline Json index_sets_to_json(const std::vector<IndexSet>& v) {
  Json j = Json::array();
  for (const auto& f : v) j.push_back(index_set_to_json(f));
  return j;
}

inline std::vector<IndexSet> index_sets_from_json(const Json& j) {
  std::vector<IndexSet> v;
  for (const auto& f : j) v.push_back(index_set_from_json(f));
  return v;
}

inline Json fs_set_to_json(const SemigroupHandle& s, const FsSet& f) {
  Json j;
  j["elements"] = elements_to_wire(s, f.elements);
  j["witnesses"] = index_sets_to_json(f.witnesses);
  return j;
}

inline Json horizon_report_to_json(const SemigroupHandle& s, const HorizonReport& r) {
  Json j;
  j["horizon_schedule"] = r.horizon_schedule;
  Json snaps = Json::object();
  for (std::size_t i = 0; i < r.snapshots.size(); ++i)
    snaps[std::to_string(r.horizon_schedule[i])] = elements_to_wire(s, r.snapshots[i]);
  j["snapshots"] = snaps;
  j["status"] = to_string(r.status);
  j["stability_window"] = r.stability_window;
  if (r.status == TailStatus::stable) j["value"] = elements_to_wire(s, r.stable_value);
  return j;
}

// ---------------------------------------------------------------------------
// Colorings
// ---------------------------------------------------------------------------

inline Json coloring_to_json(const SemigroupHandle& s, const Coloring& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["colors"] = c.colors;
  if (c.kind == ColoringKind::seeded_random) j["seed"] = c.seed;
  if (c.kind == ColoringKind::table) {
    j["default"] = c.default_color;
    Json entries = Json::array();
    for (const auto& [e, col] : c.table)
      entries.push_back(Json::array({element_to_wire(s, e), col}));
    j["entries"] = entries;
  }
  return j;
}

inline Coloring coloring_from_json(const SemigroupHandle& s, const Json& j) {
  Coloring c;
  const std::string kind = j.at("kind").get<std::string>();
  c.colors = j.at("colors").get<std::uint32_t>();
  if (kind == "rank_mod") {
    c.kind = ColoringKind::rank_mod;
  } else if (kind == "seeded_random") {
    c.kind = ColoringKind::seeded_random;
    c.seed = j.at("seed").get<std::uint64_t>();
  } else if (kind == "table") {
    c.kind = ColoringKind::table;
    c.default_color = j.at("default").get<std::uint32_t>();
    for (const auto& entry : j.at("entries"))
      c.table[element_from_wire(s, entry.at(0))] = entry.at(1).get<std::uint32_t>();
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown coloring kind " + kind);
  }
  if (c.colors < 1) throw Error(ErrorCode::InvalidParameter, "coloring needs >= 1 colors");
  return c;
}

// ---------------------------------------------------------------------------
// Forbidden-pattern witnesses
// ---------------------------------------------------------------------------

inline Json forbidden_witness_to_json(const SemigroupHandle& s, const ForbiddenWitness& w) {
  Json j;
  j["pattern"] = to_string(w.pattern);
  j["exactness"] = to_string(w.exactness);
  if (w.center) j["center"] = element_to_wire(s, *w.center);
  j["family"] = elements_to_wire(s, w.family);
  if (!w.cap_set.empty()) j["cap_set"] = elements_to_wire(s, w.cap_set);
  Json claims = Json::array();
  for (const auto& c : w.sum_claims) {
    Json cj;
    cj["sum"] = elements_to_wire(s, c.terms);
    if (c.in_cap) cj["in"] = "cap_set";
    else cj["equals"] = element_to_wire(s, *c.equals);
    claims.push_back(cj);
  }
  j["sum_claims"] = claims;
  Json dis = Json::array();
  for (const auto& d : w.distinct_claims) dis.push_back(elements_to_wire(s, d.elements));
  j["distinct_claims"] = dis;
  return j;
}

inline ForbiddenWitness forbidden_witness_from_json(const SemigroupHandle& s, const Json& j) {
  ForbiddenWitness w;
  const std::string p = j.at("pattern").get<std::string>();
  if (p == "type_a") w.pattern = Pattern::type_a;
  else if (p == "type_b") w.pattern = Pattern::type_b;
  else if (p == "type_c") w.pattern = Pattern::type_c;
  else throw Error(ErrorCode::MalformedWitness, "unknown pattern " + p);
  w.exactness = j.at("exactness").get<std::string>() == "exact_for_family"
                    ? Exactness::exact_for_family
                    : Exactness::at_horizon;
  if (j.contains("center")) w.center = element_from_wire(s, j.at("center"));
  w.family = elements_from_wire(s, j.at("family"));
  if (j.contains("cap_set")) w.cap_set = elements_from_wire(s, j.at("cap_set"));
  for (const auto& cj : j.at("sum_claims")) {
    SumClaim c;
    c.terms = elements_from_wire(s, cj.at("sum"));
    if (cj.contains("in")) c.in_cap = true;
    else c.equals = element_from_wire(s, cj.at("equals"));
    w.sum_claims.push_back(std::move(c));
  }
  for (const auto& dj : j.at("distinct_claims"))
    w.distinct_claims.push_back({elements_from_wire(s, dj)});
  return w;
}

// ---------------------------------------------------------------------------
// Witness files
// ---------------------------------------------------------------------------

inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

/// Assembles the shared witness-file layout.  The header hash covers the body
/// bytes only, so reruns with different command lines still match.
inline Json make_witness_file(const std::vector<std::string>& command,
                              const SemigroupSpec& spec, const std::string& kind, Json body,
                              bool verified) {
  Json file;
  Json header;
  header["command"] = command;
  header["version"] = kVersion;
  header["hash"] = fnv1a64_hex(body.dump());
  file["header"] = header;
  file["spec"] = spec_to_json(spec);
  file["kind"] = kind;
  file["body"] = std::move(body);
  file["verified"] = verified;
  return file;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write " + path);
  out << j.dump(2) << "\n";
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open " + path);
  return Json::parse(in);
}

}  // namespace fsr
