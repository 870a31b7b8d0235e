// fsr - command-line front end for finite-sums experiments in semigroups.
//
// Exit codes: 0 = witness found / check passed; 1 = no witness at the given
// budget or horizon (a valid negative) or a failed check; 2 = usage, spec, or
// file errors.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsr/verify.hpp"

namespace {

using fsr::Json;

struct Common {
  std::string spec_path;
  std::string output;
  std::string prefix_arg;
  std::size_t stream_len = 0;
  std::size_t horizon = 100;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t cap = fsr::kDefaultPrefixCap;
};

void add_common(CLI::App* cmd, Common& c, bool needs_spec = true) {
  auto* spec = cmd->add_option("--spec", c.spec_path, "semigroup spec file (JSON)");
  if (needs_spec) spec->required();
  cmd->add_option("-o,--output", c.output, "witness output path");
  cmd->add_option("--horizon", c.horizon, "enumeration horizon");
  cmd->add_option("--budget", c.budget, "search node budget");
  cmd->add_option("--seed", c.seed, "64-bit seed");
  cmd->add_option("--workers", c.workers, "worker threads (output-independent)");
  cmd->add_option("--cap", c.cap, "prefix length cap");
}

void add_prefix_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--prefix", c.prefix_arg, "inline prefix, comma-separated wire forms");
  cmd->add_option("--stream-len", c.stream_len, "use the first N enumerated elements");
}

fsr::SequencePrefix load_prefix(const fsr::SemigroupHandle& s, const Common& c,
                                std::size_t default_len = 0) {
  if (!c.prefix_arg.empty()) {
    Json arr = Json::parse("[" + c.prefix_arg + "]");
    return fsr::make_prefix(s, fsr::elements_from_wire(s, arr));
  }
  std::size_t n = c.stream_len ? c.stream_len : (default_len ? default_len : c.horizon);
  auto elems = s.enumerate(n);
  if (elems.empty()) throw fsr::Error(fsr::ErrorCode::InvalidParameter, "empty stream");
  return fsr::SequencePrefix{s, std::move(elems)};
}

std::vector<std::size_t> parse_schedule(const std::string& arg) {
  std::vector<std::size_t> v;
  std::size_t pos = 0;
  while (pos < arg.size()) {
    std::size_t next = arg.find(',', pos);
    if (next == std::string::npos) next = arg.size();
    v.push_back(std::stoull(arg.substr(pos, next - pos)));
    pos = next + 1;
  }
  return v;
}

fsr::Coloring parse_coloring(const fsr::SemigroupHandle& s, const std::string& arg) {
  if (arg == "paper-fan") return fsr::paper_fan_coloring();
  if (arg.rfind("mod:", 0) == 0)
    return fsr::mod_coloring(static_cast<std::uint32_t>(std::stoul(arg.substr(4))));
  if (arg.rfind("random:", 0) == 0) {
    auto rest = arg.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw fsr::Error(fsr::ErrorCode::InvalidParameter, "random coloring needs random:r:seed");
    return fsr::random_coloring(static_cast<std::uint32_t>(std::stoul(rest.substr(0, colon))),
                                std::stoull(rest.substr(colon + 1)));
  }
  if (arg.rfind("table:", 0) == 0)
    return fsr::coloring_from_json(s, fsr::read_json_file(arg.substr(6)));
  throw fsr::Error(fsr::ErrorCode::InvalidParameter, "unknown coloring " + arg);
}

/// Self-checks the assembled witness file and writes it (or prints it).
int emit(const std::vector<std::string>& command, const fsr::SemigroupSpec& spec,
         const std::string& kind, Json body, std::uint64_t seed, const std::string& output,
         int exit_code) {
  Json file = fsr::make_witness_file(command, spec, kind, std::move(body), true);
  file["header"]["seed"] = seed;
  auto outcome = fsr::verify_witness_json(file);
  if (!outcome.ok) {
    std::cerr << "{\"code\":\"SelfCheckFailed\",\"message\":" << Json(outcome.failure).dump()
              << "}\n";
    return 2;
  }
  if (!output.empty()) {
    fsr::write_json_file(output, file);
    std::cout << kind << ": " << (exit_code == 0 ? "ok" : "negative") << ", written to " << output
              << "\n";
  } else {
    std::cout << file.dump(2) << "\n";
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> command(argv, argv + argc);
  CLI::App app{"finite-sums sets, properness checks, pattern detectors and monochromatic "
               "finite-sums searches in semigroups"};
  app.require_subcommand(1);

  Common c;

  auto* cmd_fs = app.add_subcommand("fs", "finite-sums set of a prefix");
  add_common(cmd_fs, c);
  add_prefix_options(cmd_fs, c);

  auto* cmd_fs2 = app.add_subcommand("fs2", "finite-sums set restricted to >= 2 terms");
  add_common(cmd_fs2, c);
  add_prefix_options(cmd_fs2, c);

  auto* cmd_proper = app.add_subcommand("proper", "properness check of a prefix");
  add_common(cmd_proper, c);
  add_prefix_options(cmd_proper, c);

  auto* cmd_dproper = app.add_subcommand("disjoint-proper", "disjoint-properness check");
  add_common(cmd_dproper, c);
  add_prefix_options(cmd_dproper, c);

  std::string schedule_arg;
  std::size_t window = 3;
  auto* cmd_tails = app.add_subcommand("tails", "tail-intersection report at horizons");
  add_common(cmd_tails, c);
  add_prefix_options(cmd_tails, c);
  cmd_tails->add_option("--schedule", schedule_arg, "comma-separated horizons");
  cmd_tails->add_option("--window", window, "stability window");

  std::string op;
  std::size_t target_len = 12;
  std::size_t parts = 2;
  std::size_t trials = 64;
  std::string carrier_arg;
  auto* cmd_construct = app.add_subcommand("construct", "constructive procedures at horizon");
  add_common(cmd_construct, c);
  add_prefix_options(cmd_construct, c);
  cmd_construct
      ->add_option("--op", op,
                   "group-proper | tail-proper | dichotomy | split-ip | minimality | "
                   "right-ideal | length-determined")
      ->required();
  cmd_construct->add_option("--target-len", target_len, "output length k");
  cmd_construct->add_option("--parts", parts, "number of parts");
  cmd_construct->add_option("--trials", trials, "randomized restarts");
  cmd_construct->add_option("--carrier", carrier_arg, "inline carrier, wire forms");
  cmd_construct->add_option("--schedule", schedule_arg, "comma-separated horizons");

  std::string pattern;
  std::size_t family_size = 12, cap_size = 8, leaves = 5, generators = 3;
  std::uint64_t bound = 4;
  std::size_t min_len = 6, max_len = 14;
  auto* cmd_detect = app.add_subcommand("detect", "forbidden-pattern witnesses");
  add_common(cmd_detect, c);
  add_prefix_options(cmd_detect, c);
  cmd_detect->add_option("--pattern", pattern, "type_a | type_b | type_c | fs2")->required();
  cmd_detect->add_option("--family-size", family_size, "type_a family size");
  cmd_detect->add_option("--cap-size", cap_size, "type_a cap-set bound");
  cmd_detect->add_option("--leaves", leaves, "type_b leaf count");
  cmd_detect->add_option("--generators", generators, "type_c generator count");
  cmd_detect->add_option("--bound", bound, "type_c multiple bound");
  cmd_detect->add_option("--min-len", min_len, "fs2 minimum stable length");
  cmd_detect->add_option("--max-len", max_len, "fs2 extension length");

  auto* cmd_classify = app.add_subcommand("classify", "aggregate obstruction report");
  add_common(cmd_classify, c);

  std::string coloring_arg = "mod:2";
  std::size_t k = 2;
  bool within = false;
  auto* cmd_hindman = app.add_subcommand("hindman", "monochromatic finite-sums search");
  add_common(cmd_hindman, c);
  add_prefix_options(cmd_hindman, c);
  cmd_hindman->add_option("--coloring", coloring_arg, "mod:r | random:r:seed | table:path | paper-fan");
  cmd_hindman->add_option("--k", k, "witness term count");
  cmd_hindman->add_flag("--within", within, "search sumsequences of the given prefix");

  std::uint32_t colors = 2;
  std::size_t max_n = 12;
  auto* cmd_threshold = app.add_subcommand("threshold", "least forced universe size");
  add_common(cmd_threshold, c);
  cmd_threshold->add_option("--k", k, "witness term count");
  cmd_threshold->add_option("--colors", colors, "number of colors");
  cmd_threshold->add_option("--max-n", max_n, "largest universe size to test");

  std::size_t m_families = 2;
  auto* cmd_families = app.add_subcommand("disjoint-families", "pairwise disjoint mono FS sets");
  add_common(cmd_families, c);
  cmd_families->add_option("--coloring", coloring_arg, "coloring spec");
  cmd_families->add_option("--m", m_families, "number of families");
  cmd_families->add_option("--k", k, "terms per family");

  std::string verify_path;
  auto* cmd_verify = app.add_subcommand("verify", "replay a witness file");
  cmd_verify->add_option("file", verify_path, "witness file")->required();

  std::size_t order = 2;
  bool emit_tables = false;
  auto* cmd_oracle = app.add_subcommand("enumerate-oracle", "labeled finite semigroup tables");
  add_common(cmd_oracle, c, /*needs_spec=*/false);
  cmd_oracle->add_option("--order", order, "carrier size 1..4")->required();
  cmd_oracle->add_flag("--emit-tables", emit_tables, "include the tables in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit 2; --help is 0
  }

  try {
    if (cmd_verify->parsed()) {
      Json file;
      try {
        file = fsr::read_json_file(verify_path);
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "{\"code\":\"MalformedWitness\",\"message\":" << Json(e.what()).dump() << "}\n";
        return 2;
      }
      auto outcome = fsr::verify_witness_json(file);
      if (outcome.ok) {
        std::cout << "verified: all claims replay\n";
        return 0;
      }
      std::cout << "verification failed: " << outcome.failure << "\n";
      return 1;
    }

    if (cmd_oracle->parsed()) {
      auto tables = fsr::enumerate_finite_semigroups(order);
      fsr::SemigroupSpec spec;
      spec.family = fsr::Family::finite_cayley;
      spec.order = 1;
      spec.table = {0};
      std::cout << "order " << order << ": " << tables.size() << " labeled tables\n";
      return emit(command, spec, "oracle_count",
                  fsr::oracle_count_body(order, tables, emit_tables), c.seed, c.output, 0);
    }

    auto s = fsr::handle_from_spec_file(c.spec_path);
    const fsr::SemigroupSpec& spec = s.spec();

    if (cmd_fs->parsed() || cmd_fs2->parsed()) {
      auto p = load_prefix(s, c, std::min(c.horizon, c.cap));
      auto f = cmd_fs->parsed() ? fsr::fs_set(p, c.cap) : fsr::fs_ge2(p, c.cap);
      return emit(command, spec, cmd_fs->parsed() ? "fs_set" : "fs_ge2", fsr::fs_body(p, f, c.cap),
                  c.seed, c.output, 0);
    }

    if (cmd_proper->parsed()) {
      auto p = load_prefix(s, c, std::min(c.horizon, c.cap));
      auto r = fsr::is_proper_prefix(p, c.cap);
      return emit(command, spec, "proper", fsr::proper_body(p, r), c.seed, c.output,
                  r.proper ? 0 : 1);
    }

    if (cmd_dproper->parsed()) {
      auto p = load_prefix(s, c, std::min(c.horizon, c.cap));
      auto r = fsr::disjoint_proper_check(p, c.cap);
      return emit(command, spec, "disjoint_proper", fsr::disjoint_proper_body(p, r), c.seed,
                  c.output, r.holds ? 0 : 1);
    }

    if (cmd_tails->parsed()) {
      auto p = load_prefix(s, c);
      auto schedule =
          schedule_arg.empty() ? fsr::default_schedule(p.length()) : parse_schedule(schedule_arg);
      auto r = fsr::tail_intersection(p, schedule, window);
      return emit(command, spec, "tails", fsr::tails_body(p, r), c.seed, c.output,
                  r.status == fsr::TailStatus::stable ? 0 : 1);
    }

    if (cmd_construct->parsed()) {
      const bool cap_bounded = op == "length-determined" || op == "split-ip";
      auto stream = op == "right-ideal"
                        ? fsr::SequencePrefix{s, s.enumerate(1)}
                        : load_prefix(s, c, cap_bounded ? std::min(c.horizon, c.cap) : 0);
      if (op == "group-proper") {
        try {
          auto w = fsr::group_proper_subsequence(stream, target_len);
          return emit(command, spec, "group_proper", fsr::group_proper_body(stream, w, target_len),
                      c.seed, c.output, 0);
        } catch (const fsr::Error& e) {
          if (e.code() == fsr::ErrorCode::StreamExhausted) {
            std::cerr << e.what() << "\n";
            return 1;
          }
          throw;
        }
      }
      if (op == "tail-proper") {
        auto schedule = schedule_arg.empty() ? fsr::default_schedule(stream.length())
                                             : parse_schedule(schedule_arg);
        try {
          auto w = fsr::tail_to_proper(stream, target_len, schedule);
          return emit(command, spec, "tail_proper",
                      fsr::tail_proper_body(stream, w, target_len, schedule), c.seed, c.output, 0);
        } catch (const fsr::Error& e) {
          if (e.code() == fsr::ErrorCode::StreamExhausted) {
            std::cerr << e.what() << "\n";
            return 1;
          }
          throw;
        }
      }
      if (op == "dichotomy") {
        auto r = fsr::sumsequence_dichotomy(stream, target_len, c.budget);
        return emit(command, spec, "dichotomy", fsr::dichotomy_body(stream, r), c.seed, c.output,
                    r.kind == fsr::DichotomyResult::Kind::inconclusive ? 1 : 0);
      }
      if (op == "split-ip") {
        auto r = fsr::split_into_disjoint_ip(stream, parts, c.cap);
        return emit(command, spec, "split_ip", fsr::split_ip_body(stream, r), c.seed, c.output, 0);
      }
      if (op == "minimality") {
        auto schedule = schedule_arg.empty() ? fsr::default_schedule(stream.length())
                                             : parse_schedule(schedule_arg);
        auto r = fsr::minimality_probe(stream, trials, c.budget, c.seed, schedule);
        return emit(command, spec, "minimality", fsr::minimality_body(stream, schedule, r), c.seed,
                    c.output, r.witness ? 0 : 1);
      }
      if (op == "right-ideal") {
        if (carrier_arg.empty())
          throw fsr::Error(fsr::ErrorCode::InvalidParameter, "right-ideal needs --carrier");
        auto carrier = fsr::elements_from_wire(s, Json::parse("[" + carrier_arg + "]"));
        auto r = fsr::right_ideal_scan(s, carrier);
        return emit(command, spec, "right_ideals", fsr::right_ideals_body(s, carrier, r), c.seed,
                    c.output, 0);
      }
      if (op == "length-determined") {
        auto r = fsr::length_determined_check(stream, c.cap);
        return emit(command, spec, "length_determined", fsr::length_determined_body(stream, r),
                    c.seed, c.output, r.holds ? 0 : 1);
      }
      throw fsr::Error(fsr::ErrorCode::InvalidParameter, "unknown construct op " + op);
    }

    if (cmd_detect->parsed()) {
      if (pattern == "fs2") {
        auto stream = load_prefix(s, c);
        auto r = fsr::fs2_certificate(stream, min_len, max_len, c.cap);
        return emit(command, spec, "fs2_certificate",
                    fsr::fs2_certificate_body(stream, min_len, max_len, r), c.seed, c.output,
                    r ? 0 : 1);
      }
      std::optional<fsr::ForbiddenWitness> w;
      if (pattern == "type_a") w = fsr::detect_type_a(s, family_size, cap_size, c.horizon);
      else if (pattern == "type_b") w = fsr::detect_type_b(s, leaves, c.horizon);
      else if (pattern == "type_c") w = fsr::detect_type_c(s, generators, bound, c.horizon);
      else throw fsr::Error(fsr::ErrorCode::InvalidParameter, "unknown pattern " + pattern);
      return emit(command, spec, "forbidden", fsr::forbidden_body(s, c.horizon, w), c.seed,
                  c.output, w ? 0 : 1);
    }

    if (cmd_classify->parsed()) {
      auto r = fsr::classify(s, c.horizon);
      std::cerr << "classify: "
                << (r.obstruction_found
                        ? std::string("OBSTRUCTION_FOUND(") + fsr::to_string(*r.pattern) + ")"
                        : "NO_WITNESS_AT_HORIZON")
                << "\n";
      return emit(command, spec, "classify", fsr::classify_body(s, r), c.seed, c.output,
                  r.obstruction_found ? 0 : 1);
    }

    if (cmd_hindman->parsed()) {
      auto coloring = parse_coloring(s, coloring_arg);
      auto u = fsr::make_universe(s, c.horizon);
      std::optional<fsr::SequencePrefix> base;
      std::optional<fsr::MonoFsWitness> w;
      if (within) {
        base = load_prefix(s, c);
        w = fsr::find_mono_fs_within(u, *base, coloring, k, c.budget);
      } else {
        w = fsr::find_mono_fs(u, coloring, k, c.budget, c.workers);
      }
      return emit(command, spec, "mono_fs", fsr::mono_fs_body(s, c.horizon, coloring, k, base, w),
                  c.seed, c.output, w ? 0 : 1);
    }

    if (cmd_threshold->parsed()) {
      auto r = fsr::exhaustive_threshold(s, k, colors, max_n, c.workers);
      if (r.reached) std::cerr << "threshold: " << r.threshold << "\n";
      else std::cerr << "threshold: not reached up to " << max_n << "\n";
      return emit(command, spec, "threshold", fsr::threshold_body(s, k, colors, max_n, r), c.seed,
                  c.output, r.reached ? 0 : 1);
    }

    if (cmd_families->parsed()) {
      auto coloring = parse_coloring(s, coloring_arg);
      auto u = fsr::make_universe(s, c.horizon);
      auto r = fsr::find_disjoint_mono_families(u, coloring, m_families, k, c.budget);
      return emit(command, spec, "disjoint_families",
                  fsr::disjoint_families_body(s, c.horizon, coloring, m_families, k, r), c.seed,
                  c.output, r.families.size() == m_families ? 0 : 1);
    }

    std::cerr << "no subcommand\n";
    return 2;
  } catch (const fsr::Error& e) {
    std::cerr << "{\"code\":\"" << fsr::to_string(e.code()) << "\",\"message\":"
              << Json(std::string(e.what())).dump() << "}\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "{\"code\":\"MalformedWitness\",\"message\":" << Json(e.what()).dump() << "}\n";
    return 2;
  }
}
