// End-to-end checks of the fsr binary: exit-code contract, witness round
// trips, tamper detection, and worker-count determinism.
//
// Usage: cli_tests <path-to-fsr>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

int failures = 0;

#define REQUIRE(cond, msg)                                                      \
  do {                                                                          \
    if (!(cond)) {                                                              \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg       \
                << "\n";                                                        \
      ++failures;                                                               \
    }                                                                           \
  } while (0)

std::string g_fsr;
std::string g_dir;

int run(const std::string& args) {
  std::string cmd = g_fsr + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-fsr>\n";
    return 2;
  }
  g_fsr = argv[1];
  char tmpl[] = "/tmp/fsr_cli_XXXXXX";
  g_dir = mkdtemp(tmpl);

  const std::string nat = g_dir + "/naturals.json";
  const std::string fan = g_dir + "/fan.json";
  const std::string k5 = g_dir + "/natmod5.json";
  write_file(nat, R"({"family":"naturals","params":{}})");
  write_file(fan, R"({"family":"fan","params":{}})");
  write_file(k5, R"({"family":"nat_mod_k","params":{"k":5}})");

  // Exit-code contract: 0 check passed, 1 valid negative, 2 usage error.
  REQUIRE(run("proper --spec " + nat + " --prefix 1,2,4") == 0, "1,2,4 is proper");
  REQUIRE(run("proper --spec " + nat + " --prefix 1,2,3") == 1, "1+2=3 violates properness");
  REQUIRE(run("proper --spec " + nat) == 1, "default stream 1..22 has 1+2=3");
  REQUIRE(run("fs --spec " + nat) == 0, "defaults to a cap-bounded enumerated stream");
  REQUIRE(run("nonsense") == 2, "unknown verb is a usage error");
  REQUIRE(run("proper --spec " + g_dir + "/missing.json --prefix 1") == 2, "missing spec file");
  REQUIRE(run("construct --spec " + nat + " --op group-proper") == 2, "naturals is not a group");

  // The fan coloring has no two-term monochromatic witness; a constant one does.
  REQUIRE(run("hindman --spec " + fan + " --coloring paper-fan --k 2 --horizon 100") == 1,
          "fan coloring blocks the search");
  REQUIRE(run("hindman --spec " + fan + " --coloring mod:1 --k 2 --horizon 100") == 0,
          "constant coloring admits a witness");

  // Witness round trip and tampering.
  const std::string wb = g_dir + "/type_b.json";
  REQUIRE(run("detect --spec " + fan + " --pattern type_b --leaves 5 -o " + wb) == 0,
          "fan contains its own pattern");
  REQUIRE(run("verify " + wb) == 0, "fresh witness verifies");
  {
    auto j = nlohmann::ordered_json::parse(slurp(wb));
    j["body"]["witness"]["sum_claims"][0]["equals"] = 7777;
    write_file(wb + ".tampered", j.dump(2));
    REQUIRE(run("verify " + wb + ".tampered") == 1, "tampered sum is caught");
  }
  write_file(wb + ".truncated", slurp(wb).substr(0, 40));
  REQUIRE(run("verify " + wb + ".truncated") == 2, "truncated file is malformed");

  // Tail reports: stable core exits 0, shifting windows exit 1.
  {
    std::string zeros = "0";
    for (int i = 1; i < 40; ++i) zeros += ",0";
    REQUIRE(run("tails --spec " + k5 + " --prefix " + zeros) == 0, "constant-zero tails stable");
    REQUIRE(run("tails --spec " + nat + " --stream-len 40") == 1, "naturals tails never settle");
  }

  // Determinism: identical bodies for 1 and 8 workers.
  {
    const std::string w1 = g_dir + "/mono1.json", w8 = g_dir + "/mono8.json";
    REQUIRE(run("hindman --spec " + nat + " --coloring mod:2 --k 3 --horizon 30 --workers 1 -o " +
                w1) == 0,
            "parity witness, one worker");
    REQUIRE(run("hindman --spec " + nat + " --coloring mod:2 --k 3 --horizon 30 --workers 8 -o " +
                w8) == 0,
            "parity witness, eight workers");
    auto j1 = nlohmann::ordered_json::parse(slurp(w1));
    auto j8 = nlohmann::ordered_json::parse(slurp(w8));
    REQUIRE(j1["body"].dump() == j8["body"].dump(), "bodies are byte-identical");
    REQUIRE(j1["header"]["hash"] == j8["header"]["hash"], "body hashes match");
    REQUIRE(run("verify " + w1) == 0, "worker-1 witness verifies");
    REQUIRE(run("verify " + w8) == 0, "worker-8 witness verifies");
  }

  // Oracle enumeration witness.
  {
    const std::string oc = g_dir + "/oracle.json";
    REQUIRE(run("enumerate-oracle --order 2 --emit-tables -o " + oc) == 0, "order-2 oracle");
    auto j = nlohmann::ordered_json::parse(slurp(oc));
    REQUIRE(j["body"]["count"] == 8, "eight labeled tables of order 2");
    REQUIRE(run("verify " + oc) == 0, "oracle witness verifies");
  }

  // classify exit semantics.
  REQUIRE(run("classify --spec " + fan + " --horizon 100") == 0, "fan is obstructed");
  REQUIRE(run("classify --spec " + nat + " --horizon 100") == 1, "naturals show no witness");

  if (failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cout << "cli_tests: " << failures << " failures\n";
  return 1;
}
