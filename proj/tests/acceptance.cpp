// Acceptance gate. Every criterion prints exactly one PASS/FAIL line; the
// process exits with the number of failed criteria.
//
// usage: acceptance <path-to-briberon-cli> <fixtures-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "briberon/io.hpp"
#include "briberon/kb_bribery.hpp"
#include "briberon/mincost_flow.hpp"
#include "briberon/testkit.hpp"
#include "briberon/weighted_bribery.hpp"

using namespace briberon;
namespace fs = std::filesystem;

namespace {

// Pinned acceptance tolerances.
constexpr int kC1Instances = 520;          // >= 500 strict instances
constexpr double kC1BudgetSeconds = 300.0; // < 5 minutes
constexpr int kC2Instances = 320;          // >= 300 free-form instances
constexpr double kC2BudgetSeconds = 300.0;
constexpr int kC3Instances = 200;          // per ballot model
constexpr int kC4Instances = 200;
constexpr double kC5MaxSecondsAtK50 = 60.0;
constexpr double kC5MaxDoublingRatio = 10.0;
constexpr double kC5FloorMs = 1.0;         // ratios measured against >= 1ms
constexpr int kC6Networks = 100;
constexpr int kC8MinPerEncoder = 100;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("CRITERION %d: %s (%s)\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration_cast<std::chrono::duration<double>>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& tmp) {
  const std::string cmd = "\"" + cli + "\" " + args + " >" + (tmp / "stdout.txt").string() +
                          " 2>" + (tmp / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int expected_calls(std::int64_t max_price) {
  if (max_price <= 1) return 1;
  int calls = 1;
  std::int64_t t = 1;
  while (t < max_price) {
    t *= 2;
    ++calls;
  }
  return calls;
}

bool is_winner(const ScoreVector& scores, int candidate) {
  const auto w = winners(scores);
  return std::binary_search(w.begin(), w.end(), candidate);
}

struct EquivalenceStats {
  int checked = 0;
  int mismatches = 0;
  std::int64_t networks = 0;
  bool flows_optimal = true;
  std::map<std::string, int> per_encoder;
};

// Shared by criteria 1 and 2: generated instance vs the brute-force oracle,
// optionally certifying every flow the sweep produces.
void check_equivalence(const testkit::GenParams& params, const std::string& encoder_name,
                       bool certify_flows, EquivalenceStats& stats) {
  const auto inst = testkit::gen_kb(params);
  std::optional<SolveOutcome> outcome;
  if (certify_flows) {
    outcome = solve_optimal(inst, [&](std::int64_t, const FlowNetwork& net,
                                      const Flow& flow) {
      ++stats.networks;
      if (!verify_optimality(net, flow)) stats.flows_optimal = false;
    });
  } else {
    outcome = solve_optimal(inst);
  }
  const auto brute = testkit::brute_kb(inst);
  ++stats.checked;
  ++stats.per_encoder[encoder_name];
  if (!outcome || outcome->optimal_cost != brute.cost) ++stats.mismatches;
}

EquivalenceStats c1_stats, c2_stats;

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const struct {
    testkit::BallotEncoder encoder;
    const char* name;
  } cycle[] = {{testkit::BallotEncoder::none, "utility"},
               {testkit::BallotEncoder::plurality, "plurality"},
               {testkit::BallotEncoder::veto, "veto"},
               {testkit::BallotEncoder::t_approval, "3-approval"}};
  for (int i = 0; i < kC1Instances; ++i) {
    const auto& pick = cycle[i % 4];
    testkit::GenParams params;
    params.seed = 1000 + static_cast<std::uint64_t>(i);
    params.encoder = pick.encoder;
    params.t_approval_t = 3;
    params.m = {pick.encoder == testkit::BallotEncoder::t_approval ? 3 : 2, 4};
    params.n = {1, 4};
    params.k = {1, 3};
    params.b = {1, 2};
    params.price = {0, 9};
    check_equivalence(params, pick.name, true, c1_stats);
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << c1_stats.checked << " strict instances, " << c1_stats.mismatches
         << " cost mismatches, " << elapsed << " s";
  report(1, c1_stats.mismatches == 0 && c1_stats.checked >= 500 &&
             elapsed < kC1BudgetSeconds,
         detail.str());
}

void criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kC2Instances; ++i) {
    testkit::GenParams params;
    params.seed = 20000 + static_cast<std::uint64_t>(i);
    params.m = {2, 3};
    params.n = {1, 4};
    params.k = {1, 3};
    params.b = {1, 2};
    params.price = {0, 9};
    const bool approval = i % 2 == 1;
    params.encoder =
        approval ? testkit::BallotEncoder::approval : testkit::BallotEncoder::none;
    params.free_form = true;
    check_equivalence(params, approval ? "approval" : "freeform-utility", false,
                      c2_stats);
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << c2_stats.checked << " free-form instances, " << c2_stats.mismatches
         << " cost mismatches, " << elapsed << " s";
  report(2, c2_stats.mismatches == 0 && c2_stats.checked >= 300 &&
             elapsed < kC2BudgetSeconds,
         detail.str());
}

void criterion_3() {
  const Eps epsilons[] = {{1, 10}, {1, 4}, {1, 2}};
  int ratio_failures = 0, infeasible = 0, call_miscounts = 0, runs = 0;

  for (int i = 0; i < kC3Instances; ++i) {
    testkit::GenParams params;
    params.seed = 30000 + static_cast<std::uint64_t>(i);
    params.m = {2, 4};
    params.n = {1, 10};
    params.weight = {1, 20};
    params.price = {0, 1000000};
    const auto inst = testkit::gen_plurality(params);
    const auto opt = testkit::brute_weighted_plurality(inst, false).cost;
    std::int64_t max_price = 0;
    for (const auto& voter : inst.voters) max_price = std::max(max_price, voter.price);
    const int calls = expected_calls(max_price);
    for (const Eps& eps : epsilons) {
      const auto loose = fptas(inst, eps);
      const auto tight = fptas_strict(inst, eps);
      runs += 2;
      if (loose.cost * eps.den > opt * (eps.den + 2 * eps.num)) ++ratio_failures;
      if (tight.cost * eps.den > opt * (eps.den + eps.num)) ++ratio_failures;
      if (!is_winner(plurality_scores(inst, &loose.bribed), inst.preferred)) ++infeasible;
      if (!is_winner(plurality_scores(inst, &tight.bribed), inst.preferred)) ++infeasible;
      if (loose.exact_calls != calls || tight.exact_calls != calls) ++call_miscounts;
    }
  }

  for (int i = 0; i < kC3Instances; ++i) {
    testkit::GenParams params;
    params.seed = 40000 + static_cast<std::uint64_t>(i);
    params.m = {2, 4};
    params.n = {1, 5};
    params.weight = {1, 20};
    params.price = {0, 1000000};
    const auto inst = testkit::gen_approval(params);
    const auto opt = testkit::brute_approval_prime(inst).cost;
    std::int64_t max_price = 0;
    for (const auto& voter : inst.voters)
      for (const auto price : voter.flip_prices) max_price = std::max(max_price, price);
    const int calls = expected_calls(max_price);
    for (const Eps& eps : epsilons) {
      const auto loose = fptas(inst, eps);
      const auto tight = fptas_strict(inst, eps);
      runs += 2;
      if (loose.cost * eps.den > opt * (eps.den + 2 * eps.num)) ++ratio_failures;
      if (tight.cost * eps.den > opt * (eps.den + eps.num)) ++ratio_failures;
      if (!is_winner(approval_scores(inst, &loose.flips), inst.preferred)) ++infeasible;
      if (!is_winner(approval_scores(inst, &tight.flips), inst.preferred)) ++infeasible;
      if (loose.exact_calls != calls || tight.exact_calls != calls) ++call_miscounts;
    }
  }

  std::ostringstream detail;
  detail << runs << " sweep runs over " << 2 * kC3Instances << " instances x 3 epsilons; "
         << ratio_failures << " ratio violations, " << infeasible << " infeasible, "
         << call_miscounts << " call-count mismatches";
  report(3, ratio_failures == 0 && infeasible == 0 && call_miscounts == 0, detail.str());
}

void criterion_4() {
  int mismatches = 0;
  for (int i = 0; i < kC4Instances; ++i) {
    testkit::GenParams params;
    params.seed = 50000 + static_cast<std::uint64_t>(i);
    params.m = {2, 4};
    params.n = {1, 6};
    params.weight = {1, 9};
    const auto inst = testkit::gen_negative(params);
    const auto reduced = reduce_negative_bribery(inst);
    if (testkit::brute_11_weighted(reduced).yes != testkit::brute_negative(inst).yes)
      ++mismatches;
  }
  std::ostringstream detail;
  detail << kC4Instances << " reductions, " << mismatches << " decision mismatches";
  report(4, mismatches == 0, detail.str());
}

KBBriberyInstance scaling_instance(std::int64_t k) {
  testkit::SplitMix64 rng(424242);
  const int m = 10, n = 50;
  const std::int64_t b = 5;
  CandidateSet labels;
  for (int c = 1; c <= m; ++c) labels.names.push_back("c" + std::to_string(c));
  std::vector<Ballot> ballots;
  for (int v = 0; v < n; ++v) {
    Ballot ballot;
    ballot.points.assign(m, 0);
    for (std::int64_t point = 0; point < k; ++point) {
      std::vector<int> open;
      for (int c = 0; c < m; ++c)
        if (ballot.points[c] < b) open.push_back(c);
      ballot.points[open[rng.bounded(0, static_cast<std::int64_t>(open.size()) - 1)]]++;
    }
    ballots.push_back(std::move(ballot));
  }
  KBBriberyInstance inst;
  inst.election = make_election(std::move(labels), k, b, false, std::move(ballots));
  inst.preferred = 0;
  for (int v = 0; v < n; ++v) {
    PriceTable table = PriceTable::zeros(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) table.at(i, j) = rng.bounded(0, 100);
    inst.prices.push_back(std::move(table));
  }
  return inst;
}

void criterion_5() {
  const std::int64_t ks[] = {5, 10, 20, 50};
  std::map<std::int64_t, double> ms;
  bool solved_all = true;
  for (const std::int64_t k : ks) {
    const auto inst = scaling_instance(k);
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = solve_optimal(inst);
    ms[k] = seconds_since(start) * 1000.0;
    if (!outcome) solved_all = false;
  }
  bool ratios_ok = true;
  for (size_t i = 1; i < 4; ++i) {
    const double prev = std::max(ms[ks[i - 1]], kC5FloorMs);
    if (ms[ks[i]] >= kC5MaxDoublingRatio * prev) ratios_ok = false;
  }
  const bool k50_ok = ms[50] < kC5MaxSecondsAtK50 * 1000.0;
  std::ostringstream detail;
  detail << "m=10 n=50 b=5; runtimes ms:";
  for (const std::int64_t k : ks) detail << " k" << k << "=" << ms[k];
  report(5, solved_all && ratios_ok && k50_ok, detail.str());
}

void criterion_6() {
  testkit::SplitMix64 rng(60606);
  int networks = 0, flows = 0;
  bool all_ok = true;
  while (networks < kC6Networks) {
    FlowNetwork net;
    net.node_count = static_cast<int>(rng.bounded(2, 50));
    net.source = 0;
    net.sink = net.node_count - 1;
    const int arc_count = static_cast<int>(rng.bounded(1, 120));
    for (int a = 0; a < arc_count; ++a) {
      const int from = static_cast<int>(rng.bounded(0, net.node_count - 1));
      int to = static_cast<int>(rng.bounded(0, net.node_count - 1));
      if (to == from) to = (to + 1) % net.node_count;
      net.arcs.push_back({from, to, rng.bounded(0, 9), rng.bounded(0, 20)});
    }
    ++networks;
    for (std::int64_t target = 0;; target = target == 0 ? 1 : target * 2) {
      const auto flow = solve_min_cost_flow(net, target);
      if (!flow) break;
      ++flows;
      if (!verify_optimality(net, *flow)) all_ok = false;
    }
  }
  std::ostringstream detail;
  detail << networks << " random networks / " << flows << " flows certified; plus "
         << c1_stats.networks << " solver networks from criterion 1, flows optimal: "
         << (c1_stats.flows_optimal ? "yes" : "no");
  report(6, all_ok && c1_stats.flows_optimal && c1_stats.networks > 0 &&
             networks >= kC6Networks,
         detail.str());
}

struct CliHarness {
  std::string cli;
  fs::path fixtures;
  fs::path tmp;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }

  fs::path out(const std::string& name) const { return tmp / name; }

  void run_twice_identical(const std::string& args, const std::string& tag,
                           int expected_exit) {
    const auto first = out(tag + ".a.json");
    const auto second = out(tag + ".b.json");
    const int code_a = run_cli(cli, args + " --out " + first.string(), tmp);
    const int code_b = run_cli(cli, args + " --out " + second.string(), tmp);
    expect(code_a == expected_exit,
           tag + ": exit " + std::to_string(code_a) + " wanted " +
               std::to_string(expected_exit));
    expect(code_a == code_b, tag + ": reruns exited differently");
    const auto bytes = slurp(first);
    expect(!bytes.empty(), tag + ": empty output");
    expect(bytes == slurp(second), tag + ": reruns differ");
  }
};

void criterion_7(const std::string& cli, const fs::path& fixtures) {
  CliHarness h;
  h.cli = cli;
  h.fixtures = fixtures;
  h.tmp = fs::path("acceptance_tmp");
  fs::create_directories(h.tmp);

  const char* good[] = {"ex_kb.json",       "ex_kb_freeform.json", "ex_plurality.json",
                        "ex_approval.json", "ex_negative.json",    "ex_weighted11.json"};
  for (const char* name : good) {
    const fs::path file = fixtures / name;
    const std::string text = slurp(file);
    h.expect(!text.empty(), std::string(name) + ": fixture missing");
    try {
      const auto doc = io::parse_instance(text);
      const auto canon = io::serialize_instance(doc);
      h.expect(io::parse_instance(canon) == doc,
               std::string(name) + ": value round-trip failed");
      h.expect(io::serialize_instance(io::parse_instance(canon)) == canon,
               std::string(name) + ": byte round-trip failed");
    } catch (const std::exception& e) {
      h.expect(false, std::string(name) + ": " + e.what());
      continue;
    }
    h.run_twice_identical("solve " + file.string(), std::string("solve_") + name, 0);
    try {
      const auto bytes = slurp(h.out(std::string("solve_") + name + ".a.json"));
      const auto parsed = io::parse_report(bytes);
      h.expect(io::serialize_report(parsed) == bytes,
               std::string(name) + ": report not canonical");
      h.expect(parsed.feasible, std::string(name) + ": expected a feasible report");
    } catch (const std::exception& e) {
      h.expect(false, std::string(name) + ": report parse: " + e.what());
    }
  }

  // Frozen optima for the worked examples.
  const std::pair<const char*, std::int64_t> optima[] = {
      {"ex_kb.json", 3}, {"ex_kb_freeform.json", 1}, {"ex_plurality.json", 10},
      {"ex_approval.json", 1}};
  for (const auto& [name, cost] : optima) {
    const auto bytes = slurp(h.out(std::string("solve_") + name + ".a.json"));
    try {
      const auto parsed = io::parse_report(bytes);
      h.expect(parsed.optimal_cost == std::optional<std::int64_t>(cost),
               std::string(name) + ": optimal cost drifted");
    } catch (const std::exception& e) {
      h.expect(false, std::string(name) + ": " + e.what());
    }
  }

  // Exit codes: 0 within budget, 1 over budget / no, 2 input problems.
  const fs::path kb = fixtures / "ex_kb.json";
  h.expect(run_cli(cli, "solve " + kb.string() + " --budget 3", h.tmp) == 0,
           "budget 3 should be feasible");
  h.expect(run_cli(cli, "solve " + kb.string() + " --budget 2", h.tmp) == 1,
           "budget 2 should be infeasible");
  h.expect(run_cli(cli, "solve " + (fixtures / "no_such_file.json").string(), h.tmp) == 2,
           "missing file should exit 2");
  h.expect(run_cli(cli, "solve " + (fixtures / "bad_missing_preferred.json").string(),
                   h.tmp) == 2,
           "missing preferred should exit 2");
  h.expect(run_cli(cli, "solve " + (fixtures / "bad_diagonal_price.json").string(),
                   h.tmp) == 2,
           "diagonal price should exit 2");

  // Method and epsilon routing stays deterministic.
  h.run_twice_identical(
      "solve " + (fixtures / "ex_plurality.json").string() + " --method fptas --epsilon 1/4",
      "solve_fptas", 0);
  h.run_twice_identical("solve " + kb.string() + " --method oracle", "solve_oracle", 0);

  // gen and reduce are deterministic too.
  h.run_twice_identical("gen --kind kb --seed 7", "gen_kb", 0);
  h.run_twice_identical("gen --kind approval_prime --seed 9", "gen_approval", 0);
  h.run_twice_identical("reduce " + (fixtures / "ex_negative.json").string(), "reduce", 0);
  try {
    const auto reduced = io::parse_instance(slurp(h.out("reduce.a.json")));
    h.expect(reduced.kind == io::ProblemKind::weighted_11,
             "reduce should emit a weighted_11 instance");
  } catch (const std::exception& e) {
    h.expect(false, std::string("reduce output: ") + e.what());
  }

  std::ostringstream detail;
  if (h.problems.empty()) {
    detail << "byte-identical reruns, fixture round-trips, exit codes 0/1/2";
  } else {
    detail << h.problems.size() << " problems; first: " << h.problems.front();
  }
  report(7, h.problems.empty(), detail.str());
}

void criterion_8() {
  const char* required[] = {"plurality", "veto", "approval", "3-approval", "utility"};
  std::ostringstream detail;
  bool ok = true;
  for (const char* name : required) {
    int count = 0;
    if (c1_stats.per_encoder.count(name)) count += c1_stats.per_encoder.at(name);
    if (c2_stats.per_encoder.count(name)) count += c2_stats.per_encoder.at(name);
    if (std::string(name) == "utility")
      count += c2_stats.per_encoder.count("freeform-utility")
                   ? c2_stats.per_encoder.at("freeform-utility")
                   : 0;
    detail << name << "=" << count << " ";
    if (count < kC8MinPerEncoder) ok = false;
  }
  detail << "(each compared against the oracle in criteria 1-2)";
  const bool upstream = c1_stats.mismatches == 0 && c2_stats.mismatches == 0;
  report(8, ok && upstream, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <briberon-cli> <fixtures-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path fixtures = argv[2];

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7(cli, fixtures);
  criterion_8();

  return failures;
}
