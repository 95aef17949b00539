#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "briberon/io.hpp"
#include "briberon/kb_bribery.hpp"
#include "briberon/testkit.hpp"
#include "briberon/weighted_bribery.hpp"

namespace {

using namespace briberon;

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file \"" + out_path + "\"");
  out << text;
}

Eps parse_eps(const std::string& text) {
  const auto pos = text.find('/');
  if (pos != std::string::npos) {
    try {
      const Eps eps{std::stoll(text.substr(0, pos)), std::stoll(text.substr(pos + 1))};
      require_valid(eps);
      return eps;
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw std::invalid_argument("epsilon must be a fraction like \"1/4\" with 0 < eps < 1");
}

std::string slot_label(const CandidateSet& labels, int slot) {
  return slot < labels.size() ? labels.names[slot] : std::string("unassigned");
}

void fill_scores(io::Report& report, const CandidateSet& labels, const ScoreVector& scores) {
  for (int c = 0; c < labels.size(); ++c)
    report.post_scores.emplace_back(labels.names[c], scores.scores[c]);
  for (const int w : winners(scores)) report.winners.push_back(labels.names[w]);
}

io::Report report_kb(const io::InstanceDoc& doc, const KBBriberyInstance& inst,
                     const std::optional<SolveOutcome>& outcome, const std::string& method) {
  io::Report report;
  report.problem = doc.kind;
  report.method = method;
  const auto& labels = inst.election.candidates;
  if (outcome) {
    report.feasible = true;
    report.optimal_cost = outcome->optimal_cost;
    report.achieved_score = outcome->achieved_score;
    for (const Move& move : outcome->optimal_plan.moves)
      report.plan.push_back({move.voter, slot_label(labels, move.from),
                             slot_label(labels, move.to), std::nullopt, move.count});
    fill_scores(report, labels, outcome->post_scores);
  } else {
    report.feasible = false;
    fill_scores(report, labels, tally(inst.election));
  }
  if (inst.budget) {
    report.budget = *inst.budget;
    report.within_budget = outcome && outcome->within_budget.value_or(false);
  }
  return report;
}

int exit_code_for(const io::Report& report) {
  if (report.budget) return *report.within_budget ? kOk : kNo;
  return report.feasible ? kOk : kNo;
}

int run_solve_kb(const io::InstanceDoc& doc, KBBriberyInstance inst,
                 const std::string& method, const std::string& out_path) {
  std::optional<SolveOutcome> outcome;
  if (method == "flow") {
    outcome = solve_optimal(inst);
  } else {  // oracle
    const auto brute = testkit::brute_kb(inst);
    SolveOutcome built;
    built.optimal_plan = brute.plan;
    built.optimal_cost = brute.cost;
    const auto after = apply_plan(inst, brute.plan);
    built.post_scores = tally(after);
    built.achieved_score = built.post_scores.scores[inst.preferred];
    if (inst.budget) built.within_budget = brute.cost <= *inst.budget;
    outcome = std::move(built);
  }
  const auto report = report_kb(doc, inst, outcome, method);
  write_output(io::serialize_report(report), out_path);
  return exit_code_for(report);
}

int run_solve_plurality(const io::InstanceDoc& doc, const WeightedPluralityInstance& inst,
                        const std::string& method, const Eps& eps,
                        const std::string& out_path) {
  io::Report report;
  report.problem = doc.kind;
  report.method = method;
  report.feasible = true;

  std::vector<int> bribed;
  std::int64_t cost = 0;
  if (method == "exact") {
    const auto result = solve_plurality_exact(inst);
    bribed = result.bribed;
    cost = result.cost;
  } else if (method == "fptas") {
    report.epsilon = eps.str();
    const auto result = fptas_strict(inst, eps);
    bribed = result.bribed;
    cost = result.cost;
  } else {  // oracle
    const auto result = testkit::brute_weighted_plurality(inst, false);
    bribed = result.bribed;
    cost = result.cost;
  }
  report.optimal_cost = cost;
  for (const int v : bribed) report.plan.push_back({v, {}, {}, {}, {}});
  fill_scores(report, doc.labels, plurality_scores(inst, &bribed));
  if (inst.budget) {
    report.budget = *inst.budget;
    report.within_budget = cost <= *inst.budget;
  }
  write_output(io::serialize_report(report), out_path);
  return exit_code_for(report);
}

int run_solve_approval(const io::InstanceDoc& doc, const ApprovalPrimeInstance& inst,
                       const std::string& method, const Eps& eps,
                       const std::string& out_path) {
  io::Report report;
  report.problem = doc.kind;
  report.method = method;
  report.feasible = true;

  std::vector<Flip> flips;
  std::int64_t cost = 0;
  if (method == "exact") {
    const auto result = solve_approval_prime_exact(inst);
    flips = result.flips;
    cost = result.cost;
  } else if (method == "fptas") {
    report.epsilon = eps.str();
    const auto result = fptas_strict(inst, eps);
    flips = result.flips;
    cost = result.cost;
  } else {  // oracle
    const auto result = testkit::brute_approval_prime(inst);
    flips = result.flips;
    cost = result.cost;
  }
  report.optimal_cost = cost;
  for (const Flip& f : flips)
    report.plan.push_back({f.voter, {}, {}, doc.labels.names[f.candidate], {}});
  fill_scores(report, doc.labels, approval_scores(inst, &flips));
  if (inst.budget) {
    report.budget = *inst.budget;
    report.within_budget = cost <= *inst.budget;
  }
  write_output(io::serialize_report(report), out_path);
  return exit_code_for(report);
}

int run_solve_negative(const io::InstanceDoc& doc, const NegativeBriberyInstance& inst,
                       const std::string& out_path) {
  const auto decision = testkit::brute_negative(inst);
  io::Report report;
  report.problem = doc.kind;
  report.method = "oracle";
  report.feasible = decision.yes;
  report.budget = inst.budget;

  ScoreVector scores;
  scores.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    scores.scores[voter.vote] = checked_add(scores.scores[voter.vote], voter.weight);
  for (const auto& [v, target] : decision.witness) {
    report.plan.push_back({v, {}, doc.labels.names[target], {}, {}});
    scores.scores[inst.voters[v].vote] -= inst.voters[v].weight;
    scores.scores[target] += inst.voters[v].weight;
  }
  fill_scores(report, doc.labels, scores);
  write_output(io::serialize_report(report), out_path);
  return report.feasible ? kOk : kNo;
}

int run_solve_weighted11(const io::InstanceDoc& doc, const Weighted11Instance& inst,
                         const std::string& out_path) {
  const auto decision = testkit::brute_11_weighted(inst);
  io::Report report;
  report.problem = doc.kind;
  report.method = "oracle";
  report.feasible = decision.yes;
  report.budget = inst.budget;

  ScoreVector scores;
  scores.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    scores.scores[voter.vote] = checked_add(scores.scores[voter.vote], voter.weight);
  std::int64_t cost = 0;
  for (const auto& [v, target] : decision.witness) {
    report.plan.push_back({v, doc.labels.names[inst.voters[v].vote],
                           doc.labels.names[target], {}, {}});
    cost = checked_add(cost, inst.voters[v].prices.at(inst.voters[v].vote, target));
    scores.scores[inst.voters[v].vote] -= inst.voters[v].weight;
    scores.scores[target] += inst.voters[v].weight;
  }
  if (decision.yes) report.optimal_cost = cost;  // witness cost, within budget
  fill_scores(report, doc.labels, scores);
  write_output(io::serialize_report(report), out_path);
  return report.feasible ? kOk : kNo;
}

bool method_supported(io::ProblemKind kind, const std::string& method) {
  switch (kind) {
    case io::ProblemKind::kb:
    case io::ProblemKind::kb_freeform:
      return method == "flow" || method == "oracle";
    case io::ProblemKind::plurality_weighted:
    case io::ProblemKind::approval_prime:
      return method == "exact" || method == "fptas" || method == "oracle";
    case io::ProblemKind::negative_plurality:
    case io::ProblemKind::weighted_11:
      return method == "oracle";
  }
  return false;
}

std::string default_method(io::ProblemKind kind) {
  switch (kind) {
    case io::ProblemKind::kb:
    case io::ProblemKind::kb_freeform:
      return "flow";
    case io::ProblemKind::plurality_weighted:
    case io::ProblemKind::approval_prime:
      return "exact";
    case io::ProblemKind::negative_plurality:
    case io::ProblemKind::weighted_11:
      return "oracle";
  }
  return "flow";
}

int run_solve(const std::string& file, std::string method, const std::string& eps_text,
              const std::optional<std::int64_t>& budget, const std::string& out_path) {
  auto doc = io::parse_instance(read_file(file));
  if (method.empty()) method = default_method(doc.kind);
  if (!method_supported(doc.kind, method)) {
    std::cerr << "method \"" << method << "\" is not available for problem \""
              << io::kind_name(doc.kind) << "\"\n";
    return kInputError;
  }
  const Eps eps = parse_eps(eps_text);

  switch (doc.kind) {
    case io::ProblemKind::kb:
    case io::ProblemKind::kb_freeform: {
      auto inst = std::get<KBBriberyInstance>(doc.payload);
      if (budget) inst.budget = *budget;
      return run_solve_kb(doc, std::move(inst), method, out_path);
    }
    case io::ProblemKind::plurality_weighted: {
      auto inst = std::get<WeightedPluralityInstance>(doc.payload);
      if (budget) inst.budget = *budget;
      return run_solve_plurality(doc, inst, method, eps, out_path);
    }
    case io::ProblemKind::approval_prime: {
      auto inst = std::get<ApprovalPrimeInstance>(doc.payload);
      if (budget) inst.budget = *budget;
      return run_solve_approval(doc, inst, method, eps, out_path);
    }
    case io::ProblemKind::negative_plurality: {
      auto inst = std::get<NegativeBriberyInstance>(doc.payload);
      if (budget) inst.budget = *budget;
      return run_solve_negative(doc, inst, out_path);
    }
    case io::ProblemKind::weighted_11: {
      auto inst = std::get<Weighted11Instance>(doc.payload);
      if (budget) inst.budget = *budget;
      return run_solve_weighted11(doc, inst, out_path);
    }
  }
  return kInternalError;
}

int run_reduce(const std::string& file, const std::string& out_path) {
  const auto doc = io::parse_instance(read_file(file));
  if (doc.kind != io::ProblemKind::negative_plurality) {
    std::cerr << "reduce expects a negative_plurality instance, got \""
              << io::kind_name(doc.kind) << "\"\n";
    return kInputError;
  }
  io::InstanceDoc reduced;
  reduced.kind = io::ProblemKind::weighted_11;
  reduced.labels = doc.labels;
  reduced.payload = reduce_negative_bribery(std::get<NegativeBriberyInstance>(doc.payload));
  write_output(io::serialize_instance(reduced), out_path);
  return kOk;
}

CandidateSet numbered_labels(int m) {
  CandidateSet labels;
  for (int c = 1; c <= m; ++c) labels.names.push_back("c" + std::to_string(c));
  return labels;
}

int run_gen(const std::string& kind_text, const testkit::GenParams& params,
            const std::string& out_path) {
  const auto kind = io::kind_by_name(kind_text);
  if (!kind) {
    std::cerr << "unknown problem kind \"" << kind_text << "\"\n";
    return kInputError;
  }
  testkit::GenParams effective = params;
  io::InstanceDoc doc;
  doc.kind = *kind;
  switch (*kind) {
    case io::ProblemKind::kb:
    case io::ProblemKind::kb_freeform: {
      effective.kind = testkit::GenKind::kb;
      effective.free_form = *kind == io::ProblemKind::kb_freeform;
      auto inst = testkit::gen_kb(effective);
      doc.labels = inst.election.candidates;
      doc.payload = std::move(inst);
      break;
    }
    case io::ProblemKind::plurality_weighted: {
      effective.kind = testkit::GenKind::plurality_weighted;
      auto inst = testkit::gen_plurality(effective);
      doc.labels = numbered_labels(inst.m);
      doc.payload = std::move(inst);
      break;
    }
    case io::ProblemKind::approval_prime: {
      effective.kind = testkit::GenKind::approval_prime;
      auto inst = testkit::gen_approval(effective);
      doc.labels = numbered_labels(inst.m);
      doc.payload = std::move(inst);
      break;
    }
    case io::ProblemKind::negative_plurality: {
      effective.kind = testkit::GenKind::negative_plurality;
      auto inst = testkit::gen_negative(effective);
      doc.labels = numbered_labels(inst.m);
      doc.payload = std::move(inst);
      break;
    }
    case io::ProblemKind::weighted_11: {
      effective.kind = testkit::GenKind::weighted_11;
      auto inst = testkit::gen_weighted11(effective);
      doc.labels = numbered_labels(inst.m);
      doc.payload = std::move(inst);
      break;
    }
  }
  write_output(io::serialize_instance(doc), out_path);
  return kOk;
}

struct BenchRow {
  std::string name;
  int cases = 0;
  double total_ms = 0.0;
};

KBBriberyInstance scaling_instance(std::int64_t k) {
  testkit::SplitMix64 rng(424242);
  const int m = 10, n = 50;
  const std::int64_t b = 5;
  CandidateSet labels = numbered_labels(m);
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

template <typename Fn>
BenchRow timed(const std::string& name, int cases, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return {name, cases,
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
              .count()};
}

BenchRow bench_kb(bool free_form) {
  const int cases = free_form ? 30 : 50;
  return timed(free_form ? "freeform" : "kb", cases, [&] {
    for (int seed = 1; seed <= cases; ++seed) {
      testkit::GenParams params;
      params.seed = static_cast<std::uint64_t>(seed);
      params.free_form = free_form;
      params.m = {2, 4};
      params.n = {1, 4};
      params.k = {1, 3};
      params.b = {1, 2};
      const auto inst = testkit::gen_kb(params);
      (void)solve_optimal(inst);
    }
  });
}

BenchRow bench_fptas() {
  return timed("fptas", 50, [] {
    for (int seed = 1; seed <= 50; ++seed) {
      testkit::GenParams params;
      params.seed = static_cast<std::uint64_t>(seed);
      params.m = {2, 5};
      params.n = {1, 10};
      params.weight = {1, 20};
      params.price = {0, 1000000};
      const auto inst = testkit::gen_plurality(params);
      (void)fptas_strict(inst, Eps{1, 4});
    }
  });
}

BenchRow bench_reduction() {
  return timed("reduction", 200, [] {
    for (int seed = 1; seed <= 200; ++seed) {
      testkit::GenParams params;
      params.seed = static_cast<std::uint64_t>(seed);
      params.m = {2, 4};
      params.n = {1, 6};
      params.weight = {1, 9};
      const auto inst = testkit::gen_negative(params);
      const auto reduced = reduce_negative_bribery(inst);
      (void)testkit::brute_11_weighted(reduced);
    }
  });
}

BenchRow bench_flow() {
  return timed("flow", 100, [] {
    testkit::SplitMix64 rng(7);
    for (int round = 0; round < 100; ++round) {
      const int nodes = static_cast<int>(rng.bounded(2, 20));
      FlowNetwork net;
      net.node_count = nodes;
      net.source = 0;
      net.sink = nodes - 1;
      const int arcs = static_cast<int>(rng.bounded(1, 40));
      for (int a = 0; a < arcs; ++a) {
        const int from = static_cast<int>(rng.bounded(0, nodes - 1));
        int to = static_cast<int>(rng.bounded(0, nodes - 1));
        if (to == from) to = (to + 1) % nodes;
        net.arcs.push_back({from, to, rng.bounded(0, 5), rng.bounded(0, 9)});
      }
      (void)solve_min_cost_flow(net, rng.bounded(0, 5));
    }
  });
}

BenchRow bench_ksweep() {
  return timed("ksweep", 3, [] {
    for (const std::int64_t k : {5, 10, 20}) (void)solve_optimal(scaling_instance(k));
  });
}

int run_bench(const std::string& suite) {
  std::vector<BenchRow> rows;
  const bool all = suite == "all";
  if (all || suite == "kb") rows.push_back(bench_kb(false));
  if (all || suite == "freeform") rows.push_back(bench_kb(true));
  if (all || suite == "fptas") rows.push_back(bench_fptas());
  if (all || suite == "reduction") rows.push_back(bench_reduction());
  if (all || suite == "flow") rows.push_back(bench_flow());
  if (all || suite == "ksweep") rows.push_back(bench_ksweep());
  if (rows.empty()) {
    std::cerr << "unknown suite \"" << suite
              << "\" (expected kb|freeform|fptas|reduction|flow|ksweep|all)\n";
    return kInputError;
  }
  std::printf("%-12s %8s %12s %12s\n", "suite", "cases", "total_ms", "per_case_ms");
  for (const auto& row : rows)
    std::printf("%-12s %8d %12.2f %12.3f\n", row.name.c_str(), row.cases, row.total_ms,
                row.total_ms / std::max(row.cases, 1));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"briberon: election bribery optimization toolkit"};
  app.require_subcommand(1);

  std::string solve_file, method, eps_text = "1/2", out_path;
  std::optional<std::int64_t> budget;
  auto* solve = app.add_subcommand("solve", "solve an instance file and emit a report");
  solve->add_option("file", solve_file, "instance file")->required();
  solve->add_option("--method", method, "flow|exact|fptas|oracle (kind-dependent)");
  solve->add_option("--epsilon", eps_text, "approximation parameter N/D (fptas)");
  solve->add_option("--budget", budget, "budget override");
  solve->add_option("--out", out_path, "write the report here instead of stdout");

  std::string reduce_file, reduce_out;
  auto* reduce = app.add_subcommand(
      "reduce", "rewrite a negative_plurality instance as weighted_11");
  reduce->add_option("file", reduce_file, "instance file")->required();
  reduce->add_option("--out", reduce_out, "write the instance here instead of stdout");

  std::string gen_kind, gen_encoder = "none", gen_out;
  testkit::GenParams params;
  auto* gen = app.add_subcommand("gen", "emit a seeded random instance");
  gen->add_option("--seed", params.seed, "generator seed");
  gen->add_option("--kind", gen_kind, "problem kind")->required();
  gen->add_option("--encoder", gen_encoder,
                  "ballot encoder for kb kinds: none|plurality|veto|approval|t_approval");
  gen->add_option("--t", params.t_approval_t, "t for the t_approval encoder");
  gen->add_option("--m-lo", params.m.lo);
  gen->add_option("--m-hi", params.m.hi);
  gen->add_option("--n-lo", params.n.lo);
  gen->add_option("--n-hi", params.n.hi);
  gen->add_option("--k-lo", params.k.lo);
  gen->add_option("--k-hi", params.k.hi);
  gen->add_option("--b-lo", params.b.lo);
  gen->add_option("--b-hi", params.b.hi);
  gen->add_option("--weight-lo", params.weight.lo);
  gen->add_option("--weight-hi", params.weight.hi);
  gen->add_option("--price-lo", params.price.lo);
  gen->add_option("--price-hi", params.price.hi);
  gen->add_option("--out", gen_out, "write the instance here instead of stdout");

  std::string suite = "all";
  auto* bench = app.add_subcommand("bench", "run a timing suite");
  bench->add_option("--suite", suite, "kb|freeform|fptas|reduction|flow|ksweep|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }

  try {
    if (solve->parsed()) return run_solve(solve_file, method, eps_text, budget, out_path);
    if (reduce->parsed()) return run_reduce(reduce_file, reduce_out);
    if (gen->parsed()) {
      if (gen_encoder == "none") params.encoder = testkit::BallotEncoder::none;
      else if (gen_encoder == "plurality") params.encoder = testkit::BallotEncoder::plurality;
      else if (gen_encoder == "veto") params.encoder = testkit::BallotEncoder::veto;
      else if (gen_encoder == "approval") params.encoder = testkit::BallotEncoder::approval;
      else if (gen_encoder == "t_approval") params.encoder = testkit::BallotEncoder::t_approval;
      else {
        std::cerr << "unknown encoder \"" << gen_encoder << "\"\n";
        return kInputError;
      }
      return run_gen(gen_kind, params, gen_out);
    }
    if (bench->parsed()) return run_bench(suite);
  } catch (const io::ParseError& e) {
    const char* stage = e.stage() == io::ParseError::Stage::syntax ? "syntax"
                        : e.stage() == io::ParseError::Stage::schema ? "schema"
                                                                     : "validation";
    std::cerr << stage << " error: " << e.what() << "\n";
    return kInputError;
  } catch (const OverflowError& e) {
    std::cerr << "input exceeds the exact arithmetic range: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
