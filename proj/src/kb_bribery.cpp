#include "briberon/kb_bribery.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace briberon {

std::vector<Violation> validate(const KBBriberyInstance& inst) {
  std::vector<Violation> out = validate(inst.election);
  const int n = inst.election.voter_count();
  for (int v = 0; v < std::min<int>(n, static_cast<int>(inst.election.weights.size())); ++v) {
    if (inst.election.weights[v] != 1)
      out.push_back({v, "bribery instances require unit voter weights"});
  }
  if (inst.preferred < 0 || inst.preferred >= inst.election.candidate_count())
    out.push_back({-1, "preferred candidate index out of range"});
  if (static_cast<int>(inst.prices.size()) != n) {
    out.push_back({-1, "price table count differs from voter count"});
  } else {
    const int slots = inst.slot_count();
    for (int v = 0; v < n; ++v) {
      const PriceTable& t = inst.prices[v];
      if (t.slot_count != slots) {
        out.push_back({v, "price table has the wrong slot count"});
        continue;
      }
      if (t.entries.size() != static_cast<size_t>(slots) * slots) {
        out.push_back({v, "price table entry count differs from slot_count^2"});
        continue;
      }
      for (int i = 0; i < slots; ++i) {
        if (t.at(i, i) != 0) {
          out.push_back({v, "price table diagonal must be zero"});
          break;
        }
      }
      for (int i = 0; i < slots && out.size() < 64; ++i)
        for (int j = 0; j < slots; ++j)
          if (t.at(i, j) < 0) {
            out.push_back({v, "price table entry is negative"});
            i = slots;
            break;
          }
    }
  }
  if (inst.budget && *inst.budget < 0) out.push_back({-1, "budget is negative"});
  return out;
}

void require_valid(const KBBriberyInstance& inst) {
  const auto violations = validate(inst);
  if (violations.empty()) return;
  std::string msg = "invalid bribery instance:";
  int shown = 0;
  for (const auto& v : violations) {
    if (shown == 4) {
      msg += " ...";
      break;
    }
    msg += " [";
    if (v.voter >= 0) msg += "voter " + std::to_string(v.voter) + ": ";
    msg += v.reason + "]";
    ++shown;
  }
  throw std::invalid_argument(msg);
}

std::int64_t penalty_cost(const KBBriberyInstance& inst) {
  std::int64_t max_price = 0;
  for (const auto& table : inst.prices)
    for (const auto entry : table.entries) max_price = std::max(max_price, entry);
  const auto n = static_cast<std::int64_t>(inst.election.voter_count());
  return checked_add(std::int64_t{1},
                     checked_mul(checked_mul(inst.election.k, n), max_price));
}

NetworkLayout layout_for(const KBBriberyInstance& inst) {
  NetworkLayout layout;
  layout.m = inst.election.candidate_count();
  layout.n = inst.election.voter_count();
  layout.slots = inst.slot_count();
  layout.free_form = inst.election.free_form;
  return layout;
}

FlowNetwork build_network(const KBBriberyInstance& inst, std::int64_t target_score) {
  require_valid(inst);
  if (target_score < 0) throw std::invalid_argument("target score is negative");
  const KBElection& e = inst.election;
  const NetworkLayout L = layout_for(inst);
  const std::int64_t T = penalty_cost(inst);
  const auto total_points = checked_mul(e.k, static_cast<std::int64_t>(L.n));
  (void)checked_mul(T, checked_add(total_points, std::int64_t{1}));  // decode stays in range

  FlowNetwork net;
  net.node_count = L.node_count();
  net.source = NetworkLayout::source;
  net.sink = NetworkLayout::sink;
  net.arcs.reserve(static_cast<size_t>(L.arc_count()));

  for (int v = 0; v < L.n; ++v) {
    for (int s = 0; s < L.slots; ++s) {
      const std::int64_t held = s < L.m ? e.ballots[v].points[s] : e.ballots[v].unassigned;
      net.arcs.push_back({NetworkLayout::source, L.supply_node(v, s), held, 0});
    }
  }
  for (int v = 0; v < L.n; ++v)
    for (int i = 0; i < L.slots; ++i)
      for (int j = 0; j < L.slots; ++j)
        net.arcs.push_back(
            {L.supply_node(v, i), L.result_node(v, j), e.k, inst.prices[v].at(i, j)});
  for (int v = 0; v < L.n; ++v) {
    for (int c = 0; c < L.m; ++c)
      net.arcs.push_back({L.result_node(v, c), L.total_node(c), e.b, 0});
    if (L.free_form)
      net.arcs.push_back({L.result_node(v, L.m), NetworkLayout::sink, e.k, T});
  }
  for (int c = 0; c < L.m; ++c)
    net.arcs.push_back({L.total_node(c), NetworkLayout::sink, target_score,
                        c == inst.preferred ? 0 : T});
  return net;
}

namespace {

struct SweepCandidate {
  std::int64_t target = 0;
  SolveOutcome outcome;
};

// Solves one target score. nullopt when the network cannot carry all points
// or the preferred candidate falls short of the target.
std::optional<SweepCandidate> attempt_target(const KBBriberyInstance& inst,
                                             std::int64_t target,
                                             const SweepObserver& observer) {
  const KBElection& e = inst.election;
  const NetworkLayout L = layout_for(inst);
  const std::int64_t T = penalty_cost(inst);
  const auto total_points = checked_mul(e.k, static_cast<std::int64_t>(L.n));

  const FlowNetwork net = build_network(inst, target);
  const auto flow = solve_min_cost_flow(net, total_points);
  if (!flow) return std::nullopt;
  if (observer) observer(target, net, *flow);

  const std::int64_t preferred_inflow = flow->arc_flow[L.score_arc(inst.preferred)];
  if (preferred_inflow != target) return std::nullopt;

  SweepCandidate cand;
  cand.target = target;
  BriberyPlan& plan = cand.outcome.optimal_plan;
  for (int v = 0; v < L.n; ++v) {
    for (int i = 0; i < L.slots; ++i) {
      for (int j = 0; j < L.slots; ++j) {
        if (i == j) continue;
        const std::int64_t f = flow->arc_flow[L.move_arc(v, i, j)];
        if (f > 0) {
          plan.moves.push_back({v, i, j, f});
          plan.total_price =
              checked_add(plan.total_price, checked_mul(f, inst.prices[v].at(i, j)));
        }
      }
    }
  }

  const std::int64_t shortfall = total_points - preferred_inflow;
  if (flow->cost != checked_add(plan.total_price, checked_mul(T, shortfall)))
    throw std::logic_error("plan price does not match the flow cost decomposition");

  cand.outcome.optimal_cost = plan.total_price;
  const KBElection after = apply_plan(inst, plan);
  cand.outcome.post_scores = tally(after);
  cand.outcome.achieved_score = cand.outcome.post_scores.scores[inst.preferred];
  if (cand.outcome.achieved_score != target)
    throw std::logic_error("applied plan does not reach the target score");
  const auto w = winners(cand.outcome.post_scores);
  if (!std::binary_search(w.begin(), w.end(), inst.preferred))
    throw std::logic_error("accepted plan does not make the preferred candidate a co-winner");
  return cand;
}

int thread_hint() {
  const char* raw = std::getenv("BRIBERON_THREADS");
  if (raw == nullptr) return 1;
  char* end = nullptr;
  const long parsed = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || parsed < 1 || parsed > 256) return 1;
  return static_cast<int>(parsed);
}

}  // namespace

std::optional<SolveOutcome> solve_optimal(const KBBriberyInstance& inst,
                                          const SweepObserver& observer) {
  require_valid(inst);
  const KBElection& e = inst.election;
  const auto n = static_cast<std::int64_t>(e.voter_count());
  const auto m = static_cast<std::int64_t>(e.candidate_count());
  const auto total_points = checked_mul(e.k, n);

  // Only targets in this window can be accepted: below lo the other
  // candidates cannot absorb the remaining points, above hi the preferred
  // candidate cannot hold that many.
  const std::int64_t lo = e.free_form ? 0 : ceil_div(total_points, m);
  const std::int64_t hi = std::min(total_points, checked_mul(n, e.b));
  if (lo > hi) return std::nullopt;

  const auto span = static_cast<size_t>(hi - lo + 1);
  std::vector<std::optional<SweepCandidate>> results(span);

  const int threads = observer ? 1 : thread_hint();
  if (threads <= 1 || span == 1) {
    for (size_t i = 0; i < span; ++i)
      results[i] = attempt_target(inst, lo + static_cast<std::int64_t>(i), observer);
  } else {
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&]() {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= span) return;
        try {
          results[i] = attempt_target(inst, lo + static_cast<std::int64_t>(i), {});
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const size_t count = std::min<size_t>(static_cast<size_t>(threads), span);
    pool.reserve(count);
    for (size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  std::optional<SolveOutcome> best;
  for (auto& cand : results) {
    if (!cand) continue;
    if (!best || cand->outcome.optimal_cost < best->optimal_cost)
      best = std::move(cand->outcome);
  }
  if (best && inst.budget) best->within_budget = best->optimal_cost <= *inst.budget;
  return best;
}

Decision decide(const KBBriberyInstance& inst, std::int64_t budget) {
  if (budget < 0) throw std::invalid_argument("budget is negative");
  KBBriberyInstance bounded = inst;
  bounded.budget = budget;
  auto outcome = solve_optimal(bounded);
  Decision d;
  d.yes = outcome && outcome->within_budget.value_or(false);
  d.outcome = std::move(outcome);
  return d;
}

KBElection apply_plan(const KBBriberyInstance& inst, const BriberyPlan& plan) {
  require_valid(inst);
  const int n = inst.election.voter_count();
  const int slots = inst.slot_count();
  const int m = inst.election.candidate_count();

  std::vector<std::vector<std::int64_t>> delta(n, std::vector<std::int64_t>(slots, 0));
  std::vector<std::vector<std::int64_t>> out(n, std::vector<std::int64_t>(slots, 0));
  for (const Move& move : plan.moves) {
    if (move.voter < 0 || move.voter >= n)
      throw std::invalid_argument("move references a voter outside the election");
    if (move.from < 0 || move.from >= slots || move.to < 0 || move.to >= slots)
      throw std::invalid_argument("move references a slot outside the price table");
    if (move.from == move.to)
      throw std::invalid_argument("move source and destination are the same slot");
    if (move.count < 1) throw std::invalid_argument("move count must be positive");
    out[move.voter][move.from] = checked_add(out[move.voter][move.from], move.count);
    delta[move.voter][move.from] -= move.count;
    delta[move.voter][move.to] = checked_add(delta[move.voter][move.to], move.count);
  }

  KBElection after = inst.election;
  for (int v = 0; v < n; ++v) {
    for (int s = 0; s < slots; ++s) {
      const std::int64_t held =
          s < m ? inst.election.ballots[v].points[s] : inst.election.ballots[v].unassigned;
      if (out[v][s] > held)
        throw std::invalid_argument(
            "plan moves more points out of a slot than the voter holds there");
      if (s < m)
        after.ballots[v].points[s] += delta[v][s];
      else
        after.ballots[v].unassigned += delta[v][s];
    }
  }
  require_valid(after);
  return after;
}

}  // namespace briberon
