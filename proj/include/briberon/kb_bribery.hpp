#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "briberon/election.hpp"
#include "briberon/mincost_flow.hpp"

namespace briberon {

// Per-voter move prices across slots. Slots 0..m-1 are the candidates; in
// free-form instances one extra slot (index m) is the unassigned pool, so the
// table is (m+1) x (m+1). The diagonal is always zero.
struct PriceTable {
  int slot_count = 0;
  std::vector<std::int64_t> entries;  // row-major, entries[from * slot_count + to]

  static PriceTable zeros(int slot_count) {
    PriceTable t;
    t.slot_count = slot_count;
    t.entries.assign(static_cast<size_t>(slot_count) * slot_count, 0);
    return t;
  }
  std::int64_t at(int from, int to) const {
    return entries[static_cast<size_t>(from) * slot_count + to];
  }
  std::int64_t& at(int from, int to) {
    return entries[static_cast<size_t>(from) * slot_count + to];
  }
  bool operator==(const PriceTable&) const = default;
};

struct KBBriberyInstance {
  KBElection election;  // weights must all be 1
  int preferred = 0;
  std::vector<PriceTable> prices;  // one table per voter
  std::optional<std::int64_t> budget;

  int slot_count() const {
    return election.candidate_count() + (election.free_form ? 1 : 0);
  }
  int unassigned_slot() const { return election.candidate_count(); }
  bool operator==(const KBBriberyInstance&) const = default;
};

// One unit-bribery group: count points of one voter moved from one slot to
// another. The unassigned pool is slot index m.
struct Move {
  int voter = 0;
  int from = 0;
  int to = 0;
  std::int64_t count = 0;

  bool operator==(const Move&) const = default;
};

struct BriberyPlan {
  std::vector<Move> moves;  // sorted by (voter, from, to)
  std::int64_t total_price = 0;

  bool operator==(const BriberyPlan&) const = default;
};

struct SolveOutcome {
  BriberyPlan optimal_plan;
  std::int64_t optimal_cost = 0;
  std::int64_t achieved_score = 0;  // preferred candidate's score after the plan
  ScoreVector post_scores;
  std::optional<bool> within_budget;  // present iff the instance carries a budget
};

std::vector<Violation> validate(const KBBriberyInstance& inst);
void require_valid(const KBBriberyInstance& inst);

// Shortfall penalty: one unit more than any plan could ever cost, so the flow
// solver always prefers raising the preferred candidate's score over saving
// on prices.
std::int64_t penalty_cost(const KBBriberyInstance& inst);

// Node and arc indexing of the solver network for one target score. Exposed
// so tests and decoders agree on the layout without re-deriving it.
struct NetworkLayout {
  int m = 0;          // candidates
  int n = 0;          // voters
  int slots = 0;      // m, or m+1 in free-form
  bool free_form = false;

  static constexpr int source = 0;
  static constexpr int sink = 1;
  int supply_node(int voter, int slot) const { return 2 + voter * slots + slot; }
  int result_node(int voter, int slot) const { return 2 + (n + voter) * slots + slot; }
  int total_node(int candidate) const { return 2 + 2 * n * slots + candidate; }
  int node_count() const { return 2 + 2 * n * slots + m; }

  int supply_arc(int voter, int slot) const { return voter * slots + slot; }
  int move_arc(int voter, int from, int to) const {
    return n * slots + (voter * slots + from) * slots + to;
  }
  int cap_arc(int voter, int candidate) const {
    return n * slots * (1 + slots) + voter * (m + (free_form ? 1 : 0)) + candidate;
  }
  int exit_arc(int voter) const { return cap_arc(voter, m); }  // free-form only
  int score_arc(int candidate) const {
    return n * slots * (1 + slots) + n * (m + (free_form ? 1 : 0)) + candidate;
  }
  int arc_count() const { return score_arc(m - 1) + 1; }
};

NetworkLayout layout_for(const KBBriberyInstance& inst);

// The solver network for one candidate target score. Pushing all k*n points
// through it at minimum cost prices the cheapest plan that lifts the
// preferred candidate to exactly target_score while capping every candidate
// at target_score.
FlowNetwork build_network(const KBBriberyInstance& inst, std::int64_t target_score);

// Called once per solved target score with the network and its optimal flow.
// When set, the sweep runs sequentially.
using SweepObserver =
    std::function<void(std::int64_t target_score, const FlowNetwork&, const Flow&)>;

// Cheapest plan that makes the preferred candidate a co-winner. Sweeps every
// reachable target score and keeps the cheapest accepted one (ties: lowest
// score). Honors BRIBERON_THREADS as a parallelism hint; results never depend
// on it. nullopt only in degenerate regimes with no accepted score.
std::optional<SolveOutcome> solve_optimal(const KBBriberyInstance& inst,
                                          const SweepObserver& observer = {});

struct Decision {
  bool yes = false;
  std::optional<SolveOutcome> outcome;
};

Decision decide(const KBBriberyInstance& inst, std::int64_t budget);

// Applies a plan to the instance's election, enforcing the moved-out bound
// (no slot loses more points than the voter originally had there) and the
// (k,b) rules on the result.
KBElection apply_plan(const KBBriberyInstance& inst, const BriberyPlan& plan);

}  // namespace briberon
