#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "briberon/checked.hpp"

namespace briberon {

struct Arc {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 0;  // nonnegative; zero-capacity arcs are inert
  std::int64_t cost = 0;      // nonnegative

  bool operator==(const Arc&) const = default;
};

struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<Arc> arcs;  // parallel arcs permitted

  bool operator==(const FlowNetwork&) const = default;
};

struct Flow {
  std::vector<std::int64_t> arc_flow;  // aligned with FlowNetwork::arcs
  std::int64_t value = 0;
  std::int64_t cost = 0;

  bool operator==(const Flow&) const = default;
};

void validate_network(const FlowNetwork& net);  // throws std::invalid_argument

// Minimum-cost flow of exactly target_value units from source to sink.
// Returns nullopt when the maximum flow falls short of the target.
// Deterministic: among equal-cost shortest augmenting paths the one with the
// lexicographically smallest node sequence is used.
std::optional<Flow> solve_min_cost_flow(const FlowNetwork& net, std::int64_t target_value);

// True iff the residual graph of flow has no directed cycle of negative total
// cost, i.e. flow is cost-minimal among flows of its value. The flow must be
// feasible for the network; infeasible input is rejected.
bool verify_optimality(const FlowNetwork& net, const Flow& flow);

}  // namespace briberon
