#include "briberon/mincost_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace briberon {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Residual arcs come in pairs: 2e is arc e forward, 2e+1 its reverse.
struct Residual {
  int n = 0;
  int source = 0;
  int sink = 0;
  std::vector<std::int64_t> cap;
  std::vector<std::int64_t> cost;            // real cost, reverse arcs negated
  std::vector<int> head;
  std::vector<std::vector<int>> adj;         // sorted by (head, arc id)
  std::vector<std::vector<int>> radj;        // arcs entering each node
  std::vector<std::int64_t> pot, dist;

  int tail(int a) const { return head[a ^ 1]; }

  std::int64_t reduced(int a) const { return cost[a] + pot[tail(a)] - pot[head[a]]; }

  explicit Residual(const FlowNetwork& net)
      : n(net.node_count), source(net.source), sink(net.sink) {
    const size_t e = net.arcs.size();
    cap.resize(2 * e);
    cost.resize(2 * e);
    head.resize(2 * e);
    adj.assign(n, {});
    radj.assign(n, {});
    for (size_t i = 0; i < e; ++i) {
      const Arc& a = net.arcs[i];
      cap[2 * i] = a.capacity;
      cost[2 * i] = a.cost;
      head[2 * i] = a.to;
      cap[2 * i + 1] = 0;
      cost[2 * i + 1] = -a.cost;
      head[2 * i + 1] = a.from;
      adj[a.from].push_back(static_cast<int>(2 * i));
      adj[a.to].push_back(static_cast<int>(2 * i + 1));
      radj[a.to].push_back(static_cast<int>(2 * i));
      radj[a.from].push_back(static_cast<int>(2 * i + 1));
    }
    for (auto& list : adj) {
      std::sort(list.begin(), list.end(), [&](int x, int y) {
        if (head[x] != head[y]) return head[x] < head[y];
        return x < y;
      });
    }
    pot.assign(n, 0);
    dist.assign(n, 0);
  }

  // Shortest reduced-cost distances from the source. False when the sink is
  // unreachable in the residual graph.
  bool dijkstra() {
    dist.assign(n, kInf);
    dist[source] = 0;
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0, source});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d != dist[u]) continue;
      for (int a : adj[u]) {
        if (cap[a] <= 0) continue;
        const int v = head[a];
        const std::int64_t nd = d + reduced(a);
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.push({nd, v});
        }
      }
    }
    if (dist[sink] >= kInf) return false;
    for (int v = 0; v < n; ++v) {
      pot[v] += std::min(dist[v], dist[sink]);
    }
    return true;
  }

  // Marks nodes that still reach the sink through tight arcs (zero reduced
  // cost, residual capacity left). All shortest augmenting paths live in that
  // subgraph.
  void mark_reaching_sink(std::vector<char>& reach) const {
    reach.assign(n, 0);
    reach[sink] = 1;
    std::vector<int> stack = {sink};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : radj[v]) {
        if (cap[a] <= 0 || reduced(a) != 0) continue;
        const int u = tail(a);
        if (!reach[u]) {
          reach[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }

  // Lexicographically smallest (by node sequence, then arc id) simple
  // source-to-sink path through tight arcs. Empty when none exists.
  std::vector<int> lex_smallest_tight_path(const std::vector<char>& reach,
                                           std::vector<char>& on_path) const {
    on_path.assign(n, 0);
    std::vector<std::pair<int, size_t>> stack;  // node, next adjacency slot
    std::vector<int> path;
    stack.push_back({source, 0});
    on_path[source] = 1;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      bool advanced = false;
      while (idx < adj[u].size()) {
        const int a = adj[u][idx];
        ++idx;
        const int v = head[a];
        if (cap[a] <= 0 || reduced(a) != 0 || !reach[v] || on_path[v]) continue;
        path.push_back(a);
        if (v == sink) return path;
        on_path[v] = 1;
        stack.push_back({v, 0});
        advanced = true;
        break;
      }
      if (!advanced) {
        on_path[stack.back().first] = 0;
        stack.pop_back();
        if (!path.empty()) path.pop_back();
      }
    }
    return {};
  }
};

void guard_cost_magnitude(const FlowNetwork& net, std::int64_t target) {
  std::int64_t max_cost = 0;
  for (const Arc& a : net.arcs) max_cost = std::max(max_cost, a.cost);
  const auto v = static_cast<std::int64_t>(net.node_count);
  const std::int64_t a = checked_mul(checked_mul(max_cost, v), v);
  const std::int64_t b = checked_mul(checked_mul(max_cost, v), std::max<std::int64_t>(target, 1));
  if (a > kInf || b > kInf) throw OverflowError("flow cost bound exceeds the exact range");
}

}  // namespace

void validate_network(const FlowNetwork& net) {
  if (net.node_count < 1) throw std::invalid_argument("network has no nodes");
  auto in_range = [&](int v) { return v >= 0 && v < net.node_count; };
  if (!in_range(net.source) || !in_range(net.sink))
    throw std::invalid_argument("source or sink out of range");
  if (net.source == net.sink) throw std::invalid_argument("source equals sink");
  for (const Arc& a : net.arcs) {
    if (!in_range(a.from) || !in_range(a.to))
      throw std::invalid_argument("arc endpoint out of range");
    if (a.capacity < 0) throw std::invalid_argument("negative arc capacity");
    if (a.cost < 0) throw std::invalid_argument("negative arc cost");
  }
}

std::optional<Flow> solve_min_cost_flow(const FlowNetwork& net, std::int64_t target_value) {
  validate_network(net);
  if (target_value < 0) throw std::invalid_argument("negative flow target");
  guard_cost_magnitude(net, target_value);

  Flow result;
  result.arc_flow.assign(net.arcs.size(), 0);
  if (target_value == 0) return result;

  Residual r(net);
  std::int64_t pushed = 0;
  std::int64_t total_cost = 0;
  std::vector<char> reach, on_path;
  while (pushed < target_value) {
    if (!r.dijkstra()) return std::nullopt;
    // Drain the current shortest-path subgraph before re-running Dijkstra;
    // every path found here is still a shortest path.
    while (pushed < target_value) {
      r.mark_reaching_sink(reach);
      if (!reach[r.source]) break;
      const std::vector<int> path = r.lex_smallest_tight_path(reach, on_path);
      if (path.empty()) throw std::logic_error("tight path expected but not found");
      std::int64_t bottleneck = target_value - pushed;
      for (int a : path) bottleneck = std::min(bottleneck, r.cap[a]);
      for (int a : path) {
        r.cap[a] -= bottleneck;
        r.cap[a ^ 1] += bottleneck;
        total_cost += bottleneck * r.cost[a];
      }
      pushed += bottleneck;
    }
  }
  for (size_t i = 0; i < net.arcs.size(); ++i) {
    result.arc_flow[i] = r.cap[2 * i + 1];
  }
  result.value = pushed;
  result.cost = total_cost;
  return result;
}

bool verify_optimality(const FlowNetwork& net, const Flow& flow) {
  validate_network(net);
  guard_cost_magnitude(net, 1);
  if (flow.arc_flow.size() != net.arcs.size())
    throw std::invalid_argument("flow does not match the network's arcs");
  std::vector<std::int64_t> excess(net.node_count, 0);
  std::int64_t cost = 0;
  for (size_t i = 0; i < net.arcs.size(); ++i) {
    const Arc& a = net.arcs[i];
    const std::int64_t f = flow.arc_flow[i];
    if (f < 0 || f > a.capacity)
      throw std::invalid_argument("arc flow outside its capacity bounds");
    excess[a.to] = checked_add(excess[a.to], f);
    excess[a.from] = checked_sub(excess[a.from], f);
    cost = checked_add(cost, checked_mul(f, a.cost));
  }
  for (int v = 0; v < net.node_count; ++v) {
    std::int64_t want = 0;
    if (v == net.source) want = -flow.value;
    if (v == net.sink) want = flow.value;
    if (excess[v] != want)
      throw std::invalid_argument("flow does not conserve at every node");
  }
  if (cost != flow.cost) throw std::invalid_argument("flow cost field is inconsistent");

  // Bellman-Ford negative-cycle scan over the residual graph, run from a
  // virtual super source (all distances start at zero).
  struct RArc {
    int from, to;
    std::int64_t cost;
  };
  std::vector<RArc> rarcs;
  rarcs.reserve(2 * net.arcs.size());
  for (size_t i = 0; i < net.arcs.size(); ++i) {
    const Arc& a = net.arcs[i];
    if (flow.arc_flow[i] < a.capacity) rarcs.push_back({a.from, a.to, a.cost});
    if (flow.arc_flow[i] > 0) rarcs.push_back({a.to, a.from, -a.cost});
  }
  std::vector<std::int64_t> dist(net.node_count, 0);
  for (int round = 0; round < net.node_count; ++round) {
    bool changed = false;
    for (const RArc& a : rarcs) {
      if (dist[a.from] + a.cost < dist[a.to]) {
        dist[a.to] = dist[a.from] + a.cost;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace briberon
