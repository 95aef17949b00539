#include "briberon/testkit.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace briberon::testkit {

namespace {

void check_range(const IntRange& r, const char* name, std::int64_t lo_min,
                 std::int64_t hi_max) {
  if (r.lo > r.hi)
    throw std::invalid_argument(std::string("generator range for ") + name + " is empty");
  if (r.lo < lo_min)
    throw std::invalid_argument(std::string("generator range for ") + name + " is too low");
  if (r.hi > hi_max)
    throw std::invalid_argument(std::string("generator range for ") + name +
                                " exceeds the desk-scale cap");
}

std::vector<int> random_ranking(SplitMix64& rng, int m) {
  std::vector<int> arr(m);
  std::iota(arr.begin(), arr.end(), 0);
  for (int i = m - 1; i >= 1; --i) {
    const auto j = static_cast<int>(rng.bounded(0, i));
    std::swap(arr[i], arr[j]);
  }
  return arr;
}

std::vector<PriceTable> random_prices(SplitMix64& rng, int n, int slots,
                                      const IntRange& price) {
  std::vector<PriceTable> tables;
  tables.reserve(n);
  for (int v = 0; v < n; ++v) {
    PriceTable t = PriceTable::zeros(slots);
    for (int i = 0; i < slots; ++i) {
      for (int j = 0; j < slots; ++j) {
        if (i != j) t.at(i, j) = rng.bounded(price.lo, price.hi);
      }
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

CandidateSet default_labels(int m) {
  CandidateSet cs;
  for (int c = 1; c <= m; ++c) cs.names.push_back("c" + std::to_string(c));
  return cs;
}

Ballot random_points_ballot(SplitMix64& rng, int m, std::int64_t k, std::int64_t b,
                            bool free_form) {
  Ballot ballot;
  ballot.points.assign(m, 0);
  for (std::int64_t point = 0; point < k; ++point) {
    std::vector<int> open;
    for (int c = 0; c < m; ++c)
      if (ballot.points[c] < b) open.push_back(c);
    if (free_form) open.push_back(m);  // the unassigned pool never fills up
    const int slot = open[rng.bounded(0, static_cast<std::int64_t>(open.size()) - 1)];
    if (slot == m)
      ++ballot.unassigned;
    else
      ++ballot.points[slot];
  }
  return ballot;
}

}  // namespace

KBBriberyInstance gen_kb(const GenParams& params) {
  check_range(params.m, "m", 1, 5);
  check_range(params.n, "n", 0, 8);
  check_range(params.k, "k", 1, 4);
  check_range(params.b, "b", 1, 3);
  check_range(params.price, "price", 0, std::numeric_limits<std::int64_t>::max());

  SplitMix64 rng(params.seed);
  KBBriberyInstance inst;

  switch (params.encoder) {
    case BallotEncoder::none: {
      const bool some_valid =
          params.free_form || params.k.lo <= params.m.hi * params.b.hi;
      if (!some_valid)
        throw std::invalid_argument("no valid (m, k, b) combination in the requested ranges");
      std::int64_t m = 0, k = 0, b = 0;
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 10000)
          throw std::invalid_argument("could not draw a valid (m, k, b) combination");
        m = rng.bounded(params.m.lo, params.m.hi);
        k = rng.bounded(params.k.lo, params.k.hi);
        b = rng.bounded(params.b.lo, params.b.hi);
        if (params.free_form || k <= m * b) break;
      }
      const auto n = rng.bounded(params.n.lo, params.n.hi);
      const auto p = rng.bounded(0, m - 1);
      std::vector<Ballot> ballots;
      for (std::int64_t v = 0; v < n; ++v)
        ballots.push_back(random_points_ballot(rng, static_cast<int>(m), k, b,
                                               params.free_form));
      if (params.free_form) {
        inst.election = make_election(default_labels(static_cast<int>(m)), k, b, true,
                                      std::move(ballots));
      } else {
        std::vector<std::vector<std::int64_t>> vectors;
        for (const auto& ballot : ballots) vectors.push_back(ballot.points);
        inst.election = encode_utility(default_labels(static_cast<int>(m)), k, b, vectors);
      }
      inst.preferred = static_cast<int>(p);
      break;
    }
    case BallotEncoder::plurality:
    case BallotEncoder::veto: {
      const bool veto = params.encoder == BallotEncoder::veto;
      if (veto && params.m.lo < 2)
        throw std::invalid_argument("veto needs at least two candidates");
      const auto m = rng.bounded(params.m.lo, params.m.hi);
      const auto n = rng.bounded(params.n.lo, params.n.hi);
      const auto p = rng.bounded(0, m - 1);
      std::vector<std::vector<int>> rankings;
      for (std::int64_t v = 0; v < n; ++v)
        rankings.push_back(random_ranking(rng, static_cast<int>(m)));
      inst.election = veto ? encode_veto(default_labels(static_cast<int>(m)), rankings)
                           : encode_plurality(default_labels(static_cast<int>(m)), rankings);
      inst.preferred = static_cast<int>(p);
      break;
    }
    case BallotEncoder::approval: {
      const auto m = rng.bounded(params.m.lo, params.m.hi);
      const auto n = rng.bounded(params.n.lo, params.n.hi);
      const auto p = rng.bounded(0, m - 1);
      std::vector<std::vector<int>> sets;
      for (std::int64_t v = 0; v < n; ++v) {
        std::vector<int> approved;
        for (int c = 0; c < m; ++c)
          if (rng.bounded(0, 1) == 1) approved.push_back(c);
        sets.push_back(std::move(approved));
      }
      inst.election = encode_approval(default_labels(static_cast<int>(m)), sets);
      inst.preferred = static_cast<int>(p);
      break;
    }
    case BallotEncoder::t_approval: {
      const std::int64_t t = params.t_approval_t;
      if (params.m.lo < t)
        throw std::invalid_argument("t-approval needs at least t candidates");
      const auto m = rng.bounded(params.m.lo, params.m.hi);
      const auto n = rng.bounded(params.n.lo, params.n.hi);
      const auto p = rng.bounded(0, m - 1);
      std::vector<std::vector<int>> sets;
      for (std::int64_t v = 0; v < n; ++v) {
        auto order = random_ranking(rng, static_cast<int>(m));
        order.resize(t);
        std::sort(order.begin(), order.end());
        sets.push_back(std::move(order));
      }
      inst.election = encode_t_approval(default_labels(static_cast<int>(m)), t, sets);
      inst.preferred = static_cast<int>(p);
      break;
    }
  }

  const int slots = inst.slot_count();
  inst.prices = random_prices(rng, inst.election.voter_count(), slots, params.price);
  return inst;
}

WeightedPluralityInstance gen_plurality(const GenParams& params) {
  check_range(params.m, "m", 1, 64);
  check_range(params.n, "n", 1, 12);
  check_range(params.weight, "weight", 1, std::numeric_limits<std::int64_t>::max());
  check_range(params.price, "price", 0, std::numeric_limits<std::int64_t>::max());
  SplitMix64 rng(params.seed);
  WeightedPluralityInstance inst;
  inst.m = static_cast<int>(rng.bounded(params.m.lo, params.m.hi));
  const auto n = rng.bounded(params.n.lo, params.n.hi);
  inst.preferred = static_cast<int>(rng.bounded(0, inst.m - 1));
  for (std::int64_t v = 0; v < n; ++v) {
    WeightedPluralityVoter voter;
    voter.weight = rng.bounded(params.weight.lo, params.weight.hi);
    voter.vote = static_cast<int>(rng.bounded(0, inst.m - 1));
    voter.price = rng.bounded(params.price.lo, params.price.hi);
    inst.voters.push_back(voter);
  }
  return inst;
}

ApprovalPrimeInstance gen_approval(const GenParams& params) {
  check_range(params.m, "m", 1, 64);
  check_range(params.n, "n", 0, 20);
  if (params.n.hi * params.m.hi > 20)
    throw std::invalid_argument("approval generator: n*m must stay within 20 useful flips");
  SplitMix64 rng(params.seed);
  ApprovalPrimeInstance inst;
  inst.m = static_cast<int>(rng.bounded(params.m.lo, params.m.hi));
  const auto n = rng.bounded(params.n.lo, params.n.hi);
  inst.preferred = static_cast<int>(rng.bounded(0, inst.m - 1));
  for (std::int64_t v = 0; v < n; ++v) {
    ApprovalVoter voter;
    voter.weight = rng.bounded(params.weight.lo, params.weight.hi);
    for (int c = 0; c < inst.m; ++c)
      voter.approves.push_back(static_cast<std::uint8_t>(rng.bounded(0, 1)));
    for (int c = 0; c < inst.m; ++c)
      voter.flip_prices.push_back(rng.bounded(params.price.lo, params.price.hi));
    inst.voters.push_back(std::move(voter));
  }
  return inst;
}

NegativeBriberyInstance gen_negative(const GenParams& params) {
  check_range(params.m, "m", 1, 4);
  check_range(params.n, "n", 1, 6);
  SplitMix64 rng(params.seed);
  NegativeBriberyInstance inst;
  inst.m = static_cast<int>(rng.bounded(params.m.lo, params.m.hi));
  const auto n = rng.bounded(params.n.lo, params.n.hi);
  inst.preferred = static_cast<int>(rng.bounded(0, inst.m - 1));
  for (std::int64_t v = 0; v < n; ++v) {
    NegativeVoter voter;
    voter.weight = rng.bounded(params.weight.lo, params.weight.hi);
    voter.vote = static_cast<int>(rng.bounded(0, inst.m - 1));
    inst.voters.push_back(voter);
  }
  inst.budget = rng.bounded(0, n);
  return inst;
}

Weighted11Instance gen_weighted11(const GenParams& params) {
  check_range(params.m, "m", 1, 4);
  check_range(params.n, "n", 1, 6);
  SplitMix64 rng(params.seed);
  Weighted11Instance inst;
  inst.m = static_cast<int>(rng.bounded(params.m.lo, params.m.hi));
  const auto n = rng.bounded(params.n.lo, params.n.hi);
  inst.preferred = static_cast<int>(rng.bounded(0, inst.m - 1));
  for (std::int64_t v = 0; v < n; ++v) {
    Weighted11Voter voter;
    voter.weight = rng.bounded(params.weight.lo, params.weight.hi);
    voter.vote = static_cast<int>(rng.bounded(0, inst.m - 1));
    voter.prices = PriceTable::zeros(inst.m);
    for (int i = 0; i < inst.m; ++i)
      for (int j = 0; j < inst.m; ++j)
        if (i != j) voter.prices.at(i, j) = rng.bounded(params.price.lo, params.price.hi);
    inst.voters.push_back(std::move(voter));
  }
  inst.budget = rng.bounded(0, checked_mul(n, std::max<std::int64_t>(params.price.hi, 1)));
  return inst;
}

namespace {

// Everything a voter can turn their ballot into, with the cheapest way to get
// there. result has slot_count entries (unassigned pool last in free-form).
struct VoterOption {
  std::vector<std::int64_t> result;
  std::int64_t cost = 0;
  std::vector<Move> moves;
};

std::vector<VoterOption> enumerate_voter_options(const KBBriberyInstance& inst, int voter) {
  const KBElection& e = inst.election;
  const int m = e.candidate_count();
  const int slots = inst.slot_count();
  const PriceTable& price = inst.prices[voter];

  std::vector<int> sources;  // one slot index per point of this voter
  for (int c = 0; c < m; ++c)
    for (std::int64_t i = 0; i < e.ballots[voter].points[c]; ++i) sources.push_back(c);
  for (std::int64_t i = 0; i < e.ballots[voter].unassigned; ++i) sources.push_back(m);

  std::map<std::vector<std::int64_t>, VoterOption> best;
  std::vector<int> dest(sources.size(), 0);
  const auto total = sources.size();
  // Odometer over all destination functions; each point independently picks
  // where it ends up.
  while (true) {
    std::vector<std::int64_t> result(slots, 0);
    for (size_t i = 0; i < total; ++i) ++result[dest[i]];
    bool ok = true;
    for (int c = 0; c < m; ++c)
      if (result[c] > e.b) ok = false;
    if (ok) {
      std::int64_t cost = 0;
      std::map<std::pair<int, int>, std::int64_t> counts;
      for (size_t i = 0; i < total; ++i) {
        if (sources[i] != dest[i]) {
          cost = checked_add(cost, price.at(sources[i], dest[i]));
          ++counts[{sources[i], dest[i]}];
        }
      }
      auto it = best.find(result);
      if (it == best.end() || cost < it->second.cost) {
        VoterOption opt;
        opt.result = result;
        opt.cost = cost;
        for (const auto& [pair, count] : counts)
          opt.moves.push_back({voter, pair.first, pair.second, count});
        best[result] = std::move(opt);
      }
    }
    size_t i = 0;
    for (; i < total; ++i) {
      if (++dest[i] < slots) break;
      dest[i] = 0;
    }
    if (i == total) break;
  }

  std::vector<VoterOption> out;
  out.reserve(best.size());
  for (auto& [key, opt] : best) out.push_back(std::move(opt));
  return out;
}

}  // namespace

BruteKbResult brute_kb(const KBBriberyInstance& inst) {
  require_valid(inst);
  const KBElection& e = inst.election;
  const int m = e.candidate_count();
  const int n = e.voter_count();
  if (m > 5 || n > 8 || e.k > 4 || e.b > 3)
    throw std::invalid_argument("brute_kb: instance exceeds the desk-scale caps");

  using Key = std::vector<std::int64_t>;  // aggregate candidate scores
  struct State {
    std::int64_t cost = 0;
    Key prev;
    int option = -1;
  };
  std::vector<std::vector<VoterOption>> options;
  options.reserve(n);
  for (int v = 0; v < n; ++v) options.push_back(enumerate_voter_options(inst, v));

  std::vector<std::map<Key, State>> layers(n + 1);
  layers[0][Key(m, 0)] = State{};
  for (int v = 0; v < n; ++v) {
    for (const auto& [key, state] : layers[v]) {
      for (int oi = 0; oi < static_cast<int>(options[v].size()); ++oi) {
        const VoterOption& opt = options[v][oi];
        Key next = key;
        for (int c = 0; c < m; ++c) next[c] += opt.result[c];
        const std::int64_t cost = checked_add(state.cost, opt.cost);
        auto it = layers[v + 1].find(next);
        if (it == layers[v + 1].end() || cost < it->second.cost) {
          layers[v + 1][next] = State{cost, key, oi};
        }
      }
    }
  }

  const Key* best_key = nullptr;
  std::int64_t best_cost = 0;
  for (const auto& [key, state] : layers[n]) {
    const std::int64_t top = key.empty() ? 0 : *std::max_element(key.begin(), key.end());
    if (key[inst.preferred] != top) continue;
    if (best_key == nullptr || state.cost < best_cost) {
      best_key = &key;
      best_cost = state.cost;
    }
  }
  if (best_key == nullptr)
    throw std::logic_error("brute_kb: no winning state found for a valid instance");

  BruteKbResult out;
  out.cost = best_cost;
  Key key = *best_key;
  for (int v = n - 1; v >= 0; --v) {
    const State& state = layers[v + 1].at(key);
    const VoterOption& opt = options[v][state.option];
    out.plan.moves.insert(out.plan.moves.begin(), opt.moves.begin(), opt.moves.end());
    out.plan.total_price = checked_add(out.plan.total_price, opt.cost);
    key = state.prev;
  }
  return out;
}

BrutePluralityResult brute_weighted_plurality(const WeightedPluralityInstance& inst,
                                              bool arbitrary_revotes) {
  require_valid(inst);
  const int n = inst.voter_count();
  if (n > (arbitrary_revotes ? 8 : 12))
    throw std::invalid_argument("brute_weighted_plurality: too many voters for enumeration");

  BrutePluralityResult best;
  best.cost = -1;
  if (!arbitrary_revotes) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::int64_t cost = 0;
      ScoreVector s = plurality_scores(inst);
      for (int v = 0; v < n; ++v) {
        if (mask & (1u << v)) {
          cost = checked_add(cost, inst.voters[v].price);
          s.scores[inst.voters[v].vote] -= inst.voters[v].weight;
          s.scores[inst.preferred] += inst.voters[v].weight;
        }
      }
      const auto w = winners(s);
      if (!std::binary_search(w.begin(), w.end(), inst.preferred)) continue;
      if (best.cost < 0 || cost < best.cost) {
        best.cost = cost;
        best.bribed.clear();
        for (int v = 0; v < n; ++v)
          if (mask & (1u << v)) best.bribed.push_back(v);
      }
    }
    return best;
  }

  // Arbitrary revote targets: walk voter by voter.
  ScoreVector s = plurality_scores(inst);
  std::vector<int> bribed;
  auto recurse = [&](auto&& self, int v, std::int64_t cost) -> void {
    if (best.cost >= 0 && cost >= best.cost) return;
    if (v == n) {
      const auto w = winners(s);
      if (std::binary_search(w.begin(), w.end(), inst.preferred)) {
        best.cost = cost;
        best.bribed = bribed;
      }
      return;
    }
    self(self, v + 1, cost);
    bribed.push_back(v);
    for (int target = 0; target < inst.m; ++target) {
      s.scores[inst.voters[v].vote] -= inst.voters[v].weight;
      s.scores[target] += inst.voters[v].weight;
      self(self, v + 1, checked_add(cost, inst.voters[v].price));
      s.scores[target] -= inst.voters[v].weight;
      s.scores[inst.voters[v].vote] += inst.voters[v].weight;
    }
    bribed.pop_back();
  };
  recurse(recurse, 0, 0);
  return best;
}

BruteApprovalResult brute_approval_prime(const ApprovalPrimeInstance& inst) {
  require_valid(inst);
  std::vector<Flip> useful;
  for (int v = 0; v < inst.voter_count(); ++v) {
    for (int c = 0; c < inst.m; ++c) {
      const bool approves = inst.voters[v].approves[c] != 0;
      if ((c == inst.preferred && !approves) || (c != inst.preferred && approves))
        useful.push_back({v, c});
    }
  }
  if (useful.size() > 20)
    throw std::invalid_argument("brute_approval_prime: too many useful flips");

  BruteApprovalResult best;
  best.cost = -1;
  ScoreVector s = approval_scores(inst);
  std::vector<Flip> taken;
  auto feasible = [&]() {
    const auto w = winners(s);
    return std::binary_search(w.begin(), w.end(), inst.preferred);
  };
  auto recurse = [&](auto&& self, size_t idx, std::int64_t cost) -> void {
    if (best.cost >= 0 && cost >= best.cost) return;
    if (feasible()) {  // extra flips only add cost
      best.cost = cost;
      best.flips = taken;
      return;
    }
    if (idx == useful.size()) return;
    const Flip f = useful[idx];
    const std::int64_t w = inst.voters[f.voter].weight;
    const std::int64_t delta = (f.candidate == inst.preferred) ? w : -w;
    taken.push_back(f);
    s.scores[f.candidate] += delta;
    self(self, idx + 1, checked_add(cost, inst.voters[f.voter].flip_prices[f.candidate]));
    s.scores[f.candidate] -= delta;
    taken.pop_back();
    self(self, idx + 1, cost);
  };
  recurse(recurse, 0, 0);
  if (best.cost < 0)
    throw std::logic_error("brute_approval_prime: no feasible flip set found");
  return best;
}

BruteDecision brute_negative(const NegativeBriberyInstance& inst) {
  require_valid(inst);
  const int n = inst.voter_count();
  if (n > 6 || inst.m > 4)
    throw std::invalid_argument("brute_negative: instance exceeds the desk-scale caps");

  ScoreVector base;
  base.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    base.scores[voter.vote] = checked_add(base.scores[voter.vote], voter.weight);

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > inst.budget) continue;
    std::vector<int> picked;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) picked.push_back(v);

    ScoreVector s = base;
    std::vector<std::pair<int, int>> revotes;
    auto assign = [&](auto&& self, size_t idx) -> bool {
      if (idx == picked.size()) {
        const auto w = winners(s);
        return std::binary_search(w.begin(), w.end(), inst.preferred);
      }
      const int v = picked[idx];
      for (int target = 0; target < inst.m; ++target) {
        if (target == inst.preferred) continue;
        s.scores[inst.voters[v].vote] -= inst.voters[v].weight;
        s.scores[target] += inst.voters[v].weight;
        revotes.push_back({v, target});
        if (self(self, idx + 1)) return true;
        revotes.pop_back();
        s.scores[target] -= inst.voters[v].weight;
        s.scores[inst.voters[v].vote] += inst.voters[v].weight;
      }
      return false;
    };
    if (assign(assign, 0)) return {true, revotes};
  }
  return {false, {}};
}

BruteDecision brute_11_weighted(const Weighted11Instance& inst) {
  require_valid(inst);
  const int n = inst.voter_count();
  if (n > 6 || inst.m > 4)
    throw std::invalid_argument("brute_11_weighted: instance exceeds the desk-scale caps");

  ScoreVector s;
  s.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    s.scores[voter.vote] = checked_add(s.scores[voter.vote], voter.weight);

  std::vector<std::pair<int, int>> revotes;
  auto recurse = [&](auto&& self, int v, std::int64_t cost) -> bool {
    if (cost > inst.budget) return false;
    if (v == n) {
      const auto w = winners(s);
      return std::binary_search(w.begin(), w.end(), inst.preferred);
    }
    const auto& voter = inst.voters[v];
    for (int target = 0; target < inst.m; ++target) {
      const std::int64_t price = voter.prices.at(voter.vote, target);
      s.scores[voter.vote] -= voter.weight;
      s.scores[target] += voter.weight;
      if (target != voter.vote) revotes.push_back({v, target});
      if (self(self, v + 1, checked_add(cost, price))) return true;
      if (target != voter.vote) revotes.pop_back();
      s.scores[target] -= voter.weight;
      s.scores[voter.vote] += voter.weight;
    }
    return false;
  };
  if (recurse(recurse, 0, 0)) return {true, revotes};
  return {false, {}};
}

}  // namespace briberon::testkit
