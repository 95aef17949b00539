#include "briberon/weighted_bribery.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace briberon {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t add_sat(std::int64_t a, std::int64_t b) {
  const auto sum = static_cast<__int128>(a) + b;
  return sum >= kInf ? kInf : static_cast<std::int64_t>(sum);
}

bool preferred_wins(const ScoreVector& s, int preferred) {
  const auto w = winners(s);
  return std::binary_search(w.begin(), w.end(), preferred);
}

}  // namespace

void require_valid(const WeightedPluralityInstance& inst) {
  if (inst.m < 1) throw std::invalid_argument("election needs at least one candidate");
  if (inst.preferred < 0 || inst.preferred >= inst.m)
    throw std::invalid_argument("preferred candidate index out of range");
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    if (voter.weight < 1)
      throw std::invalid_argument("voter " + std::to_string(v) + ": weight must be positive");
    if (voter.vote < 0 || voter.vote >= inst.m)
      throw std::invalid_argument("voter " + std::to_string(v) + ": vote out of range");
    if (voter.price < 0)
      throw std::invalid_argument("voter " + std::to_string(v) + ": price is negative");
  }
  if (inst.budget && *inst.budget < 0) throw std::invalid_argument("budget is negative");
}

void require_valid(const ApprovalPrimeInstance& inst) {
  if (inst.m < 1) throw std::invalid_argument("election needs at least one candidate");
  if (inst.preferred < 0 || inst.preferred >= inst.m)
    throw std::invalid_argument("preferred candidate index out of range");
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    if (voter.weight < 1)
      throw std::invalid_argument("voter " + std::to_string(v) + ": weight must be positive");
    if (voter.approves.size() != static_cast<size_t>(inst.m))
      throw std::invalid_argument("voter " + std::to_string(v) +
                                  ": approval bits differ from candidate count");
    for (const auto bit : voter.approves)
      if (bit > 1)
        throw std::invalid_argument("voter " + std::to_string(v) +
                                    ": approval bits must be 0 or 1");
    if (voter.flip_prices.size() != static_cast<size_t>(inst.m))
      throw std::invalid_argument("voter " + std::to_string(v) +
                                  ": flip prices differ from candidate count");
    for (const auto price : voter.flip_prices)
      if (price < 0)
        throw std::invalid_argument("voter " + std::to_string(v) + ": price is negative");
  }
  if (inst.budget && *inst.budget < 0) throw std::invalid_argument("budget is negative");
}

void require_valid(const NegativeBriberyInstance& inst) {
  if (inst.m < 1) throw std::invalid_argument("election needs at least one candidate");
  if (inst.preferred < 0 || inst.preferred >= inst.m)
    throw std::invalid_argument("preferred candidate index out of range");
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    if (voter.weight < 1)
      throw std::invalid_argument("voter " + std::to_string(v) + ": weight must be positive");
    if (voter.vote < 0 || voter.vote >= inst.m)
      throw std::invalid_argument("voter " + std::to_string(v) + ": vote out of range");
  }
  if (inst.budget < 0) throw std::invalid_argument("budget is negative");
}

void require_valid(const Weighted11Instance& inst) {
  if (inst.m < 1) throw std::invalid_argument("election needs at least one candidate");
  if (inst.preferred < 0 || inst.preferred >= inst.m)
    throw std::invalid_argument("preferred candidate index out of range");
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    if (voter.weight < 1)
      throw std::invalid_argument("voter " + std::to_string(v) + ": weight must be positive");
    if (voter.vote < 0 || voter.vote >= inst.m)
      throw std::invalid_argument("voter " + std::to_string(v) + ": vote out of range");
    if (voter.prices.slot_count != inst.m ||
        voter.prices.entries.size() != static_cast<size_t>(inst.m) * inst.m)
      throw std::invalid_argument("voter " + std::to_string(v) +
                                  ": price table does not match the candidate count");
    for (int i = 0; i < inst.m; ++i) {
      if (voter.prices.at(i, i) != 0)
        throw std::invalid_argument("voter " + std::to_string(v) +
                                    ": price table diagonal must be zero");
      for (int j = 0; j < inst.m; ++j)
        if (voter.prices.at(i, j) < 0)
          throw std::invalid_argument("voter " + std::to_string(v) +
                                      ": price table entry is negative");
    }
  }
  if (inst.budget < 0) throw std::invalid_argument("budget is negative");
}

void require_valid(const Eps& eps) {
  if (eps.num < 1 || eps.den < 1 || eps.num >= eps.den)
    throw std::invalid_argument("epsilon must lie strictly between zero and one");
}

ScoreVector plurality_scores(const WeightedPluralityInstance& inst,
                             const std::vector<int>* bribed) {
  ScoreVector s;
  s.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    s.scores[voter.vote] = checked_add(s.scores[voter.vote], voter.weight);
  if (bribed) {
    for (const int v : *bribed) {
      if (v < 0 || v >= inst.voter_count())
        throw std::invalid_argument("bribed voter index out of range");
      s.scores[inst.voters[v].vote] -= inst.voters[v].weight;
      s.scores[inst.preferred] = checked_add(s.scores[inst.preferred], inst.voters[v].weight);
    }
  }
  return s;
}

ScoreVector approval_scores(const ApprovalPrimeInstance& inst,
                            const std::vector<Flip>* flips) {
  ScoreVector s;
  s.scores.assign(inst.m, 0);
  for (const auto& voter : inst.voters)
    for (int c = 0; c < inst.m; ++c)
      if (voter.approves[c]) s.scores[c] = checked_add(s.scores[c], voter.weight);
  if (flips) {
    for (const Flip& f : *flips) {
      if (f.voter < 0 || f.voter >= inst.voter_count() || f.candidate < 0 ||
          f.candidate >= inst.m)
        throw std::invalid_argument("flip index out of range");
      const auto w = inst.voters[f.voter].weight;
      if (inst.voters[f.voter].approves[f.candidate])
        s.scores[f.candidate] -= w;
      else
        s.scores[f.candidate] = checked_add(s.scores[f.candidate], w);
    }
  }
  return s;
}

namespace {

struct BribeCandidate {
  int voter = 0;
  std::int64_t weight = 0;
  std::int64_t price = 0;
  int vote = 0;
};

struct PlurSearch {
  const WeightedPluralityInstance* inst = nullptr;
  std::vector<BribeCandidate> order;
  std::vector<std::int64_t> scores;
  std::vector<int> chosen;
  std::vector<int> best_set;
  std::int64_t best_cost = 0;
  bool has_best = false;
  // removal_cost[c][i][x]: cheapest subset of order[i..) whose contribution
  // against rival c is at least x; contribution is 2w for c's own voters and
  // w otherwise. Empty when the weight range is too wide to index.
  std::vector<std::vector<std::vector<std::int64_t>>> removal_cost;

  std::int64_t max_deficit() const {
    std::int64_t d = 0;
    for (int c = 0; c < inst->m; ++c)
      if (c != inst->preferred)
        d = std::max(d, scores[c] - scores[inst->preferred]);
    return d;
  }

  // Fractional relaxation: every remaining voter may close up to twice their
  // weight of the worst gap.
  std::int64_t relax_bound(size_t i, std::int64_t deficit) const {
    std::int64_t lb = 0;
    for (size_t j = i; j < order.size() && deficit > 0; ++j) {
      const auto gain = 2 * order[j].weight;
      if (gain >= deficit) {
        lb = add_sat(lb, static_cast<std::int64_t>(
                             static_cast<__int128>(order[j].price) * deficit / gain));
        return lb;
      }
      lb = add_sat(lb, order[j].price);
      deficit -= gain;
    }
    return deficit > 0 ? kInf : lb;
  }

  std::int64_t table_bound(size_t i) const {
    if (removal_cost.empty()) return 0;
    std::int64_t lb = 0;
    for (int c = 0; c < inst->m; ++c) {
      if (c == inst->preferred) continue;
      const auto deficit = scores[c] - scores[inst->preferred];
      if (deficit <= 0) continue;
      const auto& row = removal_cost[c][i];
      if (deficit >= static_cast<std::int64_t>(row.size())) return kInf;
      lb = std::max(lb, row[deficit]);
    }
    return lb;
  }

  void run(size_t i, std::int64_t cost) {
    if (has_best && cost >= best_cost) return;
    if (max_deficit() <= 0) {
      best_cost = cost;
      best_set = chosen;
      has_best = true;
      return;
    }
    if (i == order.size()) return;
    const auto lb = std::max(relax_bound(i, max_deficit()), table_bound(i));
    if (lb >= kInf) return;
    if (has_best && add_sat(cost, lb) >= best_cost) return;

    const auto& cand = order[i];
    scores[cand.vote] -= cand.weight;
    scores[inst->preferred] += cand.weight;
    chosen.push_back(static_cast<int>(i));
    run(i + 1, checked_add(cost, cand.price));
    chosen.pop_back();
    scores[inst->preferred] -= cand.weight;
    scores[cand.vote] += cand.weight;

    run(i + 1, cost);
  }
};

}  // namespace

PluralityResult solve_plurality_exact(const WeightedPluralityInstance& inst) {
  require_valid(inst);

  PlurSearch search;
  search.inst = &inst;
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    if (voter.vote == inst.preferred) continue;  // bribing them changes nothing
    search.order.push_back({v, voter.weight, voter.price, voter.vote});
  }
  std::sort(search.order.begin(), search.order.end(),
            [](const BribeCandidate& a, const BribeCandidate& b) {
              const auto lhs = static_cast<__int128>(a.price) * b.weight;
              const auto rhs = static_cast<__int128>(b.price) * a.weight;
              if (lhs != rhs) return lhs < rhs;
              return a.voter < b.voter;
            });

  std::int64_t total_weight = 0;
  for (const auto& cand : search.order) total_weight = add_sat(total_weight, cand.weight);
  if (2 * total_weight <= 4096 && !search.order.empty()) {
    const auto r = search.order.size();
    const auto cap = static_cast<size_t>(2 * total_weight);
    search.removal_cost.assign(
        inst.m, std::vector<std::vector<std::int64_t>>(
                    r + 1, std::vector<std::int64_t>(cap + 1, kInf)));
    for (int c = 0; c < inst.m; ++c) {
      if (c == inst.preferred) continue;
      auto& table = search.removal_cost[c];
      table[r][0] = 0;
      for (size_t i = r; i-- > 0;) {
        const auto contrib =
            search.order[i].vote == c ? 2 * search.order[i].weight : search.order[i].weight;
        for (size_t x = 0; x <= cap; ++x) {
          const auto skip = table[i + 1][x];
          const auto rest = x > static_cast<size_t>(contrib) ? x - contrib : 0;
          const auto take = add_sat(search.order[i].price, table[i + 1][rest]);
          table[i][x] = std::min(skip, take);
        }
      }
    }
  }

  const auto base = plurality_scores(inst);
  search.scores = base.scores;
  search.run(0, 0);
  if (!search.has_best)
    throw std::logic_error("plurality search missed the all-bribed fallback");

  PluralityResult result;
  result.cost = search.best_cost;
  for (const int idx : search.best_set) result.bribed.push_back(search.order[idx].voter);
  std::sort(result.bribed.begin(), result.bribed.end());
  return result;
}

namespace {

struct FlipItem {
  int voter = 0;
  std::int64_t weight = 0;
  std::int64_t price = 0;
};

// dp[i][g]: cheapest subset of the first i items with total weight exactly g.
std::vector<std::vector<std::int64_t>> exact_weight_dp(const std::vector<FlipItem>& items,
                                                       std::int64_t cap) {
  std::vector<std::vector<std::int64_t>> dp(
      items.size() + 1, std::vector<std::int64_t>(static_cast<size_t>(cap) + 1, kInf));
  dp[0][0] = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto w = static_cast<size_t>(items[i].weight);
    for (size_t g = 0; g <= static_cast<size_t>(cap); ++g) {
      dp[i + 1][g] = dp[i][g];
      if (g >= w) dp[i + 1][g] = std::min(dp[i + 1][g], add_sat(dp[i][g - w], items[i].price));
    }
  }
  return dp;
}

std::vector<int> reconstruct(const std::vector<std::vector<std::int64_t>>& dp,
                             const std::vector<FlipItem>& items, std::int64_t target) {
  std::vector<int> picked;
  auto g = static_cast<size_t>(target);
  for (size_t i = items.size(); i-- > 0;) {
    if (dp[i + 1][g] != dp[i][g]) {
      picked.push_back(static_cast<int>(i));
      g -= static_cast<size_t>(items[i].weight);
    }
  }
  std::reverse(picked.begin(), picked.end());
  return picked;
}

// Suffix argmin: for each g the cheapest dp row entry with weight >= g and the
// weight attaining it.
void suffix_best(const std::vector<std::int64_t>& last_row,
                 std::vector<std::int64_t>& value, std::vector<std::int64_t>& arg) {
  const auto size = last_row.size();
  value.assign(size, kInf);
  arg.assign(size, -1);
  std::int64_t best = kInf, best_arg = -1;
  for (size_t g = size; g-- > 0;) {
    if (last_row[g] < best) {
      best = last_row[g];
      best_arg = static_cast<std::int64_t>(g);
    }
    value[g] = best;
    arg[g] = best_arg;
  }
}

ApprovalResult approval_by_search(const ApprovalPrimeInstance& inst,
                                  const std::vector<Flip>& useful) {
  ApprovalResult best;
  best.cost = -1;
  ScoreVector s = approval_scores(inst);
  std::vector<Flip> taken;
  auto recurse = [&](auto&& self, size_t idx, std::int64_t cost) -> void {
    if (best.cost >= 0 && cost >= best.cost) return;
    if (preferred_wins(s, inst.preferred)) {
      best.cost = cost;
      best.flips = taken;
      return;
    }
    if (idx == useful.size()) return;
    const Flip f = useful[idx];
    const auto w = inst.voters[f.voter].weight;
    const auto delta = f.candidate == inst.preferred ? w : -w;
    taken.push_back(f);
    s.scores[f.candidate] += delta;
    self(self, idx + 1, checked_add(cost, inst.voters[f.voter].flip_prices[f.candidate]));
    s.scores[f.candidate] -= delta;
    taken.pop_back();
    self(self, idx + 1, cost);
  };
  recurse(recurse, 0, 0);
  if (best.cost < 0)
    throw std::logic_error("approval search missed the all-flipped fallback");
  std::sort(best.flips.begin(), best.flips.end());
  return best;
}

}  // namespace

ApprovalResult solve_approval_prime_exact(const ApprovalPrimeInstance& inst) {
  require_valid(inst);

  std::vector<FlipItem> adds;
  std::vector<std::vector<FlipItem>> removals(inst.m);
  std::vector<Flip> useful;
  for (int v = 0; v < inst.voter_count(); ++v) {
    const auto& voter = inst.voters[v];
    for (int c = 0; c < inst.m; ++c) {
      const bool approves = voter.approves[c] != 0;
      if (c == inst.preferred && !approves) {
        adds.push_back({v, voter.weight, voter.flip_prices[c]});
        useful.push_back({v, c});
      } else if (c != inst.preferred && approves) {
        removals[c].push_back({v, voter.weight, voter.flip_prices[c]});
        useful.push_back({v, c});
      }
    }
  }

  std::int64_t gain_cap = 0;
  for (const auto& item : adds) gain_cap = add_sat(gain_cap, item.weight);
  std::int64_t widest = gain_cap;
  for (int c = 0; c < inst.m; ++c) {
    std::int64_t total = 0;
    for (const auto& item : removals[c]) total = add_sat(total, item.weight);
    widest = std::max(widest, total);
  }
  if (widest > 1 << 15) return approval_by_search(inst, useful);

  const auto add_dp = exact_weight_dp(adds, gain_cap);
  std::vector<std::int64_t> add_value, add_arg;
  suffix_best(add_dp.back(), add_value, add_arg);

  std::vector<std::vector<std::vector<std::int64_t>>> rem_dp(inst.m);
  std::vector<std::vector<std::int64_t>> rem_value(inst.m), rem_arg(inst.m);
  std::vector<std::int64_t> rem_cap(inst.m, 0);
  for (int c = 0; c < inst.m; ++c) {
    if (c == inst.preferred) continue;
    for (const auto& item : removals[c]) rem_cap[c] += item.weight;
    rem_dp[c] = exact_weight_dp(removals[c], rem_cap[c]);
    suffix_best(rem_dp[c].back(), rem_value[c], rem_arg[c]);
  }

  const auto base = approval_scores(inst);
  std::int64_t best_total = kInf, best_gain = -1;
  for (std::int64_t g = 0; g <= gain_cap; ++g) {
    if (add_value[g] >= kInf) continue;
    std::int64_t total = add_value[g];
    bool ok = true;
    for (int c = 0; c < inst.m && ok; ++c) {
      if (c == inst.preferred) continue;
      const auto need =
          std::max<std::int64_t>(0, base.scores[c] - base.scores[inst.preferred] - g);
      if (need > rem_cap[c]) {
        ok = false;
        break;
      }
      total = add_sat(total, rem_value[c][need]);
    }
    if (!ok || total >= kInf) continue;
    if (total < best_total) {
      best_total = total;
      best_gain = g;
    }
  }
  if (best_gain < 0)
    throw std::logic_error("approval sweep missed the all-flipped fallback");

  ApprovalResult result;
  result.cost = best_total;
  for (const int idx : reconstruct(add_dp, adds, add_arg[best_gain]))
    result.flips.push_back({adds[idx].voter, inst.preferred});
  for (int c = 0; c < inst.m; ++c) {
    if (c == inst.preferred) continue;
    const auto need = std::max<std::int64_t>(
        0, base.scores[c] - base.scores[inst.preferred] - best_gain);
    for (const int idx : reconstruct(rem_dp[c], removals[c], rem_arg[c][need]))
      result.flips.push_back({removals[c][idx].voter, c});
  }
  std::sort(result.flips.begin(), result.flips.end());
  return result;
}

std::int64_t big_price(const Eps& eps, std::int64_t price_count) {
  require_valid(eps);
  if (price_count < 0) throw std::invalid_argument("price count is negative");
  const auto squared = checked_mul(price_count, price_count);
  const auto numer = checked_mul(checked_add(eps.den, checked_mul(std::int64_t{2}, eps.num)),
                                 squared);
  return checked_add(ceil_div(numer, eps.num), std::int64_t{1});
}

namespace {

std::int64_t scale_one(std::int64_t price, std::int64_t t, const Eps& eps,
                       std::int64_t price_count, std::int64_t big) {
  if (price > t) return big;
  const auto numer = checked_mul(checked_mul(price, price_count), eps.den);
  return ceil_div(numer, checked_mul(t, eps.num));
}

}  // namespace

WeightedPluralityInstance scale_prices(const WeightedPluralityInstance& inst,
                                       std::int64_t t, const Eps& eps) {
  require_valid(inst);
  require_valid(eps);
  if (t < 1) throw std::invalid_argument("price cap must be positive");
  WeightedPluralityInstance out = inst;
  const auto count = static_cast<std::int64_t>(inst.voters.size());
  if (count == 0) return out;
  const auto big = big_price(eps, count);
  for (auto& voter : out.voters) voter.price = scale_one(voter.price, t, eps, count, big);
  return out;
}

ApprovalPrimeInstance scale_prices(const ApprovalPrimeInstance& inst, std::int64_t t,
                                   const Eps& eps) {
  require_valid(inst);
  require_valid(eps);
  if (t < 1) throw std::invalid_argument("price cap must be positive");
  ApprovalPrimeInstance out = inst;
  const auto count = checked_mul(static_cast<std::int64_t>(inst.voters.size()),
                                 static_cast<std::int64_t>(inst.m));
  if (count == 0) return out;
  const auto big = big_price(eps, count);
  for (auto& voter : out.voters)
    for (auto& price : voter.flip_prices) price = scale_one(price, t, eps, count, big);
  return out;
}

PluralityFptasResult fptas(const WeightedPluralityInstance& inst, const Eps& eps,
                           const PluralitySolver& solver) {
  require_valid(inst);
  require_valid(eps);
  const auto count = static_cast<std::int64_t>(inst.voters.size());
  std::int64_t max_price = 0;
  for (const auto& voter : inst.voters) max_price = std::max(max_price, voter.price);
  const auto big = big_price(eps, count);

  PluralityFptasResult result;
  bool kept = false;
  for (std::int64_t t = 1;; t = checked_mul(t, std::int64_t{2})) {
    const auto scaled = scale_prices(inst, t, eps);
    const auto round = solver ? solver(scaled) : solve_plurality_exact(scaled);
    ++result.exact_calls;
    if (count == 0 || round.cost < big) {
      std::int64_t original = 0;
      for (const int v : round.bribed)
        original = checked_add(original, inst.voters[v].price);
      if (!kept || original < result.cost) {
        result.cost = original;
        result.bribed = round.bribed;
        kept = true;
      }
    }
    if (t >= max_price) break;
  }
  if (!kept) throw std::logic_error("no doubling round produced a kept solution");
  return result;
}

ApprovalFptasResult fptas(const ApprovalPrimeInstance& inst, const Eps& eps,
                          const ApprovalSolver& solver) {
  require_valid(inst);
  require_valid(eps);
  const auto count = checked_mul(static_cast<std::int64_t>(inst.voters.size()),
                                 static_cast<std::int64_t>(inst.m));
  std::int64_t max_price = 0;
  for (const auto& voter : inst.voters)
    for (const auto price : voter.flip_prices) max_price = std::max(max_price, price);
  const auto big = big_price(eps, count);

  ApprovalFptasResult result;
  bool kept = false;
  for (std::int64_t t = 1;; t = checked_mul(t, std::int64_t{2})) {
    const auto scaled = scale_prices(inst, t, eps);
    const auto round = solver ? solver(scaled) : solve_approval_prime_exact(scaled);
    ++result.exact_calls;
    if (count == 0 || round.cost < big) {
      std::int64_t original = 0;
      for (const Flip& f : round.flips)
        original = checked_add(original, inst.voters[f.voter].flip_prices[f.candidate]);
      if (!kept || original < result.cost) {
        result.cost = original;
        result.flips = round.flips;
        kept = true;
      }
    }
    if (t >= max_price) break;
  }
  if (!kept) throw std::logic_error("no doubling round produced a kept solution");
  return result;
}

PluralityFptasResult fptas_strict(const WeightedPluralityInstance& inst, const Eps& eps,
                                  const PluralitySolver& solver) {
  require_valid(eps);
  const Eps halved{eps.num, checked_mul(eps.den, std::int64_t{2})};
  return fptas(inst, halved, solver);
}

ApprovalFptasResult fptas_strict(const ApprovalPrimeInstance& inst, const Eps& eps,
                                 const ApprovalSolver& solver) {
  require_valid(eps);
  const Eps halved{eps.num, checked_mul(eps.den, std::int64_t{2})};
  return fptas(inst, halved, solver);
}

Weighted11Instance reduce_negative_bribery(const NegativeBriberyInstance& inst) {
  require_valid(inst);
  Weighted11Instance out;
  out.m = inst.m;
  out.preferred = inst.preferred;
  out.budget = inst.budget;
  const auto blocked = checked_add(inst.budget, std::int64_t{1});
  for (const auto& voter : inst.voters) {
    Weighted11Voter reduced;
    reduced.weight = voter.weight;
    reduced.vote = voter.vote;
    reduced.prices = PriceTable::zeros(inst.m);
    for (int i = 0; i < inst.m; ++i)
      for (int j = 0; j < inst.m; ++j)
        if (i != j) reduced.prices.at(i, j) = j == inst.preferred ? blocked : 1;
    out.voters.push_back(std::move(reduced));
  }
  return out;
}

}  // namespace briberon
