#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "briberon/election.hpp"
#include "briberon/kb_bribery.hpp"

namespace briberon {

// Weighted plurality election under bribery: paying a voter's price makes
// them revote, and revoting for the preferred candidate is never worse than
// any other revote.
struct WeightedPluralityVoter {
  std::int64_t weight = 1;
  int vote = 0;
  std::int64_t price = 0;

  bool operator==(const WeightedPluralityVoter&) const = default;
};

struct WeightedPluralityInstance {
  int m = 0;
  int preferred = 0;
  std::vector<WeightedPluralityVoter> voters;
  std::optional<std::int64_t> budget;

  int voter_count() const { return static_cast<int>(voters.size()); }
  bool operator==(const WeightedPluralityInstance&) const = default;
};

// Weighted approval election where each single approval bit can be flipped
// for a per-(voter, candidate) price.
struct ApprovalVoter {
  std::int64_t weight = 1;
  std::vector<std::uint8_t> approves;      // size m, 0/1
  std::vector<std::int64_t> flip_prices;   // size m

  bool operator==(const ApprovalVoter&) const = default;
};

struct ApprovalPrimeInstance {
  int m = 0;
  int preferred = 0;
  std::vector<ApprovalVoter> voters;
  std::optional<std::int64_t> budget;

  int voter_count() const { return static_cast<int>(voters.size()); }
  bool operator==(const ApprovalPrimeInstance&) const = default;
};

// Decision problem: can up to `budget` voters be revoted, none of them to the
// preferred candidate, so that the preferred candidate still wins?
struct NegativeVoter {
  std::int64_t weight = 1;
  int vote = 0;

  bool operator==(const NegativeVoter&) const = default;
};

struct NegativeBriberyInstance {
  int m = 0;
  int preferred = 0;
  std::vector<NegativeVoter> voters;
  std::int64_t budget = 0;  // counts voters

  int voter_count() const { return static_cast<int>(voters.size()); }
  bool operator==(const NegativeBriberyInstance&) const = default;
};

// Weighted one-point-per-voter election with per-pair move prices and a price
// budget; decision problem.
struct Weighted11Voter {
  std::int64_t weight = 1;
  int vote = 0;
  PriceTable prices;  // m x m, zero diagonal

  bool operator==(const Weighted11Voter&) const = default;
};

struct Weighted11Instance {
  int m = 0;
  int preferred = 0;
  std::vector<Weighted11Voter> voters;
  std::int64_t budget = 0;  // total price budget

  int voter_count() const { return static_cast<int>(voters.size()); }
  bool operator==(const Weighted11Instance&) const = default;
};

// Exact rational approximation parameter, 0 < num/den < 1.
struct Eps {
  std::int64_t num = 1;
  std::int64_t den = 2;

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Eps&) const = default;
};

void require_valid(const WeightedPluralityInstance& inst);
void require_valid(const ApprovalPrimeInstance& inst);
void require_valid(const NegativeBriberyInstance& inst);
void require_valid(const Weighted11Instance& inst);
void require_valid(const Eps& eps);

ScoreVector plurality_scores(const WeightedPluralityInstance& inst,
                             const std::vector<int>* bribed = nullptr);

struct Flip {
  int voter = 0;
  int candidate = 0;

  bool operator==(const Flip&) const = default;
  auto operator<=>(const Flip&) const = default;
};

ScoreVector approval_scores(const ApprovalPrimeInstance& inst,
                            const std::vector<Flip>* flips = nullptr);

struct PluralityResult {
  std::vector<int> bribed;  // voter indices, ascending; all revote to preferred
  std::int64_t cost = 0;
};

// Exact optimum. Bribed voters revote to the preferred candidate and voters
// already voting for them are never bribed; branch and bound over the rest
// with a fractional relaxation bound plus per-rival removal tables.
PluralityResult solve_plurality_exact(const WeightedPluralityInstance& inst);

struct ApprovalResult {
  std::vector<Flip> flips;  // sorted by (voter, candidate)
  std::int64_t cost = 0;
};

// Exact optimum over the useful flips (approve the preferred candidate or
// drop an approval of a rival), found by sweeping the preferred candidate's
// gain against per-rival removal tables.
ApprovalResult solve_approval_prime_exact(const ApprovalPrimeInstance& inst);

// Price rounding used by the approximation scheme: with grain g = t*eps/N
// (N = number of prices in the instance), prices up to t become ceil(q/g) and
// larger prices become the big-price sentinel that no kept solution may reach.
std::int64_t big_price(const Eps& eps, std::int64_t price_count);
WeightedPluralityInstance scale_prices(const WeightedPluralityInstance& inst,
                                       std::int64_t t, const Eps& eps);
ApprovalPrimeInstance scale_prices(const ApprovalPrimeInstance& inst,
                                   std::int64_t t, const Eps& eps);

using PluralitySolver = std::function<PluralityResult(const WeightedPluralityInstance&)>;
using ApprovalSolver = std::function<ApprovalResult(const ApprovalPrimeInstance&)>;

struct PluralityFptasResult {
  std::vector<int> bribed;
  std::int64_t cost = 0;  // priced with the original instance's prices
  int exact_calls = 0;
};

struct ApprovalFptasResult {
  std::vector<Flip> flips;
  std::int64_t cost = 0;
  int exact_calls = 0;
};

// Doubling sweep over price caps t = 1, 2, 4, ... until t >= max price; each
// round solves the rescaled instance exactly, discards it when its scaled
// cost reaches the big-price threshold, and the cheapest kept solution under
// the original prices wins (ties: smallest t). Cost is at most (1 + 2 eps)
// times the optimum; runs exactly ceil(log2(max(T,1))) + 1 exact solves.
PluralityFptasResult fptas(const WeightedPluralityInstance& inst, const Eps& eps,
                           const PluralitySolver& solver = {});
ApprovalFptasResult fptas(const ApprovalPrimeInstance& inst, const Eps& eps,
                          const ApprovalSolver& solver = {});

// Same sweep run at eps/2, which tightens the guarantee to (1 + eps).
PluralityFptasResult fptas_strict(const WeightedPluralityInstance& inst, const Eps& eps,
                                  const PluralitySolver& solver = {});
ApprovalFptasResult fptas_strict(const ApprovalPrimeInstance& inst, const Eps& eps,
                                 const ApprovalSolver& solver = {});

// Negative bribery as a priced one-point election: every revote costs one
// unit except moves onto the preferred candidate, which cost budget + 1 and
// are therefore never affordable.
Weighted11Instance reduce_negative_bribery(const NegativeBriberyInstance& inst);

}  // namespace briberon
