#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "briberon/election.hpp"
#include "briberon/kb_bribery.hpp"
#include "briberon/weighted_bribery.hpp"

// Brute-force reference solvers and the reproducible instance generator.
// The oracles only share types, tally and winners with the production code;
// every optimum here is found by plain enumeration.
namespace briberon::testkit {

// Fixed mixing scheme so any implementation can regenerate the corpus from a
// seed. The exact constants and draw orders are documented in docs/FORMAT.md.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform-ish draw in [lo, hi] via modulo; bias is irrelevant at desk scale.
  std::int64_t bounded(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

struct IntRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

enum class GenKind {
  kb,
  plurality_weighted,
  approval_prime,
  negative_plurality,
  weighted_11,
};

// How kb ballots are produced: directly as point vectors, or through one of
// the voting-rule encoders.
enum class BallotEncoder { none, plurality, veto, approval, t_approval };

struct GenParams {
  std::uint64_t seed = 1;
  GenKind kind = GenKind::kb;
  bool free_form = false;  // kb only; the approval encoder forces it
  IntRange m{2, 4};
  IntRange n{1, 4};
  IntRange k{1, 3};
  IntRange b{1, 2};
  IntRange weight{1, 9};
  IntRange price{0, 9};
  BallotEncoder encoder = BallotEncoder::none;
  std::int64_t t_approval_t = 3;
};

KBBriberyInstance gen_kb(const GenParams& params);
WeightedPluralityInstance gen_plurality(const GenParams& params);
ApprovalPrimeInstance gen_approval(const GenParams& params);
NegativeBriberyInstance gen_negative(const GenParams& params);
Weighted11Instance gen_weighted11(const GenParams& params);

struct BruteKbResult {
  std::int64_t cost = 0;
  BriberyPlan plan;
};

// Exact optimum by enumerating, per voter, every way the k points can be
// redistributed (each point picks a destination slot), then folding voters
// together over aggregate score vectors. Desk-scale caps: m <= 5, n <= 8,
// k <= 4, b <= 3.
BruteKbResult brute_kb(const KBBriberyInstance& inst);

struct BrutePluralityResult {
  std::int64_t cost = 0;
  std::vector<int> bribed;
};

// Subset enumeration; with arbitrary_revotes each bribed voter may revote for
// anyone. Caps: n <= 12 (n <= 8 with arbitrary revotes).
BrutePluralityResult brute_weighted_plurality(const WeightedPluralityInstance& inst,
                                              bool arbitrary_revotes);

struct BruteApprovalResult {
  std::int64_t cost = 0;
  std::vector<Flip> flips;
};

// Exhaustive over useful-flip subsets; cap: at most 20 useful flips.
BruteApprovalResult brute_approval_prime(const ApprovalPrimeInstance& inst);

struct BruteDecision {
  bool yes = false;
  std::vector<std::pair<int, int>> witness;  // (voter, new vote) when yes
};

// Enumerates voter subsets of size <= budget and all revotes avoiding the
// preferred candidate. Caps: n <= 6, m <= 4.
BruteDecision brute_negative(const NegativeBriberyInstance& inst);

// Enumerates every per-voter revote choice within the price budget.
// Caps: n <= 6, m <= 4.
BruteDecision brute_11_weighted(const Weighted11Instance& inst);

}  // namespace briberon::testkit
