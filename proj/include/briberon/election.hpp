#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "briberon/checked.hpp"

namespace briberon {

struct CandidateSet {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }
  bool operator==(const CandidateSet&) const = default;
};

// One voter's point distribution. points[i] is what candidate i receives.
// unassigned is only meaningful in free-form elections, where a voter may
// withhold part of the k points.
struct Ballot {
  std::vector<std::int64_t> points;
  std::int64_t unassigned = 0;

  bool operator==(const Ballot&) const = default;
};

// Election where every voter distributes exactly k points, at most b of them
// per candidate. In the free-form variant points may also stay unassigned;
// the b bound never applies to the unassigned part.
struct KBElection {
  CandidateSet candidates;
  std::int64_t k = 1;
  std::int64_t b = 1;
  bool free_form = false;
  std::vector<Ballot> ballots;
  std::vector<std::int64_t> weights;  // per-voter multipliers, all 1 when unweighted

  int candidate_count() const { return candidates.size(); }
  int voter_count() const { return static_cast<int>(ballots.size()); }
  bool operator==(const KBElection&) const = default;
};

struct ScoreVector {
  std::vector<std::int64_t> scores;

  bool operator==(const ScoreVector&) const = default;
};

struct Violation {
  int voter = -1;  // -1 marks election-level problems
  std::string reason;
};

std::vector<Violation> validate(const KBElection& e);
void require_valid(const KBElection& e);  // throws std::invalid_argument on violations

// Builds an election and validates it; weights default to all ones.
KBElection make_election(CandidateSet candidates, std::int64_t k, std::int64_t b,
                         bool free_form, std::vector<Ballot> ballots,
                         std::vector<std::int64_t> weights = {});

// Weighted sums per candidate. Input must already be valid.
ScoreVector tally(const KBElection& e);

// Indices of all score maximizers (co-winners), ascending.
std::vector<int> winners(const ScoreVector& s);

// Rule encoders. Rankings are full permutations of 0..m-1, best first.
// Approval sets are lists of distinct candidate indices.
KBElection encode_plurality(CandidateSet candidates,
                            const std::vector<std::vector<int>>& rankings);
KBElection encode_veto(CandidateSet candidates,
                       const std::vector<std::vector<int>>& rankings);
KBElection encode_approval(CandidateSet candidates,
                           const std::vector<std::vector<int>>& approval_sets);
KBElection encode_t_approval(CandidateSet candidates, std::int64_t t,
                             const std::vector<std::vector<int>>& approval_sets);
KBElection encode_utility(CandidateSet candidates, std::int64_t k, std::int64_t b,
                          const std::vector<std::vector<std::int64_t>>& point_vectors);

}  // namespace briberon
