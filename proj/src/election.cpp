#include "briberon/election.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace briberon {

std::vector<Violation> validate(const KBElection& e) {
  std::vector<Violation> out;
  const int m = e.candidate_count();

  if (m == 0) out.push_back({-1, "election has no candidates"});
  std::set<std::string> seen;
  for (const auto& name : e.candidates.names) {
    if (name.empty()) out.push_back({-1, "candidate label is empty"});
    if (!seen.insert(name).second)
      out.push_back({-1, "duplicate candidate label '" + name + "'"});
  }
  if (e.k < 1) out.push_back({-1, "k must be positive"});
  if (e.b < 1) out.push_back({-1, "b must be positive"});
  if (!e.free_form && e.k >= 1 && e.b >= 1 && m > 0) {
    // Without an unassigned slot every one of the k points needs a home.
    bool fits = false;
    try {
      fits = e.k <= checked_mul(static_cast<std::int64_t>(m), e.b);
    } catch (const OverflowError&) {
      fits = true;
    }
    if (!fits) out.push_back({-1, "k exceeds m*b, no valid ballot exists"});
  }
  if (e.weights.size() != e.ballots.size())
    out.push_back({-1, "weights and ballots differ in length"});

  for (int v = 0; v < e.voter_count(); ++v) {
    const Ballot& ballot = e.ballots[v];
    if (static_cast<int>(ballot.points.size()) != m) {
      out.push_back({v, "ballot has wrong number of candidate entries"});
      continue;
    }
    bool entry_bad = false;
    std::int64_t sum = 0;
    for (int c = 0; c < m; ++c) {
      const std::int64_t p = ballot.points[c];
      if (p < 0) {
        out.push_back({v, "negative point count"});
        entry_bad = true;
        break;
      }
      if (p > e.b) {
        std::ostringstream msg;
        msg << "points[" << c << "] = " << p << " exceeds b = " << e.b;
        out.push_back({v, msg.str()});
        entry_bad = true;
        break;
      }
      try {
        sum = checked_add(sum, p);
      } catch (const OverflowError&) {
        out.push_back({v, "point sum overflows"});
        entry_bad = true;
        break;
      }
    }
    if (entry_bad) continue;
    if (ballot.unassigned < 0) {
      out.push_back({v, "negative unassigned count"});
      continue;
    }
    if (!e.free_form && ballot.unassigned != 0) {
      out.push_back({v, "unassigned points are not allowed here"});
      continue;
    }
    std::int64_t total = sum;
    try {
      total = checked_add(sum, ballot.unassigned);
    } catch (const OverflowError&) {
      out.push_back({v, "point sum overflows"});
      continue;
    }
    if (total != e.k) out.push_back({v, "points sum differs from k"});
  }
  for (size_t v = 0; v < e.weights.size(); ++v) {
    if (e.weights[v] < 1)
      out.push_back({static_cast<int>(v), "weight must be positive"});
  }
  return out;
}

void require_valid(const KBElection& e) {
  const auto violations = validate(e);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid election:";
  for (size_t i = 0; i < violations.size() && i < 4; ++i) {
    msg << " [voter " << violations[i].voter << "] " << violations[i].reason << ";";
  }
  if (violations.size() > 4) msg << " ...";
  throw std::invalid_argument(msg.str());
}

KBElection make_election(CandidateSet candidates, std::int64_t k, std::int64_t b,
                         bool free_form, std::vector<Ballot> ballots,
                         std::vector<std::int64_t> weights) {
  KBElection e;
  e.candidates = std::move(candidates);
  e.k = k;
  e.b = b;
  e.free_form = free_form;
  e.ballots = std::move(ballots);
  if (weights.empty()) weights.assign(e.ballots.size(), 1);
  e.weights = std::move(weights);
  require_valid(e);
  return e;
}

ScoreVector tally(const KBElection& e) {
  ScoreVector s;
  s.scores.assign(e.candidate_count(), 0);
  for (int v = 0; v < e.voter_count(); ++v) {
    const std::int64_t w = e.weights[v];
    for (int c = 0; c < e.candidate_count(); ++c) {
      s.scores[c] = checked_add(s.scores[c], checked_mul(w, e.ballots[v].points[c]));
    }
  }
  return s;
}

std::vector<int> winners(const ScoreVector& s) {
  if (s.scores.empty()) throw std::invalid_argument("winners: empty score vector");
  const std::int64_t top = *std::max_element(s.scores.begin(), s.scores.end());
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(s.scores.size()); ++c) {
    if (s.scores[c] == top) out.push_back(c);
  }
  return out;
}

namespace {

void check_ranking(const std::vector<int>& ranking, int m) {
  if (static_cast<int>(ranking.size()) != m)
    throw std::invalid_argument("ranking is not a permutation of the candidates");
  std::vector<bool> seen(m, false);
  for (int c : ranking) {
    if (c < 0 || c >= m || seen[c])
      throw std::invalid_argument("ranking is not a permutation of the candidates");
    seen[c] = true;
  }
}

std::vector<bool> check_approval_set(const std::vector<int>& approved, int m) {
  std::vector<bool> mask(m, false);
  for (int c : approved) {
    if (c < 0 || c >= m)
      throw std::invalid_argument("approval set names an unknown candidate");
    if (mask[c]) throw std::invalid_argument("duplicate candidate in approval set");
    mask[c] = true;
  }
  return mask;
}

}  // namespace

KBElection encode_plurality(CandidateSet candidates,
                            const std::vector<std::vector<int>>& rankings) {
  const int m = candidates.size();
  std::vector<Ballot> ballots;
  ballots.reserve(rankings.size());
  for (const auto& r : rankings) {
    check_ranking(r, m);
    Ballot b;
    b.points.assign(m, 0);
    b.points[r[0]] = 1;
    ballots.push_back(std::move(b));
  }
  return make_election(std::move(candidates), 1, 1, false, std::move(ballots));
}

KBElection encode_veto(CandidateSet candidates,
                       const std::vector<std::vector<int>>& rankings) {
  const int m = candidates.size();
  if (m < 2) throw std::invalid_argument("veto needs at least two candidates");
  std::vector<Ballot> ballots;
  ballots.reserve(rankings.size());
  for (const auto& r : rankings) {
    check_ranking(r, m);
    Ballot b;
    b.points.assign(m, 1);
    b.points[r[m - 1]] = 0;  // one point to everybody but the bottom choice
    ballots.push_back(std::move(b));
  }
  return make_election(std::move(candidates), m - 1, 1, false, std::move(ballots));
}

KBElection encode_approval(CandidateSet candidates,
                           const std::vector<std::vector<int>>& approval_sets) {
  const int m = candidates.size();
  std::vector<Ballot> ballots;
  ballots.reserve(approval_sets.size());
  for (const auto& a : approval_sets) {
    const auto mask = check_approval_set(a, m);
    Ballot b;
    b.points.assign(m, 0);
    std::int64_t used = 0;
    for (int c = 0; c < m; ++c) {
      if (mask[c]) {
        b.points[c] = 1;
        ++used;
      }
    }
    b.unassigned = m - used;
    ballots.push_back(std::move(b));
  }
  return make_election(std::move(candidates), m, 1, true, std::move(ballots));
}

KBElection encode_t_approval(CandidateSet candidates, std::int64_t t,
                             const std::vector<std::vector<int>>& approval_sets) {
  const int m = candidates.size();
  if (t < 1 || t > m)
    throw std::invalid_argument("t must lie between 1 and the candidate count");
  std::vector<Ballot> ballots;
  ballots.reserve(approval_sets.size());
  for (const auto& a : approval_sets) {
    if (static_cast<std::int64_t>(a.size()) != t) {
      std::ostringstream msg;
      msg << "ballot approves " << a.size() << " candidates, expected exactly " << t;
      throw std::invalid_argument(msg.str());
    }
    const auto mask = check_approval_set(a, m);
    Ballot b;
    b.points.assign(m, 0);
    for (int c = 0; c < m; ++c)
      if (mask[c]) b.points[c] = 1;
    ballots.push_back(std::move(b));
  }
  return make_election(std::move(candidates), t, 1, false, std::move(ballots));
}

KBElection encode_utility(CandidateSet candidates, std::int64_t k, std::int64_t b,
                          const std::vector<std::vector<std::int64_t>>& point_vectors) {
  std::vector<Ballot> ballots;
  ballots.reserve(point_vectors.size());
  for (const auto& p : point_vectors) {
    Ballot ballot;
    ballot.points = p;
    ballots.push_back(std::move(ballot));
  }
  return make_election(std::move(candidates), k, b, false, std::move(ballots));
}

}  // namespace briberon
