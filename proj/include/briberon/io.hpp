#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "briberon/kb_bribery.hpp"
#include "briberon/weighted_bribery.hpp"

namespace briberon::io {

enum class ProblemKind {
  kb,
  kb_freeform,
  plurality_weighted,
  approval_prime,
  negative_plurality,
  weighted_11,
};

std::string kind_name(ProblemKind kind);
std::optional<ProblemKind> kind_by_name(const std::string& name);

// Errors are staged: syntax (not parseable at all), schema (wrong shape,
// missing or unknown fields, bad types), validation (well-formed but breaks a
// domain rule).
class ParseError : public std::runtime_error {
 public:
  enum class Stage { syntax, schema, validation };

  ParseError(Stage stage, const std::string& message)
      : std::runtime_error(message), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

using AnyInstance = std::variant<KBBriberyInstance, WeightedPluralityInstance,
                                 ApprovalPrimeInstance, NegativeBriberyInstance,
                                 Weighted11Instance>;

// One parsed instance file. labels carries the candidate names for every
// kind; for kb kinds it mirrors the election's candidate set.
struct InstanceDoc {
  ProblemKind kind = ProblemKind::kb;
  CandidateSet labels;
  AnyInstance payload;

  bool operator==(const InstanceDoc&) const = default;
};

InstanceDoc parse_instance(const std::string& text);

// Canonical serialization: fixed field order, zero entries of sparse maps
// omitted, two-space indentation, trailing newline. parse_instance of the
// output reproduces the document byte for byte when serialized again.
std::string serialize_instance(const InstanceDoc& doc);

struct PlanEntry {
  int voter = 0;  // 0-based
  std::optional<std::string> from;
  std::optional<std::string> to;
  std::optional<std::string> candidate;
  std::optional<std::int64_t> count;

  bool operator==(const PlanEntry&) const = default;
};

struct Report {
  ProblemKind problem = ProblemKind::kb;
  std::string method;
  std::optional<std::string> epsilon;
  bool feasible = false;
  std::optional<std::int64_t> optimal_cost;
  std::optional<std::int64_t> achieved_score;
  std::optional<std::int64_t> budget;
  std::optional<bool> within_budget;
  std::vector<PlanEntry> plan;
  std::vector<std::pair<std::string, std::int64_t>> post_scores;
  std::vector<std::string> winners;

  bool operator==(const Report&) const = default;
};

std::string serialize_report(const Report& report);
Report parse_report(const std::string& text);

}  // namespace briberon::io
