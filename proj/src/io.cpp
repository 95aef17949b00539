#include "briberon/io.hpp"

#include <initializer_list>
#include <limits>
#include <map>

#include <json.hpp>

namespace briberon::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ParseError schema_err(const std::string& msg) { return {ParseError::Stage::schema, msg}; }
ParseError validation_err(const std::string& msg) {
  return {ParseError::Stage::validation, msg};
}

std::string suffix(const std::string& where) {
  return where.empty() ? "" : " in " + where;
}

std::int64_t as_int(const ordered_json& j, const std::string& what) {
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw schema_err(what + " exceeds the signed 64-bit integer contract");
    return static_cast<std::int64_t>(u);
  }
  if (!j.is_number_integer()) throw schema_err(what + " must be an integer");
  return j.get<std::int64_t>();
}

std::string as_string(const ordered_json& j, const std::string& what) {
  if (!j.is_string()) throw schema_err(what + " must be a string");
  return j.get<std::string>();
}

bool as_bool(const ordered_json& j, const std::string& what) {
  if (!j.is_boolean()) throw schema_err(what + " must be a boolean");
  return j.get<bool>();
}

const ordered_json& need(const ordered_json& obj, const char* key,
                         const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw schema_err("missing required field \"" + std::string(key) + "\"" + suffix(where));
  return *it;
}

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) {
        known = true;
        break;
      }
    if (!known) throw schema_err("unknown field \"" + item.key() + "\"" + suffix(where));
  }
}

struct LabelTable {
  CandidateSet labels;
  std::map<std::string, int> index;
};

LabelTable read_candidates(const ordered_json& doc) {
  const auto& arr = need(doc, "candidates", "");
  if (!arr.is_array() || arr.empty())
    throw schema_err("field \"candidates\" must be a nonempty array of labels");
  LabelTable table;
  for (const auto& item : arr) {
    const auto label = as_string(item, "candidate label");
    if (label.empty()) throw validation_err("candidate labels must be nonempty");
    if (label == "unassigned")
      throw validation_err("candidate label \"unassigned\" is reserved for the free-form pool");
    if (table.index.count(label))
      throw validation_err("candidate label \"" + label + "\" appears twice");
    table.index[label] = table.labels.size();
    table.labels.names.push_back(label);
  }
  return table;
}

int resolve(const LabelTable& table, const std::string& label, const std::string& where) {
  const auto it = table.index.find(label);
  if (it == table.index.end())
    throw validation_err("unknown candidate label \"" + label + "\"" + suffix(where));
  return it->second;
}

int resolve_slot(const LabelTable& table, const std::string& label, bool free_form,
                 const std::string& where) {
  if (label == "unassigned") {
    if (!free_form)
      throw validation_err("label \"unassigned\" is only valid in free-form instances" +
                           suffix(where));
    return table.labels.size();
  }
  return resolve(table, label, where);
}

PriceTable read_prices(const ordered_json& j, const LabelTable& table, bool free_form,
                       const std::string& where) {
  if (!j.is_object()) throw schema_err("field \"prices\" must be an object" + suffix(where));
  const int slots = table.labels.size() + (free_form ? 1 : 0);
  PriceTable prices = PriceTable::zeros(slots);
  for (const auto& item : j.items()) {
    const auto& key = item.key();
    const auto pos = key.find("->");
    if (pos == std::string::npos)
      throw schema_err("price key \"" + key + "\" must look like \"from->to\"" +
                       suffix(where));
    const int from = resolve_slot(table, key.substr(0, pos), free_form, where);
    const int to = resolve_slot(table, key.substr(pos + 2), free_form, where);
    const auto price = as_int(item.value(), "price \"" + key + "\"" + suffix(where));
    if (from == to && price != 0)
      throw validation_err("diagonal price must be 0 (price \"" + key + "\"" +
                           suffix(where) + ")");
    prices.at(from, to) = price;
  }
  return prices;
}

const ordered_json& voters_array(const ordered_json& doc) {
  const auto& voters = need(doc, "voters", "");
  if (!voters.is_array()) throw schema_err("field \"voters\" must be an array");
  return voters;
}

template <typename Instance>
void rethrow_validation(const Instance& inst) {
  try {
    require_valid(inst);
  } catch (const std::invalid_argument& e) {
    throw validation_err(e.what());
  }
}

InstanceDoc parse_kb(const ordered_json& doc, bool free_form) {
  reject_unknown(
      doc, {"schema", "problem", "candidates", "preferred", "k", "b", "budget", "voters"},
      "");
  const auto table = read_candidates(doc);
  KBBriberyInstance inst;
  inst.election.candidates = table.labels;
  inst.election.free_form = free_form;
  inst.election.k = as_int(need(doc, "k", ""), "field \"k\"");
  inst.election.b = as_int(need(doc, "b", ""), "field \"b\"");
  inst.preferred = resolve(table, as_string(need(doc, "preferred", ""), "field \"preferred\""),
                           "field \"preferred\"");
  if (doc.contains("budget")) inst.budget = as_int(doc["budget"], "field \"budget\"");

  int vi = 0;
  for (const auto& voter : voters_array(doc)) {
    const std::string where = "voter " + std::to_string(vi);
    if (!voter.is_object()) throw schema_err(where + " must be an object");
    if (free_form)
      reject_unknown(voter, {"points", "unassigned", "prices"}, where);
    else
      reject_unknown(voter, {"points", "prices"}, where);

    Ballot ballot;
    ballot.points.assign(table.labels.size(), 0);
    const auto& points = need(voter, "points", where);
    if (!points.is_object())
      throw schema_err("field \"points\" must be an object" + suffix(where));
    for (const auto& item : points.items())
      ballot.points[resolve(table, item.key(), where)] =
          as_int(item.value(), "points for \"" + item.key() + "\"" + suffix(where));
    if (free_form && voter.contains("unassigned"))
      ballot.unassigned = as_int(voter["unassigned"], "field \"unassigned\"" + suffix(where));

    inst.election.ballots.push_back(std::move(ballot));
    inst.prices.push_back(read_prices(need(voter, "prices", where), table, free_form, where));
    ++vi;
  }
  inst.election.weights.assign(inst.election.ballots.size(), 1);
  rethrow_validation(inst);

  InstanceDoc out;
  out.kind = free_form ? ProblemKind::kb_freeform : ProblemKind::kb;
  out.labels = table.labels;
  out.payload = std::move(inst);
  return out;
}

InstanceDoc parse_plurality(const ordered_json& doc) {
  reject_unknown(doc, {"schema", "problem", "candidates", "preferred", "budget", "voters"},
                 "");
  const auto table = read_candidates(doc);
  WeightedPluralityInstance inst;
  inst.m = table.labels.size();
  inst.preferred = resolve(table, as_string(need(doc, "preferred", ""), "field \"preferred\""),
                           "field \"preferred\"");
  if (doc.contains("budget")) inst.budget = as_int(doc["budget"], "field \"budget\"");
  int vi = 0;
  for (const auto& voter : voters_array(doc)) {
    const std::string where = "voter " + std::to_string(vi);
    if (!voter.is_object()) throw schema_err(where + " must be an object");
    reject_unknown(voter, {"weight", "vote", "price"}, where);
    WeightedPluralityVoter parsed;
    parsed.weight = as_int(need(voter, "weight", where), "field \"weight\"" + suffix(where));
    parsed.vote = resolve(table, as_string(need(voter, "vote", where),
                                           "field \"vote\"" + suffix(where)),
                          where);
    parsed.price = as_int(need(voter, "price", where), "field \"price\"" + suffix(where));
    inst.voters.push_back(parsed);
    ++vi;
  }
  rethrow_validation(inst);

  InstanceDoc out;
  out.kind = ProblemKind::plurality_weighted;
  out.labels = table.labels;
  out.payload = std::move(inst);
  return out;
}

InstanceDoc parse_approval(const ordered_json& doc) {
  reject_unknown(doc, {"schema", "problem", "candidates", "preferred", "budget", "voters"},
                 "");
  const auto table = read_candidates(doc);
  ApprovalPrimeInstance inst;
  inst.m = table.labels.size();
  inst.preferred = resolve(table, as_string(need(doc, "preferred", ""), "field \"preferred\""),
                           "field \"preferred\"");
  if (doc.contains("budget")) inst.budget = as_int(doc["budget"], "field \"budget\"");
  int vi = 0;
  for (const auto& voter : voters_array(doc)) {
    const std::string where = "voter " + std::to_string(vi);
    if (!voter.is_object()) throw schema_err(where + " must be an object");
    reject_unknown(voter, {"weight", "approvals", "flip_prices"}, where);
    ApprovalVoter parsed;
    parsed.weight = as_int(need(voter, "weight", where), "field \"weight\"" + suffix(where));
    parsed.approves.assign(inst.m, 0);
    const auto& approvals = need(voter, "approvals", where);
    if (!approvals.is_array())
      throw schema_err("field \"approvals\" must be an array" + suffix(where));
    for (const auto& item : approvals) {
      const int c = resolve(table, as_string(item, "approval label" + suffix(where)), where);
      if (parsed.approves[c])
        throw validation_err("approval list repeats a candidate" + suffix(where));
      parsed.approves[c] = 1;
    }
    const auto& prices = need(voter, "flip_prices", where);
    if (!prices.is_array())
      throw schema_err("field \"flip_prices\" must be an array" + suffix(where));
    for (const auto& item : prices)
      parsed.flip_prices.push_back(as_int(item, "flip price" + suffix(where)));
    inst.voters.push_back(std::move(parsed));
    ++vi;
  }
  rethrow_validation(inst);

  InstanceDoc out;
  out.kind = ProblemKind::approval_prime;
  out.labels = table.labels;
  out.payload = std::move(inst);
  return out;
}

InstanceDoc parse_negative(const ordered_json& doc) {
  reject_unknown(doc, {"schema", "problem", "candidates", "preferred", "budget", "voters"},
                 "");
  const auto table = read_candidates(doc);
  NegativeBriberyInstance inst;
  inst.m = table.labels.size();
  inst.preferred = resolve(table, as_string(need(doc, "preferred", ""), "field \"preferred\""),
                           "field \"preferred\"");
  inst.budget = as_int(need(doc, "budget", ""), "field \"budget\"");
  int vi = 0;
  for (const auto& voter : voters_array(doc)) {
    const std::string where = "voter " + std::to_string(vi);
    if (!voter.is_object()) throw schema_err(where + " must be an object");
    reject_unknown(voter, {"weight", "vote"}, where);
    NegativeVoter parsed;
    parsed.weight = as_int(need(voter, "weight", where), "field \"weight\"" + suffix(where));
    parsed.vote = resolve(table, as_string(need(voter, "vote", where),
                                           "field \"vote\"" + suffix(where)),
                          where);
    inst.voters.push_back(parsed);
    ++vi;
  }
  rethrow_validation(inst);

  InstanceDoc out;
  out.kind = ProblemKind::negative_plurality;
  out.labels = table.labels;
  out.payload = std::move(inst);
  return out;
}

InstanceDoc parse_weighted11(const ordered_json& doc) {
  reject_unknown(doc, {"schema", "problem", "candidates", "preferred", "budget", "voters"},
                 "");
  const auto table = read_candidates(doc);
  Weighted11Instance inst;
  inst.m = table.labels.size();
  inst.preferred = resolve(table, as_string(need(doc, "preferred", ""), "field \"preferred\""),
                           "field \"preferred\"");
  inst.budget = as_int(need(doc, "budget", ""), "field \"budget\"");
  int vi = 0;
  for (const auto& voter : voters_array(doc)) {
    const std::string where = "voter " + std::to_string(vi);
    if (!voter.is_object()) throw schema_err(where + " must be an object");
    reject_unknown(voter, {"weight", "vote", "prices"}, where);
    Weighted11Voter parsed;
    parsed.weight = as_int(need(voter, "weight", where), "field \"weight\"" + suffix(where));
    parsed.vote = resolve(table, as_string(need(voter, "vote", where),
                                           "field \"vote\"" + suffix(where)),
                          where);
    parsed.prices = read_prices(need(voter, "prices", where), table, false, where);
    inst.voters.push_back(std::move(parsed));
    ++vi;
  }
  rethrow_validation(inst);

  InstanceDoc out;
  out.kind = ProblemKind::weighted_11;
  out.labels = table.labels;
  out.payload = std::move(inst);
  return out;
}

ordered_json emit_prices(const PriceTable& table, const CandidateSet& labels) {
  ordered_json out = ordered_json::object();
  const auto slot_label = [&](int s) {
    return s < labels.size() ? labels.names[s] : std::string("unassigned");
  };
  for (int i = 0; i < table.slot_count; ++i)
    for (int j = 0; j < table.slot_count; ++j)
      if (table.at(i, j) != 0) out[slot_label(i) + "->" + slot_label(j)] = table.at(i, j);
  return out;
}

}  // namespace

std::string kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kb: return "kb";
    case ProblemKind::kb_freeform: return "kb_freeform";
    case ProblemKind::plurality_weighted: return "plurality_weighted";
    case ProblemKind::approval_prime: return "approval_prime";
    case ProblemKind::negative_plurality: return "negative_plurality";
    case ProblemKind::weighted_11: return "weighted_11";
  }
  return "kb";
}

std::optional<ProblemKind> kind_by_name(const std::string& name) {
  for (const auto kind :
       {ProblemKind::kb, ProblemKind::kb_freeform, ProblemKind::plurality_weighted,
        ProblemKind::approval_prime, ProblemKind::negative_plurality,
        ProblemKind::weighted_11}) {
    if (name == kind_name(kind)) return kind;
  }
  return std::nullopt;
}

InstanceDoc parse_instance(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Stage::syntax, e.what());
  }
  if (!doc.is_object()) throw schema_err("instance document must be an object");
  const auto schema = as_string(need(doc, "schema", ""), "field \"schema\"");
  if (schema != "briberon/instance/v1")
    throw schema_err("unsupported schema \"" + schema + "\"");
  const auto problem = as_string(need(doc, "problem", ""), "field \"problem\"");
  const auto kind = kind_by_name(problem);
  if (!kind) throw schema_err("unknown problem kind \"" + problem + "\"");
  switch (*kind) {
    case ProblemKind::kb: return parse_kb(doc, false);
    case ProblemKind::kb_freeform: return parse_kb(doc, true);
    case ProblemKind::plurality_weighted: return parse_plurality(doc);
    case ProblemKind::approval_prime: return parse_approval(doc);
    case ProblemKind::negative_plurality: return parse_negative(doc);
    case ProblemKind::weighted_11: return parse_weighted11(doc);
  }
  throw schema_err("unknown problem kind \"" + problem + "\"");
}

std::string serialize_instance(const InstanceDoc& doc) {
  ordered_json out = ordered_json::object();
  out["schema"] = "briberon/instance/v1";
  out["problem"] = kind_name(doc.kind);
  out["candidates"] = doc.labels.names;
  out["preferred"] = nullptr;  // placed here to fix the field order, filled below
  ordered_json voters = ordered_json::array();

  switch (doc.kind) {
    case ProblemKind::kb:
    case ProblemKind::kb_freeform: {
      const auto& inst = std::get<KBBriberyInstance>(doc.payload);
      out["preferred"] = inst.election.candidates.names[inst.preferred];
      out["k"] = inst.election.k;
      out["b"] = inst.election.b;
      if (inst.budget) out["budget"] = *inst.budget;
      for (int v = 0; v < inst.election.voter_count(); ++v) {
        ordered_json voter = ordered_json::object();
        ordered_json points = ordered_json::object();
        for (int c = 0; c < inst.election.candidate_count(); ++c)
          if (inst.election.ballots[v].points[c] != 0)
            points[inst.election.candidates.names[c]] = inst.election.ballots[v].points[c];
        voter["points"] = std::move(points);
        if (inst.election.free_form && inst.election.ballots[v].unassigned > 0)
          voter["unassigned"] = inst.election.ballots[v].unassigned;
        voter["prices"] = emit_prices(inst.prices[v], inst.election.candidates);
        voters.push_back(std::move(voter));
      }
      break;
    }
    case ProblemKind::plurality_weighted: {
      const auto& inst = std::get<WeightedPluralityInstance>(doc.payload);
      out["preferred"] = doc.labels.names[inst.preferred];
      if (inst.budget) out["budget"] = *inst.budget;
      for (const auto& voter : inst.voters) {
        ordered_json entry = ordered_json::object();
        entry["weight"] = voter.weight;
        entry["vote"] = doc.labels.names[voter.vote];
        entry["price"] = voter.price;
        voters.push_back(std::move(entry));
      }
      break;
    }
    case ProblemKind::approval_prime: {
      const auto& inst = std::get<ApprovalPrimeInstance>(doc.payload);
      out["preferred"] = doc.labels.names[inst.preferred];
      if (inst.budget) out["budget"] = *inst.budget;
      for (const auto& voter : inst.voters) {
        ordered_json entry = ordered_json::object();
        entry["weight"] = voter.weight;
        ordered_json approvals = ordered_json::array();
        for (int c = 0; c < inst.m; ++c)
          if (voter.approves[c]) approvals.push_back(doc.labels.names[c]);
        entry["approvals"] = std::move(approvals);
        entry["flip_prices"] = voter.flip_prices;
        voters.push_back(std::move(entry));
      }
      break;
    }
    case ProblemKind::negative_plurality: {
      const auto& inst = std::get<NegativeBriberyInstance>(doc.payload);
      out["preferred"] = doc.labels.names[inst.preferred];
      out["budget"] = inst.budget;
      for (const auto& voter : inst.voters) {
        ordered_json entry = ordered_json::object();
        entry["weight"] = voter.weight;
        entry["vote"] = doc.labels.names[voter.vote];
        voters.push_back(std::move(entry));
      }
      break;
    }
    case ProblemKind::weighted_11: {
      const auto& inst = std::get<Weighted11Instance>(doc.payload);
      out["preferred"] = doc.labels.names[inst.preferred];
      out["budget"] = inst.budget;
      for (const auto& voter : inst.voters) {
        ordered_json entry = ordered_json::object();
        entry["weight"] = voter.weight;
        entry["vote"] = doc.labels.names[voter.vote];
        entry["prices"] = emit_prices(voter.prices, doc.labels);
        voters.push_back(std::move(entry));
      }
      break;
    }
  }
  out["voters"] = std::move(voters);
  return out.dump(2) + "\n";
}

std::string serialize_report(const Report& report) {
  ordered_json out = ordered_json::object();
  out["schema"] = "briberon/report/v1";
  out["problem"] = kind_name(report.problem);
  out["method"] = report.method;
  if (report.epsilon) out["epsilon"] = *report.epsilon;
  out["feasible"] = report.feasible;
  if (report.optimal_cost) out["optimal_cost"] = *report.optimal_cost;
  if (report.achieved_score) out["achieved_score"] = *report.achieved_score;
  if (report.budget) out["budget"] = *report.budget;
  if (report.within_budget) out["within_budget"] = *report.within_budget;
  ordered_json plan = ordered_json::array();
  for (const auto& entry : report.plan) {
    ordered_json item = ordered_json::object();
    item["voter"] = entry.voter;
    if (entry.from) item["from"] = *entry.from;
    if (entry.to) item["to"] = *entry.to;
    if (entry.candidate) item["candidate"] = *entry.candidate;
    if (entry.count) item["count"] = *entry.count;
    plan.push_back(std::move(item));
  }
  out["plan"] = std::move(plan);
  ordered_json scores = ordered_json::object();
  for (const auto& [label, score] : report.post_scores) scores[label] = score;
  out["post_scores"] = std::move(scores);
  out["winners"] = report.winners;
  return out.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Stage::syntax, e.what());
  }
  if (!doc.is_object()) throw schema_err("report document must be an object");
  reject_unknown(doc,
                 {"schema", "problem", "method", "epsilon", "feasible", "optimal_cost",
                  "achieved_score", "budget", "within_budget", "plan", "post_scores",
                  "winners"},
                 "");
  const auto schema = as_string(need(doc, "schema", ""), "field \"schema\"");
  if (schema != "briberon/report/v1")
    throw schema_err("unsupported schema \"" + schema + "\"");

  Report report;
  const auto problem = as_string(need(doc, "problem", ""), "field \"problem\"");
  const auto kind = kind_by_name(problem);
  if (!kind) throw schema_err("unknown problem kind \"" + problem + "\"");
  report.problem = *kind;
  report.method = as_string(need(doc, "method", ""), "field \"method\"");
  if (doc.contains("epsilon"))
    report.epsilon = as_string(doc["epsilon"], "field \"epsilon\"");
  report.feasible = as_bool(need(doc, "feasible", ""), "field \"feasible\"");
  if (doc.contains("optimal_cost"))
    report.optimal_cost = as_int(doc["optimal_cost"], "field \"optimal_cost\"");
  if (doc.contains("achieved_score"))
    report.achieved_score = as_int(doc["achieved_score"], "field \"achieved_score\"");
  if (doc.contains("budget")) report.budget = as_int(doc["budget"], "field \"budget\"");
  if (doc.contains("within_budget"))
    report.within_budget = as_bool(doc["within_budget"], "field \"within_budget\"");

  const auto& plan = need(doc, "plan", "");
  if (!plan.is_array()) throw schema_err("field \"plan\" must be an array");
  int pi = 0;
  for (const auto& item : plan) {
    const std::string where = "plan entry " + std::to_string(pi);
    if (!item.is_object()) throw schema_err(where + " must be an object");
    reject_unknown(item, {"voter", "from", "to", "candidate", "count"}, where);
    PlanEntry entry;
    entry.voter =
        static_cast<int>(as_int(need(item, "voter", where), "field \"voter\"" + suffix(where)));
    if (item.contains("from"))
      entry.from = as_string(item["from"], "field \"from\"" + suffix(where));
    if (item.contains("to")) entry.to = as_string(item["to"], "field \"to\"" + suffix(where));
    if (item.contains("candidate"))
      entry.candidate = as_string(item["candidate"], "field \"candidate\"" + suffix(where));
    if (item.contains("count"))
      entry.count = as_int(item["count"], "field \"count\"" + suffix(where));
    report.plan.push_back(std::move(entry));
    ++pi;
  }

  const auto& scores = need(doc, "post_scores", "");
  if (!scores.is_object()) throw schema_err("field \"post_scores\" must be an object");
  for (const auto& item : scores.items())
    report.post_scores.emplace_back(item.key(),
                                    as_int(item.value(), "score of \"" + item.key() + "\""));

  const auto& winners = need(doc, "winners", "");
  if (!winners.is_array()) throw schema_err("field \"winners\" must be an array");
  for (const auto& item : winners)
    report.winners.push_back(as_string(item, "winner label"));
  return report;
}

}  // namespace briberon::io
