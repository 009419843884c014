#include "dualnorm/groups.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dualnorm {

GroupStructure::GroupStructure(Index p, std::vector<std::vector<Index>> groups,
                               std::optional<std::vector<double>> group_weights)
    : p_(p), groups_(std::move(groups)) {
  if (p_ < 1) throw ValidationError("group structure: p must be >= 1");

  for (std::size_t g = 0; g < groups_.size(); ++g) {
    std::set<Index> seen;
    for (Index l : groups_[g]) {
      if (l < 0 || l >= p_)
        throw ValidationError("group structure: group " + std::to_string(g + 1) +
                              " references coordinate " + std::to_string(l + 1) +
                              " outside 1.." + std::to_string(p_));
      if (!seen.insert(l).second)
        throw ValidationError("group structure: group " + std::to_string(g + 1) +
                              " lists coordinate " + std::to_string(l + 1) +
                              " more than once");
    }
  }

  if (group_weights) {
    if (group_weights->size() != groups_.size())
      throw ValidationError("group structure: " + std::to_string(groups_.size()) +
                            " groups but " + std::to_string(group_weights->size()) +
                            " weights");
    for (double w : *group_weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw ValidationError("group structure: group weights must be positive finite");
    group_weights_ = std::move(*group_weights);
  } else {
    group_weights_.reserve(groups_.size());
    for (const auto& g : groups_) group_weights_.push_back(static_cast<double>(g.size()));
  }

  membership_.assign(static_cast<std::size_t>(p_), 0);
  for (const auto& g : groups_)
    for (Index l : g) ++membership_[static_cast<std::size_t>(l)];

  wtilde_.assign(static_cast<std::size_t>(p_), 0.0);
  for (Index l = 0; l < p_; ++l) {
    const int count = membership_[static_cast<std::size_t>(l)];
    if (count > 0) wtilde_[static_cast<std::size_t>(l)] = 1.0 / count;
  }

  c_.reserve(groups_.size());
  for (const auto& g : groups_) {
    std::vector<double> cg;
    cg.reserve(g.size());
    for (Index l : g) cg.push_back(wtilde_[static_cast<std::size_t>(l)]);
    c_.push_back(std::move(cg));
  }
}

GroupValidationReport validate_groups(const GroupStructure& structure) {
  GroupValidationReport report;

  for (std::size_t g = 0; g < structure.num_groups(); ++g)
    if (structure.group(g).empty()) report.empty_groups.push_back(g);

  for (Index l = 0; l < structure.p(); ++l) {
    const int count = structure.membership_count(l);
    if (count == 0) report.uncovered_coordinates.push_back(l);
    if (count > 1) report.shared_coordinates.push_back(l);
  }

  // Recompute wtilde_l = 1 / sum_g s_l^(g) and compare with the stored value.
  for (Index l = 0; l < structure.p(); ++l) {
    const int count = structure.membership_count(l);
    const double expected = count > 0 ? 1.0 / count : 0.0;
    if (structure.coordinate_weight(l) != expected)
      report.coordinate_weights_consistent = false;
  }

  return report;
}

std::string GroupValidationReport::summary() const {
  std::ostringstream out;
  if (valid_for_partition()) {
    out << "groups partition the coordinates (valid for group-l2 and overlap use)";
    return out.str();
  }
  if (valid_for_overlap())
    out << "groups overlap but cover all coordinates (valid for overlap use only)";
  else
    out << "invalid group structure";
  if (!uncovered_coordinates.empty()) {
    out << "; uncovered coordinates:";
    for (Index l : uncovered_coordinates) out << ' ' << (l + 1);
  }
  if (!empty_groups.empty()) {
    out << "; empty groups:";
    for (std::size_t g : empty_groups) out << ' ' << (g + 1);
  }
  if (!shared_coordinates.empty()) {
    out << "; shared coordinates:";
    for (Index l : shared_coordinates) out << ' ' << (l + 1);
  }
  if (!coordinate_weights_consistent) out << "; stored coordinate weights inconsistent";
  return out.str();
}

namespace {

nlohmann::json parse_json_or_throw(const std::string& text, const char* what) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ValidationError(std::string(what) + ": malformed JSON");
  return doc;
}

}  // namespace

GroupStructure parse_group_structure(const std::string& json_text) {
  const nlohmann::json doc = parse_json_or_throw(json_text, "group structure");
  if (!doc.is_object()) throw ValidationError("group structure: expected a JSON object");

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "p" && key != "groups" && key != "weights")
      throw ValidationError("group structure: unknown key \"" + key + "\"");
  }

  if (!doc.contains("p") || !doc["p"].is_number_integer())
    throw ValidationError("group structure: \"p\" must be an integer");
  const Index p = doc["p"].get<Index>();

  if (!doc.contains("groups") || !doc["groups"].is_array())
    throw ValidationError("group structure: \"groups\" must be an array of arrays");

  std::vector<std::vector<Index>> groups;
  for (const auto& entry : doc["groups"]) {
    if (!entry.is_array())
      throw ValidationError("group structure: each group must be an array of indices");
    std::vector<Index> g;
    for (const auto& idx : entry) {
      if (!idx.is_number_integer())
        throw ValidationError("group structure: coordinate indices must be integers");
      g.push_back(idx.get<Index>() - 1);  // 1-based on disk
    }
    groups.push_back(std::move(g));
  }

  std::optional<std::vector<double>> weights;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_array())
      throw ValidationError("group structure: \"weights\" must be an array of numbers");
    std::vector<double> w;
    for (const auto& entry : doc["weights"]) {
      if (!entry.is_number())
        throw ValidationError("group structure: weights must be numbers");
      w.push_back(entry.get<double>());
    }
    weights = std::move(w);
  }

  return GroupStructure(p, std::move(groups), std::move(weights));
}

}  // namespace dualnorm
