#include "dualnorm/norms.hpp"

#include <algorithm>

#include <json.hpp>

namespace dualnorm {

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
    case NormKind::GroupL2: return "group_l2";
    case NormKind::OverlapGroupL2: return "overlap_group_l2";
  }
  return "?";
}

NormKind norm_kind_from_string(const std::string& name) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key == "l1") return NormKind::L1;
  if (key == "l2") return NormKind::L2;
  if (key == "linf") return NormKind::Linf;
  if (key == "group_l2" || key == "groupl2") return NormKind::GroupL2;
  if (key == "overlap_group_l2" || key == "overlapgroupl2")
    return NormKind::OverlapGroupL2;
  throw ValidationError("unknown norm kind \"" + name + "\"");
}

NormSpec NormSpec::group_l2(GroupStructure structure) {
  const auto report = validate_groups(structure);
  if (!report.valid_for_partition())
    throw ValidationError("group_l2 norm: " + report.summary());
  return NormSpec(NormKind::GroupL2, std::move(structure));
}

NormSpec NormSpec::overlap_group_l2(GroupStructure structure) {
  const auto report = validate_groups(structure);
  if (!report.valid_for_overlap())
    throw ValidationError("overlap_group_l2 norm: " + report.summary());
  return NormSpec(NormKind::OverlapGroupL2, std::move(structure));
}

NormSpec parse_norm_spec(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("norm spec: malformed JSON");
  if (!doc.is_object()) throw ValidationError("norm spec: expected a JSON object");

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "kind" && key != "p" && key != "groups" && key != "weights")
      throw ValidationError("norm spec: unknown key \"" + key + "\"");
  }

  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ValidationError("norm spec: \"kind\" must be a string");
  const NormKind kind = norm_kind_from_string(doc["kind"].get<std::string>());

  if (!doc.contains("p") || !doc["p"].is_number_integer())
    throw ValidationError("norm spec: \"p\" must be an integer");
  const Index p = doc["p"].get<Index>();

  if (!is_group_kind(kind)) {
    if (doc.contains("groups") || doc.contains("weights"))
      throw ValidationError("norm spec: \"groups\"/\"weights\" only apply to group kinds");
    switch (kind) {
      case NormKind::L1: return NormSpec::l1(p);
      case NormKind::L2: return NormSpec::l2(p);
      default: return NormSpec::linf(p);
    }
  }

  if (!doc.contains("groups"))
    throw ValidationError("norm spec: group kinds require \"groups\"");
  if (kind == NormKind::OverlapGroupL2 && doc.contains("weights"))
    throw ValidationError(
        "norm spec: overlap_group_l2 derives its coordinate weights; "
        "\"weights\" is not accepted");

  // Reuse the group-structure schema for the shared keys.
  nlohmann::json structure_doc;
  structure_doc["p"] = doc["p"];
  structure_doc["groups"] = doc["groups"];
  if (doc.contains("weights")) structure_doc["weights"] = doc["weights"];
  GroupStructure structure = parse_group_structure(structure_doc.dump());

  return kind == NormKind::GroupL2 ? NormSpec::group_l2(std::move(structure))
                                   : NormSpec::overlap_group_l2(std::move(structure));
}

}  // namespace dualnorm
