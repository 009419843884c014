#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dualnorm/errors.hpp"
#include "dualnorm/linalg.hpp"

namespace dualnorm {

/// Coordinate groups over {0..p-1} together with the derived weighting used
/// by the group norms: per-group weights w_g (group l2, default group size)
/// and per-coordinate weights wtilde_l = 1 / (number of groups containing l)
/// (overlap group l2). Immutable after construction.
class GroupStructure {
 public:
  /// `groups` holds 0-based coordinate indices. Indices must lie in [0, p)
  /// and be unique within each group; `group_weights`, when given, must have
  /// one positive entry per group. Empty groups and uncovered coordinates
  /// are representable here and reported by validate_groups().
  GroupStructure(Index p, std::vector<std::vector<Index>> groups,
                 std::optional<std::vector<double>> group_weights = std::nullopt);

  Index p() const { return p_; }
  std::size_t num_groups() const { return groups_.size(); }
  const std::vector<Index>& group(std::size_t g) const { return groups_[g]; }
  const std::vector<std::vector<Index>>& groups() const { return groups_; }

  /// Group weight w_g (defaults to the group size n_g).
  double group_weight(std::size_t g) const { return group_weights_[g]; }
  const std::vector<double>& group_weights() const { return group_weights_; }

  /// Number of groups containing coordinate l.
  int membership_count(Index l) const { return membership_[static_cast<std::size_t>(l)]; }

  /// wtilde_l; 0 for uncovered coordinates (flagged by validate_groups).
  double coordinate_weight(Index l) const { return wtilde_[static_cast<std::size_t>(l)]; }
  const std::vector<double>& coordinate_weights() const { return wtilde_; }

  /// c_g: entries of wtilde restricted to group g, aligned with group(g).
  const std::vector<double>& c(std::size_t g) const { return c_[g]; }

 private:
  Index p_;
  std::vector<std::vector<Index>> groups_;
  std::vector<double> group_weights_;
  std::vector<int> membership_;
  std::vector<double> wtilde_;
  std::vector<std::vector<double>> c_;
};

/// Report-style structural validation.
struct GroupValidationReport {
  std::vector<Index> uncovered_coordinates;  // in no group (0-based)
  std::vector<std::size_t> empty_groups;
  std::vector<Index> shared_coordinates;     // in more than one group
  bool coordinate_weights_consistent = true; // stored wtilde matches recomputation

  /// Usable as an overlap-group structure (every coordinate covered).
  bool valid_for_overlap() const {
    return uncovered_coordinates.empty() && empty_groups.empty() &&
           coordinate_weights_consistent;
  }
  /// Usable as a non-overlapping group structure (groups partition {1..p}).
  bool valid_for_partition() const {
    return valid_for_overlap() && shared_coordinates.empty();
  }

  std::string summary() const;
};

GroupValidationReport validate_groups(const GroupStructure& structure);

/// Parses the JSON document {"p": int, "groups": [[int,...],...],
/// "weights": [float,...] optional} with 1-based coordinate indices.
/// Structural problems beyond the schema itself are left to
/// validate_groups; schema violations throw ValidationError.
GroupStructure parse_group_structure(const std::string& json_text);

}  // namespace dualnorm
