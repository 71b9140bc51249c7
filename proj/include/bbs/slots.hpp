#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbs/core.hpp"

namespace bbs {

/// Slot diagram of one excursion: rows x_1..x_M of soliton counts per k-slot.
///
/// Row k has s_k = 1 + sum_{l>k} 2(l-k)|x_l| entries and x_M(0) > 0. Rows
/// above M are implicit (a single zero entry). Construction validates these
/// conditions and throws InputError on violation.
class SlotDiagram {
 public:
  SlotDiagram() = default;
  explicit SlotDiagram(std::vector<std::vector<Count>> rows);

  /// Reason the rows do not form a slot diagram, or nullopt when they do.
  static std::optional<std::string> check(const std::vector<std::vector<Count>>& rows);

  int max_size() const { return static_cast<int>(rows_.size()); }
  bool empty() const { return rows_.empty(); }
  const std::vector<std::vector<Count>>& rows() const { return rows_; }

  /// x_k for k >= 1 (a single zero when k > M).
  std::span<const Count> row(int k) const;
  /// s_k, the number of k-slots.
  std::size_t slots(int k) const { return row(k).size(); }
  /// |x_k|, the number of k-solitons.
  Count total(int k) const;
  /// Half-length n of the encoded excursion.
  Count half_length() const;

  /// x'_k(j) = x_k(s_k - j - 1).
  SlotDiagram reflected() const;

  friend bool operator==(const SlotDiagram&, const SlotDiagram&) = default;

 private:
  std::vector<std::vector<Count>> rows_;  // rows_[k-1] = x_k
};

/// Number of k-slots implied by the rows above k: 1 + sum_{l>k} 2(l-k)|x_l|.
std::size_t slots_from_above(const std::vector<std::vector<Count>>& rows, int k);

/// Positions s_k(eps, j), j = 0..s_k-1, of the k-slots of an excursion (record 0 at box 0).
std::vector<Coord> slot_positions(const Excursion& excursion, int k);

/// Largest k for which each box is a k-slot (-1 = record, i.e. every k; 0 = no slot).
/// Index z-1 holds box z of the excursion.
std::vector<int> slot_levels(const Excursion& excursion);

SlotDiagram diagram_from_excursion(const Excursion& excursion);
Excursion excursion_from_diagram(const SlotDiagram& diagram);

/// Inserts `times` k-solitons at k-slot j (slots counted from the record at the origin).
///
/// The configuration must have a record at 0 and no solitons smaller than k.
BallConfig insert_soliton(const BallConfig& config, int k, std::size_t j, Count times = 1);

/// Windowed sequence of slot diagrams; indices outside the window hold the empty diagram.
struct DiagramSequence {
  std::int64_t first_index = 0;
  std::vector<SlotDiagram> items;

  std::int64_t end_index() const { return first_index + static_cast<std::int64_t>(items.size()); }
  const SlotDiagram& at(std::int64_t i) const;

  friend bool operator==(const DiagramSequence& a, const DiagramSequence& b);
};

/// Soliton components zeta_k(j), stored as one finite label window per row.
///
/// Entries outside a row's window and rows that are absent are zero. Equality
/// ignores zero padding.
class ComponentArray {
 public:
  struct Row {
    std::int64_t offset = 0;   // label of values[0]
    std::vector<Count> values;

    std::int64_t end() const { return offset + static_cast<std::int64_t>(values.size()); }
    Count at(std::int64_t j) const {
      return (j >= offset && j < end()) ? values[static_cast<std::size_t>(j - offset)] : Count{0};
    }
  };

  Count at(int k, std::int64_t j) const;
  void set_row(int k, Row row);
  const std::map<int, Row>& rows() const { return rows_; }
  const Row* row(int k) const;

  /// Largest k with a nonzero entry (0 for the zero array).
  int max_size() const;
  bool is_zero() const { return max_size() == 0; }

  /// Row k with leading and trailing zeros removed.
  std::vector<Count> trimmed(int k) const;
  /// Label of the first nonzero entry of row k, if any.
  std::optional<std::int64_t> first_nonzero(int k) const;

  friend bool operator==(const ComponentArray& a, const ComponentArray& b);

 private:
  std::map<int, Row> rows_;
};

/// Glues slot diagrams row by row: zeta_k(S_k^(i) + j) = x_k^(i)(j), S_k^(0) = 0.
ComponentArray concat_diagrams(const DiagramSequence& diagrams);

/// Recovers the slot diagrams of a component array (hierarchical translation for
/// i >= 0, the reflected construction for i < 0).
DiagramSequence diagrams_from_components(const ComponentArray& components);

/// Soliton decomposition D of a finite configuration with a record at the origin.
ComponentArray decompose(const BallConfig& config);

/// D^{-1}: configuration with record 0 at the origin whose decomposition is `components`.
BallConfig reconstruct(const ComponentArray& components);

}  // namespace bbs
