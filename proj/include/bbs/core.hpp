#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bbs {

using Coord = std::int64_t;
using Bit = std::uint8_t;
using Count = std::uint64_t;

/// Finite window of a ball configuration; every box outside the window is empty.
///
/// Equality compares the sets of occupied boxes, so two configurations that
/// differ only in zero padding compare equal.
class BallConfig {
 public:
  BallConfig() = default;
  BallConfig(Coord origin, std::vector<Bit> bits);

  /// Parses a '0'/'1' string whose first character sits at box `origin`.
  static BallConfig parse(std::string_view text, Coord origin = 1);

  Coord origin() const { return origin_; }
  Coord end() const { return origin_ + static_cast<Coord>(bits_.size()); }
  std::size_t size() const { return bits_.size(); }
  std::span<const Bit> bits() const { return bits_; }

  Bit operator[](Coord z) const {
    return (z >= origin_ && z < end()) ? bits_[static_cast<std::size_t>(z - origin_)] : Bit{0};
  }

  std::size_t ball_count() const;
  bool has_balls() const { return ball_count() > 0; }

  /// Window contents as a '0'/'1' string.
  std::string str() const;
  /// Contents of boxes [from, to) as a '0'/'1' string.
  std::string str(Coord from, Coord to) const;

  /// Same configuration on the window [from, to); balls outside are an error.
  BallConfig rewindowed(Coord from, Coord to) const;
  /// Smallest window holding every ball (empty window at the old origin if none).
  BallConfig trimmed() const;
  BallConfig shifted(Coord by) const;

  friend bool operator==(const BallConfig& a, const BallConfig& b);

 private:
  Coord origin_ = 1;
  std::vector<Bit> bits_;
};

/// Walk xi with xi(z) - xi(z-1) = 2 eta(z) - 1, normalized by xi(0) = 0.
struct Walk {
  Coord origin = 1;        // box of the first stored step
  std::int64_t base = 0;   // xi(origin - 1)
  std::vector<int> steps;  // +1 / -1

  Coord end() const { return origin + static_cast<Coord>(steps.size()); }
  /// xi(z) for any z; outside the window every step is -1.
  std::int64_t at(Coord z) const;
  /// xi(origin), ..., xi(end - 1).
  std::vector<std::int64_t> values() const;
};

Walk walk_from_balls(const BallConfig& config);
BallConfig balls_from_walk(const Walk& walk);

/// Records of a finite configuration: z is a record when xi(z) < xi(z') for all z' < z.
struct RecordSet {
  Coord lower = 0;           // every z < lower is a record
  Coord upper = 0;           // every z >= upper is a record
  std::vector<Coord> inner;  // sorted records inside [lower, upper)

  bool contains(Coord z) const;
  /// All records in [from, to), sorted.
  std::vector<Coord> in_range(Coord from, Coord to) const;
};

RecordSet records(const BallConfig& config);

/// One sweep of the carrier (the operator T).
BallConfig evolve(const BallConfig& config);
BallConfig evolve(const BallConfig& config, int steps);

/// Number of balls on the carrier after it visits each box of the window.
std::vector<Count> carrier_trace(const BallConfig& config);

/// Nonnegative walk from 0 to 0, stored as the ball string of boxes 1..2n.
class Excursion {
 public:
  Excursion() = default;

  static Excursion from_bits(std::vector<Bit> bits);
  static Excursion from_steps(std::span<const int> steps);
  static Excursion parse(std::string_view text);
  /// Boxes (record, next record) of a configuration; throws unless they form an excursion.
  static Excursion from_config(const BallConfig& config, Coord record, Coord next_record);

  std::size_t half_length() const { return bits_.size() / 2; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::span<const Bit> bits() const { return bits_; }
  /// Bit of box z in 1..2n.
  Bit at(Coord z) const { return bits_[static_cast<std::size_t>(z - 1)]; }

  std::vector<int> steps() const;
  std::string str() const;
  /// Ball configuration with the excursion's left record at box `record`.
  BallConfig config(Coord record = 0) const;

  friend auto operator<=>(const Excursion&, const Excursion&) = default;
  friend bool operator==(const Excursion&, const Excursion&) = default;

 private:
  std::vector<Bit> bits_;
};

/// k balls (head) and k empty boxes (tail) identified by the Takahashi-Satsuma algorithm.
struct Soliton {
  int size = 0;
  std::vector<Coord> head;  // increasing
  std::vector<Coord> tail;  // increasing

  Coord first() const;
  Coord last() const;
  std::vector<Coord> support() const;
  bool head_first() const { return head.front() < tail.front(); }

  friend bool operator==(const Soliton&, const Soliton&) = default;
};

/// TS decomposition of an excursion, box coordinates 1..2n, sorted by first box.
std::vector<Soliton> ts_decompose(const Excursion& excursion);
/// TS decomposition of every excursion of a finite configuration, in absolute coordinates.
std::vector<Soliton> ts_decompose(const BallConfig& config);

using SolitonCounts = std::map<int, Count>;

SolitonCounts soliton_counts(const Excursion& excursion);
SolitonCounts soliton_counts(const BallConfig& config);

/// Windowed sequence of excursions; indices outside the window hold the empty excursion.
struct ExcursionSequence {
  std::int64_t first_index = 0;
  std::vector<Excursion> items;

  std::int64_t end_index() const { return first_index + static_cast<std::int64_t>(items.size()); }
  const Excursion& at(std::int64_t i) const;

  friend bool operator==(const ExcursionSequence& a, const ExcursionSequence& b);
};

/// Splits a configuration with a record at 0 into its excursions; excursion 0
/// lies between record 0 (the origin) and the next record.
ExcursionSequence excursions_from_config(const BallConfig& config);

/// Every excursion of half-length n, in lexicographic order of their ball strings.
std::vector<Excursion> all_excursions(std::size_t n);

/// Places record 0 at the origin and excursion i between records i and i+1.
/// Fills `record_positions` (if given) with r(eta, i) for i in [first, end].
BallConfig config_from_excursions(const ExcursionSequence& seq,
                                  std::vector<Coord>* record_positions = nullptr);

}  // namespace bbs
