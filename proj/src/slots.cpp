#include "bbs/slots.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bbs/error.hpp"

namespace bbs {

namespace {

constexpr int kRecordLevel = std::numeric_limits<int>::max();

const std::vector<Count>& zero_row() {
  static const std::vector<Count> kZero{0};
  return kZero;
}

Count row_sum(const std::vector<Count>& row) { return std::accumulate(row.begin(), row.end(), Count{0}); }

}  // namespace

// ---------------------------------------------------------------------------
// SlotDiagram

std::size_t slots_from_above(const std::vector<std::vector<Count>>& rows, int k) {
  std::size_t s = 1;
  for (int l = k + 1; l <= static_cast<int>(rows.size()); ++l) {
    s += 2 * static_cast<std::size_t>(l - k) * row_sum(rows[static_cast<std::size_t>(l - 1)]);
  }
  return s;
}

std::optional<std::string> SlotDiagram::check(const std::vector<std::vector<Count>>& rows) {
  if (rows.empty()) return std::nullopt;
  const int m = static_cast<int>(rows.size());
  if (rows.back().size() != 1) return "top row x_M must have exactly one entry";
  if (rows.back()[0] == 0) return "top row x_M(0) must be positive";
  for (int k = m - 1; k >= 1; --k) {
    const std::size_t expected = slots_from_above(rows, k);
    if (rows[static_cast<std::size_t>(k - 1)].size() != expected) {
      return "row " + std::to_string(k) + " has " + std::to_string(rows[static_cast<std::size_t>(k - 1)].size()) +
             " entries but the rows above require s_k = " + std::to_string(expected);
    }
  }
  return std::nullopt;
}

SlotDiagram::SlotDiagram(std::vector<std::vector<Count>> rows) {
  if (auto err = check(rows)) throw InputError("invalid slot diagram: " + *err);
  rows_ = std::move(rows);
}

std::span<const Count> SlotDiagram::row(int k) const {
  if (k < 1) throw std::out_of_range("slot diagram rows start at k = 1");
  if (k > max_size()) return zero_row();
  return rows_[static_cast<std::size_t>(k - 1)];
}

Count SlotDiagram::total(int k) const {
  const auto r = row(k);
  return std::accumulate(r.begin(), r.end(), Count{0});
}

Count SlotDiagram::half_length() const {
  Count n = 0;
  for (int k = 1; k <= max_size(); ++k) n += static_cast<Count>(k) * total(k);
  return n;
}

SlotDiagram SlotDiagram::reflected() const {
  SlotDiagram out;
  out.rows_ = rows_;
  for (auto& r : out.rows_) std::reverse(r.begin(), r.end());
  return out;
}

// ---------------------------------------------------------------------------
// Slots of an excursion

std::vector<int> slot_levels(const Excursion& excursion) {
  std::vector<int> levels(excursion.size(), 0);
  for (const Soliton& s : ts_decompose(excursion)) {
    for (int i = 0; i < s.size; ++i) {
      levels[static_cast<std::size_t>(s.head[static_cast<std::size_t>(i)] - 1)] = i;
      levels[static_cast<std::size_t>(s.tail[static_cast<std::size_t>(i)] - 1)] = i;
    }
  }
  return levels;
}

namespace {

std::vector<Coord> slot_positions_from_levels(const std::vector<int>& levels, int k) {
  std::vector<Coord> out{0};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= k) out.push_back(static_cast<Coord>(i) + 1);
  }
  return out;
}

}  // namespace

std::vector<Coord> slot_positions(const Excursion& excursion, int k) {
  if (k < 1) throw PreconditionError("slot level k must be positive");
  return slot_positions_from_levels(slot_levels(excursion), k);
}

SlotDiagram diagram_from_excursion(const Excursion& excursion) {
  const auto solitons = ts_decompose(excursion);
  if (solitons.empty()) return SlotDiagram{};
  std::vector<int> levels(excursion.size(), 0);
  int max_size = 0;
  for (const Soliton& s : solitons) {
    max_size = std::max(max_size, s.size);
    for (int i = 0; i < s.size; ++i) {
      levels[static_cast<std::size_t>(s.head[static_cast<std::size_t>(i)] - 1)] = i;
      levels[static_cast<std::size_t>(s.tail[static_cast<std::size_t>(i)] - 1)] = i;
    }
  }
  const Coord right_record = static_cast<Coord>(excursion.size()) + 1;
  std::vector<std::vector<Count>> rows(static_cast<std::size_t>(max_size));
  for (int k = max_size; k >= 1; --k) {
    auto positions = slot_positions_from_levels(levels, k);
    auto& row = rows[static_cast<std::size_t>(k - 1)];
    row.assign(positions.size(), 0);
    positions.push_back(right_record);
    for (const Soliton& s : solitons) {
      if (s.size != k) continue;
      // Appended to slot j when the support lies strictly inside (s_k(j), s_k(j+1)).
      const auto it = std::upper_bound(positions.begin(), positions.end(), s.first());
      const auto j = static_cast<std::size_t>(it - positions.begin()) - 1;
      if (s.last() >= positions[j + 1]) {
        throw std::logic_error("soliton support straddles a slot of its own size");
      }
      ++row[j];
    }
  }
  return SlotDiagram(std::move(rows));
}

Excursion excursion_from_diagram(const SlotDiagram& diagram) {
  // Box 0 is record 0; each box carries the largest k for which it is a k-slot.
  std::vector<Bit> bits{0};
  std::vector<int> levels{kRecordLevel};
  for (int k = diagram.max_size(); k >= 1; --k) {
    const auto row = diagram.row(k);
    const std::size_t added = 2 * static_cast<std::size_t>(k) * static_cast<std::size_t>(diagram.total(k));
    std::vector<Bit> next_bits;
    std::vector<int> next_levels;
    next_bits.reserve(bits.size() + added);
    next_levels.reserve(bits.size() + added);
    std::size_t j = 0;
    for (std::size_t z = 0; z < bits.size(); ++z) {
      next_bits.push_back(bits[z]);
      next_levels.push_back(levels[z]);
      if (levels[z] < k) continue;
      if (j >= row.size()) throw InputError("slot diagram row " + std::to_string(k) + " is too short");
      const Bit slot_value = bits[z];
      for (Count c = 0; c < row[j]; ++c) {
        for (int i = 0; i < k; ++i) {
          next_bits.push_back(static_cast<Bit>(1 - slot_value));
          next_levels.push_back(i);
        }
        for (int i = 0; i < k; ++i) {
          next_bits.push_back(slot_value);
          next_levels.push_back(i);
        }
      }
      ++j;
    }
    if (j != row.size()) throw InputError("slot diagram row " + std::to_string(k) + " is too long");
    bits = std::move(next_bits);
    levels = std::move(next_levels);
  }
  bits.erase(bits.begin());
  return Excursion::from_bits(std::move(bits));
}

BallConfig insert_soliton(const BallConfig& config, int k, std::size_t j, Count times) {
  if (k < 1) throw PreconditionError("soliton size must be positive");
  const RecordSet rs = records(config);
  if (!rs.contains(0)) throw PreconditionError("insert_soliton: no record at the origin");
  const auto solitons = ts_decompose(config);
  std::map<Coord, int> levels;
  for (const Soliton& s : solitons) {
    if (s.size < k) {
      throw PreconditionError("insert_soliton: configuration has a soliton smaller than " + std::to_string(k));
    }
    for (int i = 0; i < s.size; ++i) {
      levels[s.head[static_cast<std::size_t>(i)]] = i;
      levels[s.tail[static_cast<std::size_t>(i)]] = i;
    }
  }
  std::vector<Coord> slots;
  const Coord stop = std::max<Coord>(rs.upper, 1);
  for (Coord z = 0; z < stop; ++z) {
    if (rs.contains(z)) {
      slots.push_back(z);
    } else if (auto it = levels.find(z); it != levels.end() && it->second >= k) {
      slots.push_back(z);
    }
  }
  if (j >= slots.size()) {
    throw PreconditionError("insert_soliton: slot " + std::to_string(j) + " does not exist (" +
                            std::to_string(slots.size()) + " " + std::to_string(k) + "-slots)");
  }
  const Coord u = slots[j];
  const Coord width = 2 * static_cast<Coord>(k) * static_cast<Coord>(times);
  const Bit slot_value = config[u];
  const Coord from = std::min(config.origin(), u + 1);
  const Coord to = std::max(config.end(), u + 1) + width;
  std::vector<Bit> bits(static_cast<std::size_t>(to - from));
  for (Coord z = from; z < to; ++z) {
    Bit v;
    if (z <= u) {
      v = config[z];
    } else if (z <= u + width) {
      const Coord offset = (z - u - 1) % (2 * k);
      v = offset < k ? static_cast<Bit>(1 - slot_value) : slot_value;
    } else {
      v = config[z - width];
    }
    bits[static_cast<std::size_t>(z - from)] = v;
  }
  return BallConfig(from, std::move(bits));
}

// ---------------------------------------------------------------------------
// Sequences and component arrays

const SlotDiagram& DiagramSequence::at(std::int64_t i) const {
  static const SlotDiagram kEmpty;
  if (i < first_index || i >= end_index()) return kEmpty;
  return items[static_cast<std::size_t>(i - first_index)];
}

bool operator==(const DiagramSequence& a, const DiagramSequence& b) {
  const std::int64_t lo = std::min(a.first_index, b.first_index);
  const std::int64_t hi = std::max(a.end_index(), b.end_index());
  for (std::int64_t i = lo; i < hi; ++i) {
    if (!(a.at(i) == b.at(i))) return false;
  }
  return true;
}

Count ComponentArray::at(int k, std::int64_t j) const {
  const Row* r = row(k);
  return r ? r->at(j) : Count{0};
}

void ComponentArray::set_row(int k, Row row) {
  if (k < 1) throw InputError("component rows start at k = 1");
  rows_[k] = std::move(row);
}

const ComponentArray::Row* ComponentArray::row(int k) const {
  auto it = rows_.find(k);
  return it == rows_.end() ? nullptr : &it->second;
}

int ComponentArray::max_size() const {
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    const auto& v = it->second.values;
    if (std::any_of(v.begin(), v.end(), [](Count c) { return c > 0; })) return it->first;
  }
  return 0;
}

std::vector<Count> ComponentArray::trimmed(int k) const {
  const Row* r = row(k);
  if (!r) return {};
  auto first = std::find_if(r->values.begin(), r->values.end(), [](Count c) { return c > 0; });
  if (first == r->values.end()) return {};
  auto last = std::find_if(r->values.rbegin(), r->values.rend(), [](Count c) { return c > 0; }).base();
  return std::vector<Count>(first, last);
}

std::optional<std::int64_t> ComponentArray::first_nonzero(int k) const {
  const Row* r = row(k);
  if (!r) return std::nullopt;
  for (std::size_t i = 0; i < r->values.size(); ++i) {
    if (r->values[i] > 0) return r->offset + static_cast<std::int64_t>(i);
  }
  return std::nullopt;
}

bool operator==(const ComponentArray& a, const ComponentArray& b) {
  const int top = std::max(a.max_size(), b.max_size());
  for (int k = 1; k <= top; ++k) {
    if (a.first_nonzero(k) != b.first_nonzero(k) || a.trimmed(k) != b.trimmed(k)) return false;
  }
  return true;
}

ComponentArray concat_diagrams(const DiagramSequence& diagrams) {
  ComponentArray out;
  int top = 0;
  for (const auto& d : diagrams.items) top = std::max(top, d.max_size());
  const std::int64_t lo = std::min<std::int64_t>(diagrams.first_index, 0);
  const std::int64_t hi = std::max<std::int64_t>(diagrams.end_index(), 0);
  for (int k = 1; k <= top; ++k) {
    ComponentArray::Row row;
    std::int64_t before_zero = 0;
    for (std::int64_t i = lo; i < 0; ++i) before_zero += static_cast<std::int64_t>(diagrams.at(i).slots(k));
    row.offset = -before_zero;
    for (std::int64_t i = lo; i < hi; ++i) {
      const auto r = diagrams.at(i).row(k);
      row.values.insert(row.values.end(), r.begin(), r.end());
    }
    out.set_row(k, std::move(row));
  }
  return out;
}

namespace {

using Accessor = std::function<Count(int, std::int64_t)>;

// Slot diagrams x[phi^i zeta], i = 0, 1, ..., while any row has a nonzero entry at
// or beyond its cursor. `last_nonzero[k]` is the last nonzero label of row k (or -1).
std::vector<SlotDiagram> forward_diagrams(const Accessor& zeta, int top, const std::vector<std::int64_t>& last_nonzero) {
  std::vector<SlotDiagram> out;
  std::vector<std::int64_t> cursor(static_cast<std::size_t>(top) + 1, 0);
  auto pending = [&] {
    for (int k = 1; k <= top; ++k) {
      if (cursor[static_cast<std::size_t>(k)] <= last_nonzero[static_cast<std::size_t>(k)]) return true;
    }
    return false;
  };
  while (pending()) {
    int m = 0;
    for (int k = top; k >= 1; --k) {
      if (zeta(k, cursor[static_cast<std::size_t>(k)]) > 0) {
        m = k;
        break;
      }
    }
    std::vector<std::vector<Count>> rows(static_cast<std::size_t>(m));
    if (m > 0) {
      rows[static_cast<std::size_t>(m - 1)] = {zeta(m, cursor[static_cast<std::size_t>(m)])};
      for (int k = m - 1; k >= 1; --k) {
        const std::size_t s = slots_from_above(rows, k);
        auto& row = rows[static_cast<std::size_t>(k - 1)];
        row.resize(s);
        for (std::size_t j = 0; j < s; ++j) {
          row[j] = zeta(k, cursor[static_cast<std::size_t>(k)] + static_cast<std::int64_t>(j));
        }
      }
    }
    SlotDiagram d(std::move(rows));
    for (int k = 1; k <= top; ++k) cursor[static_cast<std::size_t>(k)] += static_cast<std::int64_t>(d.slots(k));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

DiagramSequence diagrams_from_components(const ComponentArray& components) {
  const int top = components.max_size();
  DiagramSequence out;
  if (top == 0) return out;

  std::vector<std::int64_t> last_pos(static_cast<std::size_t>(top) + 1, -1);
  std::vector<std::int64_t> last_neg(static_cast<std::size_t>(top) + 1, -1);
  for (int k = 1; k <= top; ++k) {
    const auto* r = components.row(k);
    if (!r) continue;
    for (std::int64_t j = r->offset; j < r->end(); ++j) {
      if (r->at(j) == 0) continue;
      if (j >= 0) {
        last_pos[static_cast<std::size_t>(k)] = std::max(last_pos[static_cast<std::size_t>(k)], j);
      } else {
        last_neg[static_cast<std::size_t>(k)] = std::max(last_neg[static_cast<std::size_t>(k)], -j - 1);
      }
    }
  }

  const Accessor forward = [&](int k, std::int64_t j) { return components.at(k, j); };
  const Accessor mirrored = [&](int k, std::int64_t j) { return components.at(k, -j - 1); };
  auto positive = forward_diagrams(forward, top, last_pos);
  auto negative = forward_diagrams(mirrored, top, last_neg);

  out.first_index = -static_cast<std::int64_t>(negative.size());
  out.items.reserve(negative.size() + positive.size());
  for (auto it = negative.rbegin(); it != negative.rend(); ++it) out.items.push_back(it->reflected());
  for (auto& d : positive) out.items.push_back(std::move(d));
  return out;
}

ComponentArray decompose(const BallConfig& config) {
  const ExcursionSequence excursions = excursions_from_config(config);
  DiagramSequence diagrams;
  diagrams.first_index = excursions.first_index;
  diagrams.items.reserve(excursions.items.size());
  for (const auto& e : excursions.items) diagrams.items.push_back(diagram_from_excursion(e));
  return concat_diagrams(diagrams);
}

BallConfig reconstruct(const ComponentArray& components) {
  const DiagramSequence diagrams = diagrams_from_components(components);
  ExcursionSequence excursions;
  excursions.first_index = diagrams.first_index;
  excursions.items.reserve(diagrams.items.size());
  for (const auto& d : diagrams.items) excursions.items.push_back(excursion_from_diagram(d));
  return config_from_excursions(excursions);
}

}  // namespace bbs
