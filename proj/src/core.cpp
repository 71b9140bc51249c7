#include "bbs/core.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>

#include "bbs/error.hpp"

namespace bbs {

// ---------------------------------------------------------------------------
// BallConfig

BallConfig::BallConfig(Coord origin, std::vector<Bit> bits) : origin_(origin), bits_(std::move(bits)) {
  for (Bit b : bits_) {
    if (b > 1) throw InputError("ball configuration entries must be 0 or 1");
  }
}

BallConfig BallConfig::parse(std::string_view text, Coord origin) {
  std::vector<Bit> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<Bit>(c - '0'));
    } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
      continue;
    } else {
      throw InputError(std::string("unexpected character '") + c + "' in ball configuration");
    }
  }
  return BallConfig(origin, std::move(bits));
}

std::size_t BallConfig::ball_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Bit{1}));
}

std::string BallConfig::str() const { return str(origin_, end()); }

std::string BallConfig::str(Coord from, Coord to) const {
  std::string out;
  if (to > from) out.reserve(static_cast<std::size_t>(to - from));
  for (Coord z = from; z < to; ++z) out.push_back(static_cast<char>('0' + (*this)[z]));
  return out;
}

BallConfig BallConfig::rewindowed(Coord from, Coord to) const {
  if (to < from) to = from;
  for (Coord z = origin_; z < end(); ++z) {
    if ((*this)[z] && (z < from || z >= to)) {
      throw std::out_of_range("rewindowed: window does not cover every ball");
    }
  }
  std::vector<Bit> bits(static_cast<std::size_t>(to - from));
  for (Coord z = from; z < to; ++z) bits[static_cast<std::size_t>(z - from)] = (*this)[z];
  return BallConfig(from, std::move(bits));
}

BallConfig BallConfig::trimmed() const {
  auto first = std::find(bits_.begin(), bits_.end(), Bit{1});
  if (first == bits_.end()) return BallConfig(origin_, {});
  auto last = std::find(bits_.rbegin(), bits_.rend(), Bit{1}).base();
  return BallConfig(origin_ + (first - bits_.begin()), std::vector<Bit>(first, last));
}

BallConfig BallConfig::shifted(Coord by) const { return BallConfig(origin_ + by, bits_); }

bool operator==(const BallConfig& a, const BallConfig& b) {
  const BallConfig ta = a.trimmed();
  const BallConfig tb = b.trimmed();
  if (ta.bits_.empty() || tb.bits_.empty()) return ta.bits_.empty() && tb.bits_.empty();
  return ta.origin_ == tb.origin_ && ta.bits_ == tb.bits_;
}

// ---------------------------------------------------------------------------
// Walks and records

std::int64_t Walk::at(Coord z) const {
  if (z < origin) return base + (origin - 1 - z);
  std::int64_t h = base;
  const Coord stop = std::min(z, end() - 1);
  for (Coord y = origin; y <= stop; ++y) h += steps[static_cast<std::size_t>(y - origin)];
  if (z >= end()) h -= (z - end() + 1);
  return h;
}

std::vector<std::int64_t> Walk::values() const {
  std::vector<std::int64_t> out;
  out.reserve(steps.size());
  std::int64_t h = base;
  for (int s : steps) {
    h += s;
    out.push_back(h);
  }
  return out;
}

Walk walk_from_balls(const BallConfig& config) {
  Walk w;
  w.origin = config.origin();
  w.steps.reserve(config.size());
  for (Bit b : config.bits()) w.steps.push_back(2 * static_cast<int>(b) - 1);
  w.base = 0;
  w.base = -w.at(0);
  return w;
}

BallConfig balls_from_walk(const Walk& walk) {
  std::vector<Bit> bits;
  bits.reserve(walk.steps.size());
  for (int s : walk.steps) {
    if (s != 1 && s != -1) throw InputError("walk steps must be +1 or -1");
    bits.push_back(s > 0 ? Bit{1} : Bit{0});
  }
  return BallConfig(walk.origin, std::move(bits));
}

bool RecordSet::contains(Coord z) const {
  if (z < lower || z >= upper) return true;
  return std::binary_search(inner.begin(), inner.end(), z);
}

std::vector<Coord> RecordSet::in_range(Coord from, Coord to) const {
  std::vector<Coord> out;
  for (Coord z = from; z < std::min(to, lower); ++z) out.push_back(z);
  for (Coord z : inner) {
    if (z >= from && z < to) out.push_back(z);
  }
  for (Coord z = std::max(from, upper); z < to; ++z) out.push_back(z);
  return out;
}

RecordSet records(const BallConfig& config) {
  RecordSet rs;
  rs.lower = config.origin();
  // Heights relative to xi(origin - 1); everything left of the window is higher.
  std::int64_t h = 0;
  std::int64_t running_min = 0;
  Coord z = config.origin();
  for (Bit b : config.bits()) {
    h += b ? 1 : -1;
    if (h < running_min) {
      rs.inner.push_back(z);
      running_min = h;
    }
    ++z;
  }
  rs.upper = config.end() + (h - running_min);
  return rs;
}

BallConfig evolve(const BallConfig& config) {
  const RecordSet rs = records(config);
  const Coord from = config.origin();
  const Coord to = std::max(config.end(), rs.upper);
  std::vector<Bit> out(static_cast<std::size_t>(to - from));
  for (Coord z = from; z < to; ++z) {
    out[static_cast<std::size_t>(z - from)] = rs.contains(z) ? Bit{0} : static_cast<Bit>(1 - config[z]);
  }
  return BallConfig(from, std::move(out));
}

BallConfig evolve(const BallConfig& config, int steps) {
  if (steps < 0) throw PreconditionError("evolve: negative number of steps");
  BallConfig current = config;
  for (int t = 0; t < steps; ++t) current = evolve(current);
  return current;
}

std::vector<Count> carrier_trace(const BallConfig& config) {
  std::vector<Count> loads;
  loads.reserve(config.size());
  Count load = 0;
  for (Bit b : config.bits()) {
    if (b) {
      ++load;
    } else if (load > 0) {
      --load;
    }
    loads.push_back(load);
  }
  return loads;
}

// ---------------------------------------------------------------------------
// Excursions

Excursion Excursion::from_bits(std::vector<Bit> bits) {
  if (bits.size() % 2 != 0) throw InputError("excursion must have even length");
  std::int64_t h = 0;
  for (Bit b : bits) {
    if (b > 1) throw InputError("excursion entries must be 0 or 1");
    h += b ? 1 : -1;
    if (h < 0) throw InputError("excursion walk goes below zero");
  }
  if (h != 0) throw InputError("excursion walk does not return to zero");
  Excursion e;
  e.bits_ = std::move(bits);
  return e;
}

Excursion Excursion::from_steps(std::span<const int> steps) {
  std::vector<Bit> bits;
  bits.reserve(steps.size());
  for (int s : steps) {
    if (s != 1 && s != -1) throw InputError("excursion steps must be +1 or -1");
    bits.push_back(s > 0 ? Bit{1} : Bit{0});
  }
  return from_bits(std::move(bits));
}

Excursion Excursion::parse(std::string_view text) {
  const BallConfig parsed = BallConfig::parse(text);
  return from_bits(std::vector<Bit>(parsed.bits().begin(), parsed.bits().end()));
}

Excursion Excursion::from_config(const BallConfig& config, Coord record, Coord next_record) {
  std::vector<Bit> bits;
  for (Coord z = record + 1; z < next_record; ++z) bits.push_back(config[z]);
  return from_bits(std::move(bits));
}

std::vector<int> Excursion::steps() const {
  std::vector<int> out;
  out.reserve(bits_.size());
  for (Bit b : bits_) out.push_back(b ? 1 : -1);
  return out;
}

std::string Excursion::str() const {
  std::string out;
  out.reserve(bits_.size());
  for (Bit b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

BallConfig Excursion::config(Coord record) const { return BallConfig(record + 1, bits_); }

// ---------------------------------------------------------------------------
// Takahashi-Satsuma

Coord Soliton::first() const { return std::min(head.front(), tail.front()); }
Coord Soliton::last() const { return std::max(head.back(), tail.back()); }

std::vector<Coord> Soliton::support() const {
  std::vector<Coord> out;
  out.reserve(head.size() + tail.size());
  std::merge(head.begin(), head.end(), tail.begin(), tail.end(), std::back_inserter(out));
  return out;
}

namespace {

// Runs kept in a doubly linked list; the finite ones are indexed by
// (length, first box) so the leftmost smallest run is the set's first element.
class RunList {
 public:
  explicit RunList(const Excursion& e) {
    // Left semi-infinite run of empty boxes.
    runs_.push_back(Run{0, {}, false, -1, -1, true});
    const auto bits = e.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const Coord z = static_cast<Coord>(i) + 1;
      Run& back = runs_.back();
      if (runs_.size() > 1 && back.value == bits[i]) {
        back.boxes.push_back(z);
      } else {
        const int idx = static_cast<int>(runs_.size());
        runs_.back().next = idx;
        runs_.push_back(Run{bits[i], {z}, true, idx - 1, -1, true});
      }
    }
    // The trailing run of empty boxes continues to +infinity.
    if (runs_.size() > 1) runs_.back().finite = false;
    for (std::size_t i = 1; i < runs_.size(); ++i) index(static_cast<int>(i));
  }

  std::vector<Soliton> decompose() {
    std::vector<Soliton> out;
    while (!keys_.empty()) {
      const auto [len, first, idx] = *keys_.begin();
      const int k = static_cast<int>(len);
      const int nx = runs_[idx].next;
      if (nx < 0 || runs_[nx].boxes.size() < len) {
        throw std::logic_error("Takahashi-Satsuma: successive run too short");
      }
      Soliton s;
      s.size = k;
      std::vector<Coord> taken(runs_[nx].boxes.begin(), runs_[nx].boxes.begin() + k);
      std::vector<Coord> own(runs_[idx].boxes.begin(), runs_[idx].boxes.end());
      if (runs_[idx].value == 1) {
        s.head = std::move(own);
        s.tail = std::move(taken);
      } else {
        s.tail = std::move(own);
        s.head = std::move(taken);
      }
      out.push_back(std::move(s));

      unindex(idx);
      unindex(nx);
      auto& next_boxes = runs_[nx].boxes;
      next_boxes.erase(next_boxes.begin(), next_boxes.begin() + k);
      const int before = runs_[idx].prev;
      unlink(idx);
      if (next_boxes.empty() && runs_[nx].finite) {
        unlink(nx);
      } else {
        // The neighbours of the removed run carry the same value.
        merge(before, nx);
      }
      if (before >= 0 && runs_[before].alive) index(before);
    }
    std::sort(out.begin(), out.end(), [](const Soliton& a, const Soliton& b) { return a.first() < b.first(); });
    return out;
  }

 private:
  struct Run {
    Bit value;
    std::deque<Coord> boxes;
    bool finite;
    int prev;
    int next;
    bool alive;
  };
  using Key = std::tuple<std::size_t, Coord, int>;

  Key key(int i) const { return {runs_[i].boxes.size(), runs_[i].boxes.front(), i}; }

  void index(int i) {
    if (runs_[i].alive && runs_[i].finite && !runs_[i].boxes.empty()) keys_.insert(key(i));
  }
  void unindex(int i) {
    if (runs_[i].finite && !runs_[i].boxes.empty()) keys_.erase(key(i));
  }

  void unlink(int i) {
    Run& r = runs_[i];
    if (r.prev >= 0) runs_[r.prev].next = r.next;
    if (r.next >= 0) runs_[r.next].prev = r.prev;
    r.alive = false;
  }

  // Absorbs run `right` into its left neighbour `left`.
  void merge(int left, int right) {
    if (left < 0) return;
    Run& l = runs_[left];
    Run& r = runs_[right];
    unindex(left);
    if (l.boxes.size() >= r.boxes.size()) {
      l.boxes.insert(l.boxes.end(), r.boxes.begin(), r.boxes.end());
    } else {
      r.boxes.insert(r.boxes.begin(), l.boxes.begin(), l.boxes.end());
      l.boxes.swap(r.boxes);
    }
    l.finite = l.finite && r.finite;
    unlink(right);
  }

  std::vector<Run> runs_;
  std::set<Key> keys_;
};

// Record positions from the last record left of the window to the first
// record after which every box is a record.
std::vector<Coord> record_chain(const BallConfig& config, Coord from, Coord to_inclusive) {
  return records(config).in_range(from, to_inclusive + 1);
}

}  // namespace

std::vector<Soliton> ts_decompose(const Excursion& excursion) {
  if (excursion.empty()) return {};
  return RunList(excursion).decompose();
}

std::vector<Soliton> ts_decompose(const BallConfig& config) {
  const RecordSet rs = records(config);
  const auto chain = rs.in_range(config.origin() - 1, rs.upper + 1);
  std::vector<Soliton> out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i + 1] == chain[i] + 1) continue;
    const Excursion e = Excursion::from_config(config, chain[i], chain[i + 1]);
    for (Soliton s : ts_decompose(e)) {
      for (Coord& z : s.head) z += chain[i];
      for (Coord& z : s.tail) z += chain[i];
      out.push_back(std::move(s));
    }
  }
  return out;
}

SolitonCounts soliton_counts(const Excursion& excursion) {
  SolitonCounts counts;
  for (const Soliton& s : ts_decompose(excursion)) ++counts[s.size];
  return counts;
}

SolitonCounts soliton_counts(const BallConfig& config) {
  SolitonCounts counts;
  for (const Soliton& s : ts_decompose(config)) ++counts[s.size];
  return counts;
}

// ---------------------------------------------------------------------------
// Excursion sequences

const Excursion& ExcursionSequence::at(std::int64_t i) const {
  static const Excursion kEmpty;
  if (i < first_index || i >= end_index()) return kEmpty;
  return items[static_cast<std::size_t>(i - first_index)];
}

bool operator==(const ExcursionSequence& a, const ExcursionSequence& b) {
  const std::int64_t lo = std::min(a.first_index, b.first_index);
  const std::int64_t hi = std::max(a.end_index(), b.end_index());
  for (std::int64_t i = lo; i < hi; ++i) {
    if (!(a.at(i) == b.at(i))) return false;
  }
  return true;
}

ExcursionSequence excursions_from_config(const BallConfig& config) {
  const RecordSet rs = records(config);
  if (!rs.contains(0)) throw PreconditionError("configuration has no record at the origin");
  const Coord start = std::min<Coord>(config.origin() - 1, 0);
  const Coord stop = std::max<Coord>(rs.upper, 0);
  const auto chain = record_chain(config, start, stop);
  const auto zero = std::lower_bound(chain.begin(), chain.end(), Coord{0});
  ExcursionSequence seq;
  seq.first_index = -static_cast<std::int64_t>(zero - chain.begin());
  seq.items.reserve(chain.size() - 1);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    seq.items.push_back(Excursion::from_config(config, chain[i], chain[i + 1]));
  }
  return seq;
}

BallConfig config_from_excursions(const ExcursionSequence& seq, std::vector<Coord>* record_positions) {
  const std::int64_t lo = std::min<std::int64_t>(seq.first_index, 0);
  const std::int64_t hi = std::max<std::int64_t>(seq.end_index(), 0);
  // r[i - lo] = r(eta, i) for i in [lo, hi].
  std::vector<Coord> r(static_cast<std::size_t>(hi - lo + 1));
  r[static_cast<std::size_t>(-lo)] = 0;
  for (std::int64_t i = 0; i < hi; ++i) {
    r[static_cast<std::size_t>(i + 1 - lo)] =
        r[static_cast<std::size_t>(i - lo)] + 2 * static_cast<Coord>(seq.at(i).half_length()) + 1;
  }
  for (std::int64_t i = -1; i >= lo; --i) {
    r[static_cast<std::size_t>(i - lo)] =
        r[static_cast<std::size_t>(i + 1 - lo)] - 2 * static_cast<Coord>(seq.at(i).half_length()) - 1;
  }
  const Coord from = r[static_cast<std::size_t>(seq.first_index - lo)] + 1;
  const Coord to = std::max(from, r[static_cast<std::size_t>(seq.end_index() - lo)]);
  std::vector<Bit> bits(static_cast<std::size_t>(to - from), Bit{0});
  for (std::int64_t i = seq.first_index; i < seq.end_index(); ++i) {
    const Coord base = r[static_cast<std::size_t>(i - lo)];
    const auto eb = seq.at(i).bits();
    for (std::size_t z = 0; z < eb.size(); ++z) {
      bits[static_cast<std::size_t>(base + 1 + static_cast<Coord>(z) - from)] = eb[z];
    }
  }
  if (record_positions) {
    record_positions->assign(r.begin() + (seq.first_index - lo), r.begin() + (seq.end_index() - lo) + 1);
  }
  return BallConfig(from, std::move(bits));
}

std::vector<Excursion> all_excursions(std::size_t n) {
  std::vector<Excursion> out;
  std::vector<Bit> word(2 * n);
  // Depth-first over prefixes; '0' < '1' so zeros are tried first.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t ups, std::size_t height) -> void {
    if (pos == 2 * n) {
      out.push_back(Excursion::from_bits(word));
      return;
    }
    if (height > 0) {
      word[pos] = 0;
      self(self, pos + 1, ups, height - 1);
    }
    if (ups < n) {
      word[pos] = 1;
      self(self, pos + 1, ups + 1, height + 1);
    }
  };
  rec(rec, 0, 0, 0);
  return out;
}

}  // namespace bbs
