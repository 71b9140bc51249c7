#include <doctest.h>

#include <functional>
#include <set>

#include "../fixtures.hpp"
#include "bbs/error.hpp"
#include "bbs/rng.hpp"
#include "bbs/slots.hpp"
#include "oracles.hpp"

using namespace bbs;
using fixtures::Rows;

namespace {

// Every slot diagram with maximal size <= max_size and at most max_solitons solitons.
void for_each_diagram(int max_size, int max_solitons, const std::function<void(const SlotDiagram&)>& f) {
  f(SlotDiagram());
  for (int M = 1; M <= max_size; ++M) {
    Rows rows(static_cast<std::size_t>(M));
    std::function<void(int, int)> fill_row;
    // Distributes `n` solitons over the s_k slots of row k, then recurses to k - 1.
    std::function<void(int, std::size_t, Count, int)> distribute = [&](int k, std::size_t j, Count n, int left) {
      auto& row = rows[static_cast<std::size_t>(k - 1)];
      if (j + 1 == row.size()) {
        row[j] = n;
        fill_row(k - 1, left);
        return;
      }
      for (Count c = 0; c <= n; ++c) {
        row[j] = c;
        distribute(k, j + 1, n - c, left);
      }
    };
    fill_row = [&](int k, int left) {
      if (k == 0) {
        f(SlotDiagram(rows));
        return;
      }
      const std::size_t s = slots_from_above(rows, k);
      rows[static_cast<std::size_t>(k - 1)].assign(s, 0);
      for (int n = (k == M ? 1 : 0); n <= left; ++n) distribute(k, 0, static_cast<Count>(n), left - n);
    };
    fill_row(M, max_solitons);
  }
}

SlotDiagram random_diagram(Rng& rng) {
  if (rng.bernoulli(0.2)) return SlotDiagram();
  return diagram_from_excursion(Excursion::parse(oracle::random_excursion(rng, 1 + rng.below(8))));
}

}  // namespace

TEST_CASE("slot diagram validation") {
  CHECK_NOTHROW(SlotDiagram(fixtures::kSampleRows));
  CHECK_THROWS_AS(SlotDiagram(Rows{{1}, {0}}), InputError);           // x_M(0) = 0
  CHECK_THROWS_AS(SlotDiagram(Rows{{1, 0}, {1}}), InputError);        // s_1 should be 3
  CHECK_THROWS_AS(SlotDiagram(Rows{{0, 0, 0}, {2}}), InputError);     // s_1 should be 5
  CHECK(SlotDiagram::check(Rows{{0, 0, 0, 0, 0}, {2}}) == std::nullopt);
  const SlotDiagram d(fixtures::kSampleRows);
  CHECK(d.max_size() == 4);
  CHECK(d.slots(4) == 1);
  CHECK(d.slots(3) == 3);
  CHECK(d.slots(2) == 5);
  CHECK(d.slots(1) == 9);
  CHECK(d.slots(7) == 1);
  CHECK(d.total(1) == 2);
  CHECK(d.half_length() == 8);
  CHECK(d.reflected().row(1)[6] == 1);
  CHECK(d.reflected().reflected() == d);
}

TEST_CASE("slots of the sample excursion") {
  const auto e = Excursion::parse(fixtures::kSample);
  CHECK(slot_positions(e, 4) == std::vector<Coord>{0});
  CHECK(slot_positions(e, 1).size() == 9);
  CHECK(slot_positions(e, 2).size() == 5);
  CHECK(slot_positions(e, 3).size() == 3);
  CHECK(slot_positions(Excursion(), 2) == std::vector<Coord>{0});
  CHECK(diagram_from_excursion(e).rows() == fixtures::kSampleRows);
  CHECK(excursion_from_diagram(SlotDiagram(fixtures::kSampleRows)).str() == fixtures::kSample);
}

TEST_CASE("worked insertion chain") {
  BallConfig c;
  for (const auto& step : fixtures::kWorkedChain) {
    c = insert_soliton(c, step.k, step.slot, step.times);
    CHECK(c == BallConfig::parse(step.result));
  }
  const SlotDiagram x(fixtures::kWorkedRows);
  const auto e = excursion_from_diagram(x);
  CHECK(e.str() == fixtures::kWorkedExcursion);
  CHECK(diagram_from_excursion(e) == x);
  CHECK(soliton_counts(e) == (SolitonCounts{{1, 11}, {2, 1}, {3, 2}}));
  CHECK(diagram_from_excursion(Excursion::parse(fixtures::kShiftedWorked)).rows() == fixtures::kShiftedWorkedRows);
}

TEST_CASE("insert_soliton preconditions and simple cases") {
  CHECK(insert_soliton(BallConfig(), 1, 0) == BallConfig::parse("10"));
  CHECK_THROWS_AS(insert_soliton(BallConfig::parse("10"), 2, 0), PreconditionError);
  CHECK_THROWS_AS(insert_soliton(BallConfig::parse("111000"), 1, 9), PreconditionError);
  CHECK_THROWS_AS(insert_soliton(BallConfig::parse("10", 0), 1, 0), PreconditionError);
  SUBCASE("descending labels reproduce the diagram construction") {
    auto c = insert_soliton(BallConfig(), 3, 0, 2);
    c = insert_soliton(c, 2, 4);
    c = insert_soliton(c, 2, 1);
    const SlotDiagram x(Rows{std::vector<Count>(13, 0), {0, 1, 0, 0, 1}, {2}});
    CHECK(c == excursion_from_diagram(x).config());
  }
}

TEST_CASE("simple diagrams") {
  CHECK(excursion_from_diagram(SlotDiagram()).empty());
  CHECK(diagram_from_excursion(Excursion()).empty());
  for (Count m = 1; m <= 5; ++m) {
    std::string s;
    for (Count i = 0; i < m; ++i) s += "10";
    CHECK(excursion_from_diagram(SlotDiagram(Rows{{m}})).str() == s);
  }
  CHECK_THROWS_AS(SlotDiagram(Rows{{0, 0}, {1}}), InputError);
}

TEST_CASE("diagram construction agrees with the slot definition") {
  for (std::size_t n = 0; n <= 8; ++n) {
    for (const auto& e : all_excursions(n)) CHECK(diagram_from_excursion(e).rows() == oracle::diagram(e.str()));
  }
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const auto s = oracle::random_excursion(rng, 30 + rng.below(40));
    CHECK(diagram_from_excursion(Excursion::parse(s)).rows() == oracle::diagram(s));
  }
}

TEST_CASE("bijection from excursions") {
  for (std::size_t n = 0; n <= 7; ++n) {
    for (const auto& e : all_excursions(n)) {
      const auto x = diagram_from_excursion(e);
      CHECK(x.half_length() == n);
      for (int k = 1; k <= x.max_size(); ++k) CHECK(x.total(k) == soliton_counts(e)[k]);
      CHECK(excursion_from_diagram(x) == e);
    }
  }
}

TEST_CASE("bijection from diagrams") {
  std::set<std::string> seen;
  std::map<Count, std::size_t> by_length;
  std::size_t count = 0;
  for_each_diagram(4, 5, [&](const SlotDiagram& x) {
    ++count;
    const auto e = excursion_from_diagram(x);
    CHECK(diagram_from_excursion(e) == x);
    CHECK(seen.insert(e.str()).second);
  });
  CHECK(count == seen.size());
  // Diagrams counted by half-length reproduce the Catalan numbers.
  std::map<Count, std::size_t> n_count;
  for_each_diagram(6, 6, [&](const SlotDiagram& x) { ++n_count[x.half_length()]; });
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (Count n = 0; n <= 6; ++n) CHECK(n_count[n] == catalan[n]);
}

TEST_CASE("concatenation") {
  SUBCASE("single diagram at index 0") {
    const SlotDiagram x(fixtures::kSampleRows);
    const auto z = concat_diagrams({0, {x}});
    for (int k = 1; k <= 4; ++k) {
      for (std::int64_t j = -3; j < 12; ++j) {
        const auto r = x.row(k);
        const Count want = (j >= 0 && j < static_cast<std::int64_t>(r.size())) ? r[static_cast<std::size_t>(j)] : 0;
        CHECK(z.at(k, j) == want);
      }
    }
  }
  SUBCASE("two copies agree with the decomposition of the concatenated configuration") {
    const SlotDiagram x(fixtures::kSampleRows);
    const auto z = concat_diagrams({0, {x, x}});
    for (int k = 1; k <= 4; ++k) CHECK(z.row(k)->values.size() == 2 * x.slots(k));
    const auto e = Excursion::parse(fixtures::kSample);
    CHECK(decompose(config_from_excursions({0, {e, e}})) == z);
  }
  SUBCASE("negative indices sit left of label 0") {
    const SlotDiagram x(Rows{{0, 2, 0}, {1}});
    const auto z = concat_diagrams({-1, {x}});
    CHECK(z.row(1)->offset == -3);
    CHECK(z.at(1, -2) == 2);
    CHECK(z.at(2, -1) == 1);
  }
  SUBCASE("zero array") {
    CHECK(diagrams_from_components(ComponentArray()).items.empty());
    CHECK(concat_diagrams({0, {SlotDiagram(), SlotDiagram()}}).is_zero());
  }
}

TEST_CASE("components back to diagrams") {
  SUBCASE("six-diagram window") {
    const auto seq = fixtures::six_diagram_window();
    const auto z = concat_diagrams(seq);
    const auto back = diagrams_from_components(z);
    CHECK(back == seq);
    CHECK(back.first_index == -2);
    CHECK(back.items.size() == 4);
    CHECK(concat_diagrams(back) == z);
  }
  SUBCASE("random windows") {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
      DiagramSequence seq;
      seq.first_index = -static_cast<std::int64_t>(rng.below(5));
      const std::size_t len = rng.below(8);
      for (std::size_t i = 0; i < len; ++i) seq.items.push_back(random_diagram(rng));
      const auto z = concat_diagrams(seq);
      CHECK(diagrams_from_components(z) == seq);
    }
  }
  SUBCASE("mirror-symmetric arrays give reflected diagrams") {
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
      std::vector<SlotDiagram> half;
      const std::size_t n = 1 + rng.below(4);
      for (std::size_t i = 0; i < n; ++i) half.push_back(random_diagram(rng));
      DiagramSequence seq{-static_cast<std::int64_t>(n), {}};
      for (auto it = half.rbegin(); it != half.rend(); ++it) seq.items.push_back(it->reflected());
      for (const auto& d : half) seq.items.push_back(d);
      const auto z = concat_diagrams(seq);
      for (const auto& [k, row] : z.rows()) {
        for (std::int64_t j = 0; j < row.end(); ++j) CHECK(z.at(k, j) == z.at(k, -j - 1));
      }
      const auto back = diagrams_from_components(z);
      for (std::int64_t i = 0; i < back.end_index(); ++i) CHECK(back.at(-i - 1) == back.at(i).reflected());
    }
  }
}

TEST_CASE("decompose and reconstruct") {
  CHECK(decompose(BallConfig()).is_zero());
  CHECK(reconstruct(ComponentArray()) == BallConfig());
  ComponentArray one;
  one.set_row(1, {0, {1}});
  CHECK(reconstruct(one) == BallConfig::parse("10"));
  CHECK_THROWS_AS(decompose(BallConfig::parse("10", 0)), PreconditionError);

  const auto blocks = fixtures::three_block_window();
  const auto cfg = config_from_excursions(blocks);
  const auto z = decompose(cfg);
  CHECK(z.max_size() == 4);
  CHECK(soliton_counts(cfg) == (SolitonCounts{{1, 4}, {2, 1}, {3, 1}, {4, 1}}));
  CHECK(reconstruct(z) == cfg);

  Rng rng(13);
  for (int t = 0; t < 1000; ++t) {
    const std::string s = oracle::random_config(rng, rng.below(80), 0.35);
    const auto c = BallConfig::parse(s, 1);
    const auto d = decompose(c);
    CHECK(reconstruct(d) == c);
    CHECK(decompose(reconstruct(d)) == d);
  }
  for (int t = 0; t < 200; ++t) {
    ExcursionSequence seq{-static_cast<std::int64_t>(rng.below(4)), {}};
    for (std::size_t i = rng.below(7); i > 0; --i) seq.items.push_back(Excursion::parse(oracle::random_excursion(rng, rng.below(6))));
    const auto c = config_from_excursions(seq);
    CHECK(reconstruct(decompose(c)) == c);
  }
}
