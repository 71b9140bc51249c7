#include <doctest.h>

#include "bbs/core.hpp"
#include "bbs/error.hpp"
#include "bbs/rng.hpp"
#include "oracles.hpp"

using namespace bbs;

namespace {

std::string loads_str(const std::vector<Count>& loads) {
  std::string s;
  for (Count c : loads) s += std::to_string(c);
  return s;
}

std::vector<oracle::Sol> as_oracle(const std::vector<Soliton>& sols) {
  std::vector<oracle::Sol> out;
  for (const auto& s : sols) out.push_back({s.size, s.head, s.tail});
  return out;
}

bool same(const std::vector<oracle::Sol>& a, const std::vector<oracle::Sol>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].k != b[i].k || a[i].head != b[i].head || a[i].tail != b[i].tail) return false;
  }
  return true;
}

const char* kCarrierIn = "01101011010001111010000";
const char* kFigOne = "1110110010110000";

}  // namespace

TEST_CASE("parse and print") {
  const auto c = BallConfig::parse("0110", 5);
  CHECK(c.origin() == 5);
  CHECK(c.end() == 9);
  CHECK(c[6] == 1);
  CHECK(c[4] == 0);
  CHECK(c[100] == 0);
  CHECK(c.str() == "0110");
  CHECK(c.str(3, 11) == "00011000");
  CHECK(c.ball_count() == 2);
  CHECK_THROWS_AS(BallConfig::parse("01x"), InputError);
}

TEST_CASE("equality ignores zero padding") {
  CHECK(BallConfig::parse("0110", 1) == BallConfig::parse("11", 2));
  CHECK(BallConfig::parse("00", 7) == BallConfig());
  CHECK_FALSE(BallConfig::parse("11", 1) == BallConfig::parse("11", 2));
  CHECK(BallConfig::parse("101", 3).rewindowed(-2, 10).str() == "000001010000");
  CHECK_THROWS(BallConfig::parse("101", 3).rewindowed(4, 10));
}

TEST_CASE("walk encoding") {
  SUBCASE("empty configuration decreases by one per box") {
    const auto w = walk_from_balls(BallConfig::parse("0000", 1));
    CHECK(w.values() == std::vector<std::int64_t>{-1, -2, -3, -4});
    CHECK(w.at(0) == 0);
    CHECK(w.at(-3) == 3);
  }
  SUBCASE("single 1-soliton returns to its start") {
    const auto w = walk_from_balls(BallConfig::parse("10", 1));
    CHECK(w.steps == std::vector<int>{1, -1});
    CHECK(w.at(2) == w.at(0));
  }
  SUBCASE("normalization with the origin outside the window") {
    const auto w = walk_from_balls(BallConfig::parse("11", 4));
    CHECK(w.at(0) == 0);
    CHECK(w.at(3) == -3);
    CHECK(w.at(5) == -1);
    CHECK(w.at(8) == -4);
  }
  SUBCASE("partial minima of the carrier example are its records") {
    const std::string s = kCarrierIn;
    const auto w = walk_from_balls(BallConfig::parse(s));
    std::int64_t h = 0, lo = 0;
    std::vector<Coord> minima;
    for (Coord z = 1; z <= static_cast<Coord>(s.size()); ++z) {
      h += s[z - 1] == '1' ? 1 : -1;
      CHECK(w.at(z) == h);
      if (h < lo) {
        lo = h;
        minima.push_back(z);
      }
    }
    CHECK(records(BallConfig::parse(s)).in_range(1, static_cast<Coord>(s.size()) + 1) == minima);
  }
  SUBCASE("round trip") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
      const auto c = BallConfig::parse(oracle::random_config(rng, rng.below(40), 0.4), static_cast<Coord>(rng.below(9)) - 4);
      const auto back = balls_from_walk(walk_from_balls(c));
      CHECK(back.origin() == c.origin());
      CHECK(back.str() == c.str());
    }
  }
}

TEST_CASE("records") {
  SUBCASE("empty configuration: every box") {
    const auto rs = records(BallConfig::parse("000", 1));
    for (Coord z = -5; z < 10; ++z) CHECK(rs.contains(z));
  }
  SUBCASE("1100 on boxes 1..4") {
    const auto rs = records(BallConfig::parse("1100", 1));
    CHECK(rs.in_range(-3, 9) == std::vector<Coord>{-3, -2, -1, 0, 5, 6, 7, 8});
  }
  SUBCASE("excursion between two records") {
    const auto rs = records(BallConfig::parse(kFigOne, 1));
    CHECK(rs.in_range(-1, 19) == std::vector<Coord>{-1, 0, 17, 18});
  }
  SUBCASE("agrees with the definition") {
    Rng rng(11);
    for (int t = 0; t < 300; ++t) {
      const std::string s = oracle::random_config(rng, 1 + rng.below(30), 0.45);
      const Coord hi = static_cast<Coord>(s.size()) + 8;
      CHECK(records(BallConfig::parse(s)).in_range(-3, hi) == oracle::records(s, -3, hi));
    }
  }
}

TEST_CASE("carrier example") {
  const auto c = BallConfig::parse(kCarrierIn);
  CHECK(evolve(c).str(1, 24) == "00010100101110000101111");
  CHECK(loads_str(carrier_trace(c)) == "01212123232101234343210");
  CHECK(loads_str(carrier_trace(BallConfig::parse("1100"))) == "1210");
  CHECK(loads_str(carrier_trace(BallConfig::parse("0000"))) == "0000");
}

TEST_CASE("evolve") {
  SUBCASE("empty configuration is fixed") { CHECK(evolve(BallConfig::parse("0000")) == BallConfig()); }
  SUBCASE("a 2-soliton moves two boxes per step") {
    auto c = BallConfig::parse("11");
    for (int t = 1; t <= 5; ++t) {
      c = evolve(c);
      CHECK(c == BallConfig::parse("11", 1 + 2 * t));
    }
    CHECK(evolve(BallConfig::parse("11"), 3) == BallConfig::parse("11", 7));
  }
  SUBCASE("matches the carrier sweep, and invariants hold") {
    Rng rng(17);
    for (int t = 0; t < 500; ++t) {
      const std::string s = oracle::random_config(rng, rng.below(60), 0.4);
      const auto c = BallConfig::parse(s);
      const auto tc = evolve(c);
      CHECK(tc == BallConfig::parse(oracle::carrier_step(s)));
      CHECK(tc.ball_count() == c.ball_count());
      CHECK(soliton_counts(tc) == soliton_counts(c));
      const auto loads = carrier_trace(BallConfig::parse(s + std::string(s.size(), '0')));
      CHECK((loads.empty() || loads.back() == 0));
      const auto rs = records(c);
      const auto rec = rs.in_range(c.origin() - 2, tc.end() + 2);
      for (Coord z : rec) {
        CHECK(c[z] == 0);
        CHECK(tc[z] == 0);
      }
      for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
        std::int64_t balls = 0, empties = 0;
        for (Coord z = rec[i] + 1; z < rec[i + 1]; ++z) (c[z] ? balls : empties) += 1;
        CHECK(balls == empties);
      }
    }
  }
  CHECK_THROWS_AS(evolve(BallConfig(), -1), PreconditionError);
}

TEST_CASE("excursions") {
  CHECK(Excursion::parse("1100").half_length() == 2);
  CHECK_THROWS_AS(Excursion::parse("0110"), InputError);
  CHECK_THROWS_AS(Excursion::parse("110"), InputError);
  CHECK_THROWS_AS(Excursion::parse("1101"), InputError);
  const int steps[] = {1, -1};
  CHECK(Excursion::from_steps(steps).str() == "10");
  CHECK(Excursion::parse("10").config(4) == BallConfig::parse("1", 5));
  const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  for (std::size_t n = 0; n <= 10; ++n) CHECK(all_excursions(n).size() == catalan[n]);
  const auto three = all_excursions(3);
  CHECK(three.front().str() == "101010");
  CHECK(three.back().str() == "111000");
}

TEST_CASE("Takahashi-Satsuma") {
  SUBCASE("empty excursion") { CHECK(ts_decompose(Excursion()).empty()); }
  SUBCASE("pure run pair") {
    const auto s = ts_decompose(Excursion::parse("111000"));
    REQUIRE(s.size() == 1);
    CHECK(s[0].size == 3);
    CHECK(s[0].head == std::vector<Coord>{1, 2, 3});
    CHECK(s[0].tail == std::vector<Coord>{4, 5, 6});
  }
  SUBCASE("sample excursion: one 4-, one 2-, two 1-solitons") {
    const auto e = Excursion::parse(kFigOne);
    CHECK(soliton_counts(e) == SolitonCounts{{1, 2}, {2, 1}, {4, 1}});
    CHECK(same(as_oracle(ts_decompose(e)), oracle::ts(kFigOne)));
  }
  SUBCASE("tail-first soliton") {
    const auto s = ts_decompose(Excursion::parse("110100"));
    REQUIRE(s.size() == 2);
    CHECK(s[1].size == 1);
    CHECK_FALSE(s[1].head_first());
  }
  SUBCASE("exhaustive against the reference, supports partition the boxes") {
    for (std::size_t n = 0; n <= 8; ++n) {
      for (const auto& e : all_excursions(n)) {
        const auto sols = ts_decompose(e);
        CHECK(same(as_oracle(sols), oracle::ts(e.str())));
        std::vector<int> hit(e.size() + 1, 0);
        std::size_t weight = 0;
        for (const auto& s : sols) {
          weight += 2 * static_cast<std::size_t>(s.size);
          CHECK((s.head.back() < s.tail.front() || s.tail.back() < s.head.front()));
          for (Coord z : s.head) CHECK(e.at(z) == 1);
          for (Coord z : s.tail) CHECK(e.at(z) == 0);
          for (Coord z : s.support()) ++hit[static_cast<std::size_t>(z)];
        }
        CHECK(weight == e.size());
        for (std::size_t z = 1; z <= e.size(); ++z) CHECK(hit[z] == 1);
      }
    }
  }
  SUBCASE("long random excursions") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      const std::string s = oracle::random_excursion(rng, 20 + rng.below(60));
      CHECK(same(as_oracle(ts_decompose(Excursion::parse(s))), oracle::ts(s)));
    }
  }
}

TEST_CASE("configuration decomposition is padding invariant") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::string s = oracle::random_config(rng, rng.below(50), 0.4);
    const auto c = BallConfig::parse(s, 3);
    const auto padded = c.rewindowed(-20, c.end() + 15);
    const auto a = ts_decompose(c);
    const auto b = ts_decompose(padded);
    CHECK(same(as_oracle(a), as_oracle(b)));
    std::size_t balls = 0;
    for (const auto& sol : a) balls += static_cast<std::size_t>(sol.size);
    CHECK(balls == c.ball_count());
  }
}

TEST_CASE("excursion sequences") {
  ExcursionSequence seq{-1, {Excursion::parse("10"), Excursion(), Excursion::parse("1100")}};
  std::vector<Coord> r;
  const auto c = config_from_excursions(seq, &r);
  CHECK(r == std::vector<Coord>{-3, 0, 1, 6});
  CHECK(c.str() == "10001100");
  CHECK(c.origin() == -2);
  const auto back = excursions_from_config(c);
  CHECK(back == seq);
  CHECK(back.at(0).empty());
  CHECK(back.at(7).empty());
  CHECK_THROWS_AS(excursions_from_config(BallConfig::parse("10", 0)), PreconditionError);

  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    ExcursionSequence s;
    s.first_index = -static_cast<std::int64_t>(rng.below(4));
    const std::size_t count = rng.below(6);
    for (std::size_t i = 0; i < count; ++i) s.items.push_back(Excursion::parse(oracle::random_excursion(rng, rng.below(5))));
    std::vector<Coord> rp;
    const auto cfg = config_from_excursions(s, &rp);
    for (std::size_t i = 0; i + 1 < rp.size(); ++i) {
      CHECK(rp[i + 1] - rp[i] == 2 * static_cast<Coord>(s.items[i].half_length()) + 1);
    }
    CHECK(excursions_from_config(cfg) == s);
  }
}
