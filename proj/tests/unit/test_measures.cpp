#include <doctest.h>

#include <cmath>
#include <map>

#include "bbs/error.hpp"
#include "bbs/measures.hpp"
#include "bbs/stats.hpp"
#include "oracles.hpp"

using namespace bbs;

namespace {

// q_k = alpha_k / prod_{j<k} (1 - q_j)^{2(k-j)}, evaluated term by term.
std::vector<double> q_direct(const AlphaParams& alpha, int K) {
  std::vector<double> q;
  for (int k = 1; k <= K; ++k) {
    double d = 1.0;
    for (int j = 1; j < k; ++j) d *= std::pow(1.0 - q[static_cast<std::size_t>(j - 1)], 2.0 * (k - j));
    q.push_back(alpha.at(k) / d);
  }
  return q;
}

double weight(const AlphaParams& alpha, const Excursion& e) {
  double w = 1.0;
  for (const auto& [k, n] : oracle::counts(e.str())) w *= std::pow(alpha.at(k), static_cast<double>(n));
  return w;
}

const std::array<std::array<double, 2>, 2> kQ = {{{0.8, 0.2}, {0.6, 0.4}}};

}  // namespace

TEST_CASE("alpha families") {
  const auto b = bernoulli_alpha(0.25);
  CHECK(b.at(1) == doctest::Approx(0.1875));
  CHECK(b.at(3) == doctest::Approx(std::pow(0.1875, 3)));
  CHECK(b.support() == std::nullopt);
  CHECK(bernoulli_alpha(0.0).at(2) == 0.0);
  CHECK_THROWS_AS(bernoulli_alpha(0.5), PreconditionError);
  CHECK_THROWS_AS(bernoulli_alpha(-0.1), PreconditionError);

  const auto m = markov_alpha(kQ);
  // alpha_k = Q01 Q10 (Q11 Q00)^(k-1)
  CHECK(m.at(1) == doctest::Approx(0.12));
  CHECK(m.at(2) == doctest::Approx(0.12 * 0.32));
  CHECK(m.at(5) == doctest::Approx(0.12 * std::pow(0.32, 4)));
  CHECK_THROWS_AS(markov_alpha({{{0.5, 0.5}, {0.5, 0.5}}}), PreconditionError);
  CHECK_THROWS_AS(markov_alpha({{{0.5, 0.6}, {0.5, 0.5}}}), InputError);
  CHECK_THROWS_AS(markov_alpha({{{1.2, -0.2}, {0.5, 0.5}}}), InputError);

  AlphaParams finite{{0.2, 0.0, 0.05, 0.0}, ZeroTail{}};
  CHECK(finite.support() == 3);
  CHECK(finite.at(9) == 0.0);
}

TEST_CASE("q transform") {
  const auto a = bernoulli_alpha(0.25);
  const auto q = q_from_alpha(a, 40);
  CHECK(q.at(1) == doctest::Approx(0.1875));
  CHECK(q.at(2) == doctest::Approx(0.05325443787).epsilon(1e-9));
  const auto direct = q_direct(a, 40);
  for (int k = 1; k <= 40; ++k) CHECK(q.at(k) == doctest::Approx(direct[static_cast<std::size_t>(k - 1)]).epsilon(1e-12));

  const auto theta = q_from_alpha_theta(a, 40);
  for (int k = 1; k <= 40; ++k) CHECK(theta.at(k) == doctest::Approx(q.at(k)).epsilon(1e-10));

  const auto m = markov_alpha(kQ);
  const auto qm = q_from_alpha(m, 30);
  const auto dm = q_direct(m, 30);
  for (int k = 1; k <= 30; ++k) CHECK(qm.at(k) == doctest::Approx(dm[static_cast<std::size_t>(k - 1)]).epsilon(1e-12));

  SUBCASE("geometric decay of the tail") {
    // q_{k+1}/q_k tends to lambda / (1 - lambda) and Q11 / Q00.
    CHECK(q.at(40) / q.at(39) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(qm.at(30) / qm.at(29) == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("automatic truncation") {
    const auto qa = q_from_alpha(a);
    const auto longer = q_from_alpha(a, qa.size() + 200);
    double tail = 0.0;
    for (int k = qa.size() + 1; k <= longer.size(); ++k) tail += longer.at(k);
    CHECK(tail < 1e-14);
    AlphaParams finite{{0.2, 0.1}, ZeroTail{}};
    CHECK(q_from_alpha(finite).size() == 2);
  }
  SUBCASE("round trip") {
    const auto back = alpha_from_q(q);
    for (int k = 1; k <= 40; ++k) CHECK(back.at(k) == doctest::Approx(a.at(k)).epsilon(1e-10));
    const QParams qq{{0.3, 0.0, 0.2, 0.05}};
    const auto again = q_from_alpha(alpha_from_q(qq), 4);
    for (int k = 1; k <= 4; ++k) CHECK(again.at(k) == doctest::Approx(qq.at(k)));
    CHECK_THROWS_AS(alpha_from_q(QParams{{1.0}}), PreconditionError);
  }
  SUBCASE("divergence") {
    CHECK_THROWS_AS(q_from_alpha(AlphaParams{{0.9, 0.5}, ZeroTail{}}, 2), DivergenceError);
    CHECK_THROWS_AS(q_from_alpha(AlphaParams{{0.9, 0.5}, ZeroTail{}}), DivergenceError);
  }
}

TEST_CASE("combinatorial numbers") {
  const long double c[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  for (unsigned n = 0; n <= 10; ++n) CHECK(catalan(n) == c[n]);
  CHECK(narayana(4, 2) == 6);
  CHECK(narayana(5, 3) == 20);
  for (unsigned n = 1; n <= 12; ++n) {
    long double s = 0;
    for (unsigned k = 1; k <= n; ++k) s += narayana(n, k);
    CHECK(s == catalan(n));
  }
  CHECK(catalan_gf(0.0) == 1.0);
  CHECK(catalan_gf(0.25) == doctest::Approx(2.0));
  CHECK(catalan_gf(0.1875) == doctest::Approx(4.0 / 3.0));
  // a = 1 reduces the Narayana series to the Catalan series.
  CHECK(narayana_gf(1.0, 0.2) == doctest::Approx(catalan_gf(0.2)));
}

TEST_CASE("solitons are counted by peaks") {
  for (unsigned n = 1; n <= 10; ++n) {
    std::map<std::size_t, long double> by_solitons;
    for (const auto& e : all_excursions(n)) {
      std::size_t total = 0;
      for (const auto& [k, c] : soliton_counts(e)) total += c;
      ++by_solitons[total];
    }
    for (const auto& [k, count] : by_solitons) CHECK(count == narayana(n, static_cast<unsigned>(k)));
  }
}

TEST_CASE("partition function") {
  SUBCASE("closed form matches the generating functions") {
    CHECK(partition_closed(bernoulli_alpha(0.25)).Z == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(partition_closed(bernoulli_alpha(0.1)).Z == doctest::Approx(catalan_gf(0.09)).epsilon(1e-12));
    CHECK(partition_closed(markov_alpha(kQ)).Z == doctest::Approx(1.25).epsilon(1e-12));
    const auto m = markov_alpha(kQ);
    CHECK(partition_closed(m).Z == doctest::Approx(narayana_gf(0.12 / 0.32, 0.32)).epsilon(1e-12));
    const auto p = partition_closed(AlphaParams{{0.2, 0.1}, ZeroTail{}});
    CHECK(p.Z == doctest::Approx(40.0 / 27.0).epsilon(1e-12));
    CHECK(p.Zm[0] == 1.0);
    double sum = 0.0;
    for (double z : p.Zm) sum += z;
    CHECK(sum == doctest::Approx(p.Z));
  }
  SUBCASE("profile enumeration matches explicit enumeration") {
    const AlphaParams a{{0.2, 0.1, 0.07}, ZeroTail{}};
    const auto bf = partition_bruteforce(a, 10);
    for (unsigned n = 0; n <= 10; ++n) {
      double w = 0.0;
      for (const auto& e : all_excursions(n)) w += weight(a, e);
      CHECK(static_cast<double>(bf.by_half_length[n]) == doctest::Approx(w).epsilon(1e-12));
      CHECK(bf.count_by_half_length[n] == catalan(n));
    }
  }
  SUBCASE("brute force brackets the closed form") {
    const auto a = bernoulli_alpha(0.25);
    const auto bf = partition_bruteforce(a, 40);
    const double Z = partition_closed(a).Z;
    CHECK(static_cast<double>(bf.value) <= Z);
    CHECK(static_cast<double>(bf.value + bf.tail_bound) >= Z);
    CHECK(static_cast<double>(bf.tail_bound) < 1e-6);
    const auto bm = partition_bruteforce(markov_alpha(kQ), 40);
    CHECK(static_cast<double>(bm.value) <= 1.25);
    CHECK(static_cast<double>(bm.value + bm.tail_bound) >= 1.25);
    CHECK_THROWS_AS(partition_bruteforce(a, 1000), PreconditionError);
  }
}

TEST_CASE("excursion measure and slot-diagram law agree") {
  for (const auto& alpha : {AlphaParams{{0.2, 0.1}, ZeroTail{}}, AlphaParams{{0.15, 0.0, 0.02}, ZeroTail{}}}) {
    const ExcursionMeasure nu(alpha);
    for (std::size_t n = 0; n <= 8; ++n) {
      for (const auto& e : all_excursions(n)) {
        const double rhs = phi_prob(nu.q(), diagram_from_excursion(e));
        CHECK(nu.nu_weight(e) == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(nu.nu_weight(e) == doctest::Approx(weight(alpha, e) / nu.Z()).epsilon(1e-12));
      }
    }
  }
  const ExcursionMeasure b(bernoulli_alpha(0.2));
  const auto e = Excursion::parse("1110110010110000");
  CHECK(b.nu_weight(e) == doctest::Approx(std::pow(0.16, 8) / b.Z()));
  CHECK(log_phi(b.q(), diagram_from_excursion(e)) ==
        doctest::Approx(std::log(phi_prob(b.q(), diagram_from_excursion(e)))));
}

TEST_CASE("exact sampler") {
  const QParams q = q_from_alpha(AlphaParams{{0.2, 0.1}, ZeroTail{}});
  const ExcursionSampler sampler(q);
  Rng rng(99);
  std::map<std::string, std::uint64_t> seen;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const auto e = sampler.sample_excursion(rng);
    ++seen[e.half_length() <= 3 ? e.str() : std::string("long")];
  }
  std::vector<double> observed;
  std::vector<double> probs;
  std::vector<std::string> labels;
  double rest = 1.0;
  for (std::size_t n = 0; n <= 3; ++n) {
    for (const auto& e : all_excursions(n)) {
      observed.push_back(static_cast<double>(seen[e.str()]));
      probs.push_back(phi_prob(q, diagram_from_excursion(e)));
      labels.push_back(e.str());
      rest -= probs.back();
    }
  }
  observed.push_back(static_cast<double>(seen["long"]));
  probs.push_back(rest);
  labels.push_back("long");
  const auto report = chi_square_gof(observed, probs, labels);
  CHECK(report.p_value > 1e-3);

  // Rows of lower levels are geometric.
  const ExcursionSampler big(bernoulli_alpha(0.25));
  std::uint64_t empty = 0;
  for (int i = 0; i < 100000; ++i) empty += big.sample_diagram(rng).empty();
  CHECK(empty / 1e5 == doctest::Approx(1.0 / partition_closed(bernoulli_alpha(0.25)).Z).epsilon(0.02));
}

TEST_CASE("mean excursion length") {
  SUBCASE("small cases by hand") {
    const auto one = beta_recursion(QParams{{0.2}});
    CHECK(one.beta[1] == 1.0);
    CHECK(one.beta[0] == doctest::Approx(1.5));
    const auto two = beta_recursion(QParams{{0.2, 0.1}});
    const double m1 = 0.25, m2 = 1.0 / 9.0;
    CHECK(two.beta[2] == 1.0);
    CHECK(two.beta[1] == doctest::Approx(1 + 2 * m2));
    CHECK(two.beta[0] == doctest::Approx(1 + 2 * (m1 * (1 + 2 * m2) + 2 * m2)));
    CHECK(two.mean_size == doctest::Approx(two.beta[0] - 1));
    CHECK(two.density == doctest::Approx((two.kappa - 1) / (2 * two.kappa)));
  }
  SUBCASE("agrees with the length distribution") {
    const AlphaParams a{{0.2, 0.1}, ZeroTail{}};
    const auto bf = partition_bruteforce(a, 60);
    long double mean = 0;
    for (std::size_t n = 0; n < bf.by_half_length.size(); ++n) mean += 2.0L * n * bf.by_half_length[n];
    mean /= bf.value;
    CHECK(beta_recursion(q_from_alpha(a)).mean_size == doctest::Approx(static_cast<double>(mean)).epsilon(1e-6));
  }
  SUBCASE("i.i.d. and Markov densities") {
    for (double lambda : {0.05, 0.25, 0.4}) {
      const auto s = beta_recursion(q_from_alpha(bernoulli_alpha(lambda)));
      CHECK(s.kappa == doctest::Approx(1.0 / (1.0 - 2.0 * lambda)).epsilon(1e-9));
      CHECK(s.density == doctest::Approx(lambda).epsilon(1e-9));
    }
    const auto s = beta_recursion(q_from_alpha(markov_alpha(kQ)));
    CHECK(s.density == doctest::Approx(0.25).epsilon(1e-9));
  }
}
