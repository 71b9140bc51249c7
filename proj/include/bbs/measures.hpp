#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/rng.hpp"
#include "bbs/slots.hpp"

namespace bbs {

struct ZeroTail {};
/// alpha_k = (lambda (1 - lambda))^k.
struct BernoulliTail {
  double lambda = 0.0;
};
/// alpha_k = a b^k, stored as alpha_1 b^(k-1) so that b = 0 needs no division.
struct MarkovTail {
  double a = 0.0;
  double b = 0.0;
  double alpha1 = 0.0;
};
using Tail = std::variant<ZeroTail, BernoulliTail, MarkovTail>;

/// Soliton weights alpha_1, alpha_2, ...: an explicit prefix followed by a symbolic tail.
struct AlphaParams {
  std::vector<double> values;  // alpha_1 .. alpha_K
  Tail tail = ZeroTail{};

  double at(int k) const;
  /// Largest k with alpha_k > 0, or nullopt when the tail is infinite.
  std::optional<int> support() const;
};

/// q_1 .. q_K; q_k = 0 beyond K.
struct QParams {
  std::vector<double> values;

  double at(int k) const {
    return (k >= 1 && k <= static_cast<int>(values.size())) ? values[static_cast<std::size_t>(k - 1)] : 0.0;
  }
  int size() const { return static_cast<int>(values.size()); }
};

AlphaParams bernoulli_alpha(double lambda);
/// alpha_k = a b^k with a = Q01 Q10 / (Q11 Q00), b = Q11 Q00.
AlphaParams markov_alpha(const std::array<std::array<double, 2>, 2>& Q);

/// q_k = alpha_k / prod_{j<k} (1 - q_j)^{2(k-j)} for k = 1..K; DivergenceError if some q_k >= 1.
QParams q_from_alpha(const AlphaParams& alpha, int K);
/// Same, with K chosen so that the neglected tail sum_{k>K} q_k is below `tail_tol`.
QParams q_from_alpha(const AlphaParams& alpha, double tail_tol = 1e-15);
/// q_k = (theta^{k-1} alpha)_1 with (theta alpha)_k = alpha_{k+1} / (1 - alpha_1)^{2k}; O(K^2).
QParams q_from_alpha_theta(const AlphaParams& alpha, int K);
/// alpha_k = q_k prod_{l<k} (1 - q_l)^{2(k-l)}; zero tail.
AlphaParams alpha_from_q(const QParams& q);

struct Partition {
  double Z = 1.0;
  double log_Z = 0.0;
  std::vector<double> Zm;  // Zm[m] for m = 0..K, Zm[0] = 1
};

/// Z = prod (1 - q_k)^{-1} and Z^m = q_m prod_{j<=m} (1 - q_j)^{-1}.
Partition partition_closed(const QParams& q);
Partition partition_closed(const AlphaParams& alpha);

/// 1 + sum_{n>=1} C_n beta^n = 2 / (1 + sqrt(1 - 4 beta)).
double catalan_gf(double beta);
/// 1 + sum_{n>=1} sum_k N(n,k) a^k b^n.
double narayana_gf(double a, double b);

long double catalan(unsigned n);
long double narayana(unsigned n, unsigned k);

struct BruteForcePartition {
  long double value = 0;       // sum over excursions with n <= n_max
  long double tail_bound = 0;  // bound on the omitted mass (infinity when unknown)
  std::vector<long double> by_half_length;  // weight of all excursions with half-length n
  std::vector<long double> count_by_half_length;  // number of excursions with half-length n
};

/// Sum of prod alpha_k^{n_k(eps)} over all excursions with n(eps) <= n_max.
///
/// Excursions are grouped by soliton profile (n_k): the number with a given
/// profile is prod_k binom(s_k + n_k - 1, n_k), the count of slot diagrams.
BruteForcePartition partition_bruteforce(const AlphaParams& alpha, unsigned n_max);

/// The excursion measure nu_alpha together with its q-transform.
class ExcursionMeasure {
 public:
  explicit ExcursionMeasure(AlphaParams alpha);
  ExcursionMeasure(AlphaParams alpha, int K);

  const AlphaParams& alpha() const { return alpha_; }
  const QParams& q() const { return q_; }
  double Z() const { return partition_.Z; }
  const Partition& partition() const { return partition_; }

  double log_weight(const SolitonCounts& counts) const;
  double nu_weight(const Excursion& excursion) const;

 private:
  AlphaParams alpha_;
  QParams q_;
  Partition partition_;
};

double log_phi(const QParams& q, const SlotDiagram& diagram);
/// phi_q(x) = prod_k q_k^{|x_k|} (1 - q_k)^{s_k}.
double phi_prob(const QParams& q, const SlotDiagram& diagram);

/// Exact sampler for phi_q (and hence for nu_alpha with q = q(alpha)).
class ExcursionSampler {
 public:
  explicit ExcursionSampler(QParams q);
  explicit ExcursionSampler(const AlphaParams& alpha) : ExcursionSampler(q_from_alpha(alpha)) {}

  const QParams& q() const { return q_; }
  SlotDiagram sample_diagram(Rng& rng) const;
  Excursion sample_excursion(Rng& rng) const { return excursion_from_diagram(sample_diagram(rng)); }

 private:
  QParams q_;
  std::vector<double> top_cdf_;  // P(M <= m), m = 0..K
};

struct BetaSolution {
  std::vector<double> beta;  // beta_0 .. beta_K
  double mean_size = 0.0;    // E(2 n(eps)) = beta_0 - 1
  double kappa = 1.0;        // mean distance between consecutive records
  double density = 0.0;      // ball density (kappa - 1) / (2 kappa)
};

/// beta_k = 1 + sum_{l>k} 2(l-k) m_l beta_l, m_l = q_l / (1 - q_l), solved by back-substitution.
BetaSolution beta_recursion(const QParams& q, int K);
inline BetaSolution beta_recursion(const QParams& q) { return beta_recursion(q, q.size()); }

}  // namespace bbs
