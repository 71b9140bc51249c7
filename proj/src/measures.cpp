#include "bbs/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bbs/error.hpp"

namespace bbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxAutoK = 1 << 20;

// Ratio alpha_{k+1} / alpha_k of the symbolic tail (0 for the zero tail).
double tail_ratio(const Tail& tail) {
  if (const auto* t = std::get_if<BernoulliTail>(&tail)) return t->lambda * (1.0 - t->lambda);
  if (const auto* t = std::get_if<MarkovTail>(&tail)) return t->b;
  return 0.0;
}

double log_or_ninf(double x) { return x > 0.0 ? std::log(x) : -kInf; }

// Incremental evaluation of q_k = alpha_k exp(-L_k), L_k = sum_{j<k} 2(k-j) log(1-q_j).
class QIteration {
 public:
  explicit QIteration(const AlphaParams& alpha) : alpha_(alpha) {}

  double next() {
    ++k_;
    L_ += 2.0 * S_;  // L_k = L_{k-1} + 2 sum_{j<k} log(1-q_j)
    const double a = alpha_.at(k_);
    const double q = a > 0.0 ? std::exp(std::log(a) - L_) : 0.0;
    if (!(q < 1.0)) {
      std::ostringstream msg;
      msg << "q_" << k_ << " = " << q << " >= 1: the partition function diverges";
      throw DivergenceError(msg.str());
    }
    S_ += std::log1p(-q);
    return q;
  }
  int k() const { return k_; }
  // log prod_{j<=k} (1 - q_j)^{-1}
  double log_Z() const { return -S_; }

 private:
  const AlphaParams& alpha_;
  int k_ = 0;
  double L_ = 0.0;
  double S_ = 0.0;
};

long double binom_multiset(long double slots, unsigned n) {
  // binom(slots + n - 1, n)
  long double r = 1.0L;
  for (unsigned i = 1; i <= n; ++i) r = r * (slots - 1.0L + i) / i;
  return r;
}

long double binom(unsigned n, unsigned k) {
  if (k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double AlphaParams::at(int k) const {
  if (k < 1) return 0.0;
  if (k <= static_cast<int>(values.size())) return values[static_cast<std::size_t>(k - 1)];
  if (const auto* t = std::get_if<BernoulliTail>(&tail)) return std::pow(t->lambda * (1.0 - t->lambda), k);
  if (const auto* t = std::get_if<MarkovTail>(&tail)) {
    return t->b == 0.0 ? (k == 1 ? t->alpha1 : 0.0) : t->alpha1 * std::pow(t->b, k - 1);
  }
  return 0.0;
}

std::optional<int> AlphaParams::support() const {
  int last = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) last = static_cast<int>(i) + 1;
  }
  const int K = static_cast<int>(values.size());
  if (const auto* t = std::get_if<BernoulliTail>(&tail)) {
    if (t->lambda > 0.0) return std::nullopt;
  } else if (const auto* t = std::get_if<MarkovTail>(&tail)) {
    if (t->alpha1 > 0.0 && t->b > 0.0) return std::nullopt;
    if (t->alpha1 > 0.0 && K == 0) last = 1;
  }
  return last;
}

AlphaParams bernoulli_alpha(double lambda) {
  if (!(lambda >= 0.0 && lambda < 0.5)) {
    throw PreconditionError("bernoulli measure needs 0 <= lambda < 1/2");
  }
  return AlphaParams{{}, BernoulliTail{lambda}};
}

AlphaParams markov_alpha(const std::array<std::array<double, 2>, 2>& Q) {
  for (const auto& row : Q) {
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) throw InputError("transition probabilities must lie in [0, 1]");
    }
    if (std::abs(row[0] + row[1] - 1.0) > 1e-12) throw InputError("rows of Q must sum to 1");
  }
  if (!(Q[0][1] < Q[1][0])) throw PreconditionError("markov measure needs Q(0,1) < Q(1,0)");
  MarkovTail t;
  t.b = Q[1][1] * Q[0][0];
  t.alpha1 = Q[0][1] * Q[1][0];
  t.a = t.b > 0.0 ? t.alpha1 / t.b : kInf;
  return AlphaParams{{}, t};
}

QParams q_from_alpha(const AlphaParams& alpha, int K) {
  QIteration it(alpha);
  QParams q;
  q.values.reserve(static_cast<std::size_t>(std::max(K, 0)));
  for (int k = 1; k <= K; ++k) q.values.push_back(it.next());
  return q;
}

QParams q_from_alpha(const AlphaParams& alpha, double tail_tol) {
  if (const auto s = alpha.support()) return q_from_alpha(alpha, *s);
  const double t = tail_ratio(alpha.tail);
  const int prefix = static_cast<int>(alpha.values.size());
  QIteration it(alpha);
  QParams q;
  while (true) {
    const double qk = it.next();
    q.values.push_back(qk);
    if (it.k() <= prefix) continue;
    // q_{k+1}/q_k = t prod_{j<=k} (1-q_j)^{-2} increases to t Z^2; the margin
    // covers the part of Z not yet accumulated.
    const double r = t * std::exp(2.0 * it.log_Z()) * (1.0 + 1e-3);
    if (r < 1.0 && qk * r / (1.0 - r) < tail_tol) break;
    if (it.k() >= kMaxAutoK) throw DivergenceError("q-transform tail does not decay");
  }
  while (!q.values.empty() && q.values.back() == 0.0) q.values.pop_back();
  return q;
}

QParams q_from_alpha_theta(const AlphaParams& alpha, int K) {
  std::vector<double> a(static_cast<std::size_t>(std::max(K, 0)));
  for (int k = 1; k <= K; ++k) a[static_cast<std::size_t>(k - 1)] = alpha.at(k);
  QParams q;
  while (!a.empty()) {
    const double a1 = a.front();
    if (!(a1 < 1.0)) throw DivergenceError("theta iteration reached alpha_1 >= 1");
    q.values.push_back(a1);
    std::vector<double> next(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k) {
      next[k - 1] = a[k] * std::exp(-2.0 * static_cast<double>(k) * std::log1p(-a1));
    }
    a = std::move(next);
  }
  return q;
}

AlphaParams alpha_from_q(const QParams& q) {
  AlphaParams alpha;
  alpha.values.reserve(q.values.size());
  double L = 0.0, S = 0.0;
  for (double qk : q.values) {
    if (!(qk >= 0.0 && qk < 1.0)) throw PreconditionError("q_k must lie in [0, 1)");
    L += 2.0 * S;
    alpha.values.push_back(qk > 0.0 ? std::exp(std::log(qk) + L) : 0.0);
    S += std::log1p(-qk);
  }
  return alpha;
}

Partition partition_closed(const QParams& q) {
  Partition p;
  p.Zm.assign(q.values.size() + 1, 0.0);
  p.Zm[0] = 1.0;
  double S = 0.0;
  for (std::size_t m = 1; m <= q.values.size(); ++m) {
    const double qm = q.values[m - 1];
    if (!(qm < 1.0)) throw DivergenceError("q_k >= 1: the partition function diverges");
    S += std::log1p(-qm);
    p.Zm[m] = qm * std::exp(-S);
  }
  p.log_Z = -S;
  p.Z = std::exp(-S);
  return p;
}

Partition partition_closed(const AlphaParams& alpha) { return partition_closed(q_from_alpha(alpha)); }

double catalan_gf(double beta) {
  if (!(beta >= 0.0 && beta <= 0.25)) throw DivergenceError("Catalan series diverges for beta > 1/4");
  return 2.0 / (1.0 + std::sqrt(1.0 - 4.0 * beta));
}

double narayana_gf(double a, double b) {
  if (b == 0.0) return 1.0;
  const double c = 1.0 - b * (1.0 + a);
  const double disc = c * c - 4.0 * b * b * a;
  if (c <= 0.0 || disc < 0.0) throw DivergenceError("Narayana series diverges");
  return 1.0 + (c - std::sqrt(disc)) / (2.0 * b);
}

long double catalan(unsigned n) { return binom(2 * n, n) / (n + 1); }

long double narayana(unsigned n, unsigned k) {
  if (n == 0 || k == 0 || k > n) return 0.0L;
  return binom(n, k) * binom(n, k - 1) / n;
}

BruteForcePartition partition_bruteforce(const AlphaParams& alpha, unsigned n_max) {
  if (n_max > 200) throw PreconditionError("n_max too large for profile enumeration");
  BruteForcePartition out;
  out.by_half_length.assign(n_max + 1, 0.0L);
  out.count_by_half_length.assign(n_max + 1, 0.0L);

  std::vector<long double> a(n_max + 1, 0.0L);
  for (unsigned k = 1; k <= n_max; ++k) a[k] = static_cast<long double>(alpha.at(static_cast<int>(k)));

  // Depth-first over n_k for k = n_max .. 1. A = sum_{l>k} n_l, B = sum_{l>k} l n_l,
  // so that s_k = 1 + 2 (B - k A).
  auto rec = [&](auto&& self, unsigned k, unsigned used, unsigned long long A, unsigned long long B,
                 long double weight, long double count) -> void {
    if (k == 0) {
      out.by_half_length[used] += weight;
      out.count_by_half_length[used] += count;
      return;
    }
    const long double slots = 1.0L + 2.0L * static_cast<long double>(B - k * A);
    const unsigned most = (n_max - used) / k;
    long double pw = 1.0L;
    for (unsigned nk = 0; nk <= most; ++nk) {
      if (nk > 0) pw *= a[k];
      const long double c = binom_multiset(slots, nk);
      self(self, k - 1, used + nk * k, A + nk, B + static_cast<unsigned long long>(nk) * k, weight * pw * c,
           count * c);
    }
  };
  rec(rec, n_max, 0, 0, 0, 1.0L, 1.0L);

  for (long double w : out.by_half_length) out.value += w;

  // Tail bounds: alpha_k <= beta^k gives weight(n) <= C_n beta^n <= (4 beta)^n / (n^{3/2} sqrt(pi));
  // a markov tail gives weight(n) <= (b (1 + sqrt a)^2)^n.
  long double bound = std::numeric_limits<long double>::infinity();
  const long double N1 = n_max + 1.0L;
  double beta = 0.0;
  for (std::size_t k = 0; k < alpha.values.size(); ++k) {
    beta = std::max(beta, std::pow(alpha.values[k], 1.0 / static_cast<double>(k + 1)));
  }
  const int prefix = static_cast<int>(alpha.values.size());
  if (const auto* t = std::get_if<BernoulliTail>(&alpha.tail)) {
    beta = std::max(beta, t->lambda * (1.0 - t->lambda));
  } else if (const auto* t = std::get_if<MarkovTail>(&alpha.tail)) {
    const double a_eff = t->b > 0.0 ? std::max(1.0, std::pow(t->a, 1.0 / (prefix + 1))) : 0.0;
    beta = std::max(beta, t->b > 0.0 ? t->b * a_eff : std::pow(t->alpha1, 1.0 / (prefix + 1)));
    if (prefix == 0 && t->b > 0.0) {
      const long double r = t->b * std::pow(1.0 + std::sqrt(t->a), 2.0);
      if (r < 1.0L) bound = std::min(bound, std::pow(r, N1) / (1.0L - r));
    }
  }
  if (const auto s = alpha.support(); s && *s == 0) {
    bound = 0.0L;
  } else if (4.0 * beta < 1.0) {
    const long double x = 4.0L * beta;
    bound = std::min(bound, std::pow(x, N1) / (std::pow(N1, 1.5L) * std::sqrt(std::numbers::pi_v<long double>) *
                                               (1.0L - x)));
  }
  out.tail_bound = bound;
  return out;
}

ExcursionMeasure::ExcursionMeasure(AlphaParams alpha)
    : alpha_(std::move(alpha)), q_(q_from_alpha(alpha_)), partition_(partition_closed(q_)) {}

ExcursionMeasure::ExcursionMeasure(AlphaParams alpha, int K)
    : alpha_(std::move(alpha)), q_(q_from_alpha(alpha_, K)), partition_(partition_closed(q_)) {}

double ExcursionMeasure::log_weight(const SolitonCounts& counts) const {
  double lw = -partition_.log_Z;
  for (const auto& [k, n] : counts) {
    if (n == 0) continue;
    lw += static_cast<double>(n) * log_or_ninf(alpha_.at(k));
  }
  return lw;
}

double ExcursionMeasure::nu_weight(const Excursion& excursion) const {
  return std::exp(log_weight(soliton_counts(excursion)));
}

double log_phi(const QParams& q, const SlotDiagram& diagram) {
  const int top = std::max(q.size(), diagram.max_size());
  double lp = 0.0;
  for (int k = 1; k <= top; ++k) {
    const double qk = q.at(k);
    const Count n = diagram.total(k);
    if (n > 0) lp += static_cast<double>(n) * log_or_ninf(qk);
    lp += static_cast<double>(diagram.slots(k)) * std::log1p(-qk);
  }
  return lp;
}

double phi_prob(const QParams& q, const SlotDiagram& diagram) { return std::exp(log_phi(q, diagram)); }

ExcursionSampler::ExcursionSampler(QParams q) : q_(std::move(q)) {
  const int K = q_.size();
  for (int k = 1; k <= K; ++k) {
    if (!(q_.at(k) >= 0.0 && q_.at(k) < 1.0)) throw PreconditionError("q_k must lie in [0, 1)");
  }
  // P(M = m) = q_m prod_{l>m} (1 - q_l), q_0 = 1.
  std::vector<double> p(static_cast<std::size_t>(K) + 1);
  double suffix = 1.0;
  for (int m = K; m >= 0; --m) {
    p[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : q_.at(m)) * suffix;
    if (m > 0) suffix *= 1.0 - q_.at(m);
  }
  top_cdf_.resize(p.size());
  double acc = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) top_cdf_[m] = (acc += p[m]);
}

SlotDiagram ExcursionSampler::sample_diagram(Rng& rng) const {
  const double u = rng.uniform() * top_cdf_.back();
  const int M = static_cast<int>(std::upper_bound(top_cdf_.begin(), top_cdf_.end(), u) - top_cdf_.begin());
  if (M == 0) return SlotDiagram{};
  std::vector<std::vector<Count>> rows(static_cast<std::size_t>(M));
  rows[static_cast<std::size_t>(M - 1)] = {1 + rng.geometric(q_.at(M))};
  Count A = rows.back()[0];
  Count B = static_cast<Count>(M) * A;
  for (int k = M - 1; k >= 1; --k) {
    const Count s = 1 + 2 * (B - static_cast<Count>(k) * A);
    auto& row = rows[static_cast<std::size_t>(k - 1)];
    row.resize(s);
    Count total = 0;
    for (auto& x : row) total += (x = rng.geometric(q_.at(k)));
    A += total;
    B += static_cast<Count>(k) * total;
  }
  return SlotDiagram(std::move(rows));
}

BetaSolution beta_recursion(const QParams& q, int K) {
  BetaSolution out;
  out.beta.assign(static_cast<std::size_t>(std::max(K, 0)) + 1, 1.0);
  double A = 0.0, B = 0.0;  // sum_{l>k} m_l beta_l and sum_{l>k} l m_l beta_l
  for (int k = K; k >= 0; --k) {
    const double beta = 1.0 + 2.0 * (B - k * A);
    out.beta[static_cast<std::size_t>(k)] = beta;
    if (k == 0) break;
    const double qk = q.at(k);
    if (!(qk < 1.0)) throw DivergenceError("q_k >= 1");
    const double m = qk / (1.0 - qk);
    A += m * beta;
    B += k * m * beta;
  }
  out.kappa = out.beta[0];
  out.mean_size = out.kappa - 1.0;
  out.density = (out.kappa - 1.0) / (2.0 * out.kappa);
  return out;
}

}  // namespace bbs
