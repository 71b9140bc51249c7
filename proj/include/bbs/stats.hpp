#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/line.hpp"
#include "bbs/slots.hpp"

namespace bbs {

struct GofBin {
  std::string label;
  double observed = 0.0;
  double expected = 0.0;
};

struct GofReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<GofBin> bins;
};

/// Upper tail P(X >= x) of the chi-square law with `dof` degrees of freedom.
double chi_square_sf(double x, int dof);

/// Pearson goodness of fit; adjacent bins are merged left to right until every expected count is >= 5.
GofReport chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                         std::span<const std::string> labels = {});

/// Chi-square fit of nonnegative integer data to Geometric(p): P(Y = j) = p (1 - p)^j.
GofReport geometric_gof(std::span<const Count> samples, double p);
/// Same for the labels of row k of a component array (at least 1000 labels required).
GofReport geometric_gof(const ComponentArray& components, int k, double p);

/// Pearson independence test on paired samples; categories are merged from the top until
/// every expected cell count is >= 5.
GofReport independence_chi2(std::span<const Count> xs, std::span<const Count> ys);

/// The pair (zeta_k(j), zeta_l(j')) tested over all label translations.
struct ComponentPair {
  int k = 1;
  std::int64_t j = 0;
  int l = 1;
  std::int64_t j2 = 0;
};

/// Independence of zeta_k(j + t) and zeta_l(j2 + t) over translations t. For a lag d inside one
/// row the labels are used in disjoint blocks of length 2|d| so each label enters one pair.
GofReport independence_test(const ComponentArray& components, const ComponentPair& pair);
std::vector<GofReport> independence_test(const ComponentArray& components, std::span<const ComponentPair> pairs);

/// Homogeneity of two histograms over the same categories.
GofReport two_sample_chi2(std::span<const double> a, std::span<const double> b);

/// z-score of the difference of two sample proportions (0 when both are degenerate).
double proportion_z(double count_a, double n_a, double count_b, double n_b);

/// Kolmogorov distance between the empirical law of `samples` and Uniform(0, 1).
double ks_uniform_distance(std::vector<double> samples);

/// Law of a 0/1 block under a stationary measure, when known in closed form.
using BlockLaw = std::function<double(std::string_view)>;
BlockLaw bernoulli_block_law(double lambda);
BlockLaw markov_block_law(const std::array<std::array<double, 2>, 2>& Q);

struct TInvarianceOptions {
  Coord boxes = 200000;
  int steps = 1;
  int block_len = 4;
  int batches = 100;
  std::uint64_t seed = 1;
  std::uint64_t cap = 4096;
};

struct BlockFrequency {
  std::string block;
  double before = 0.0;  // frequency in eta
  double after = 0.0;   // frequency in T^steps eta
  double se = 0.0;      // batch-means standard error of after - before
  double z = 0.0;
  std::optional<double> exact;
  std::optional<double> z_exact;  // (before - exact) / batch-means SE of before
};

struct TInvarianceReport {
  std::vector<BlockFrequency> blocks;
  double max_abs_z = 0.0;
  Coord boxes = 0;
  int steps = 0;
  std::uint64_t capped = 0;

  bool pass(double threshold = 4.0) const { return max_abs_z <= threshold; }
};

/// Block frequencies of an anti-Palm sample eta and of T^steps eta over [0, boxes).
TInvarianceReport t_invariance_test(const ExcursionSource& source, const TInvarianceOptions& options,
                                    const BlockLaw& exact = {});
/// Same comparison for a given configuration (no exact law, no sampling).
TInvarianceReport block_comparison(const BallConfig& before, const BallConfig& after, Coord from, Coord to,
                                   int block_len, int batches, const BlockLaw& exact = {});

struct ShiftReport {
  bool rows_match = true;
  bool counts_conserved = true;
  std::map<int, std::int64_t> offsets;  // first nonzero label of D_k(T eta) minus that of D_k(eta)
  std::vector<int> mismatched;

  bool ok() const { return rows_match && counts_conserved; }
};

/// Compares the nonzero-trimmed rows of D(eta) and D(T eta), both anchored at a record left of every ball.
ShiftReport component_shift_check(const BallConfig& config);

}  // namespace bbs
