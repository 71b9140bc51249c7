#include "bbs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "bbs/error.hpp"

namespace bbs {

namespace {

constexpr double kMinExpected = 5.0;

GofReport finish(std::vector<GofBin> bins, int dof) {
  GofReport r;
  for (const auto& b : bins) {
    if (b.expected > 0.0) r.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  }
  r.dof = dof;
  r.p_value = chi_square_sf(r.statistic, dof);
  r.bins = std::move(bins);
  return r;
}

std::string range_label(std::size_t lo, std::size_t hi, std::size_t last, std::span<const std::string> labels) {
  auto name = [&](std::size_t i) { return i < labels.size() ? labels[i] : std::to_string(i); };
  if (lo == hi) return name(lo);
  if (hi == last && labels.empty()) return ">=" + name(lo);
  return name(lo) + ".." + name(hi);
}

}  // namespace

double chi_square_sf(double x, int dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

GofReport chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                         std::span<const std::string> labels) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw InputError("observed counts and probabilities must have the same nonzero length");
  }
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<GofBin> bins;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t lo = 0;
  GofBin cur;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    cur.observed += observed[i];
    cur.expected += n * probabilities[i];
    if (cur.expected >= kMinExpected) {
      bins.push_back(cur);
      ranges.emplace_back(lo, i);
      cur = {};
      lo = i + 1;
    }
  }
  if (lo < observed.size()) {
    if (bins.empty()) throw PreconditionError("insufficient data: no bin reaches 5 expected counts");
    bins.back().observed += cur.observed;
    bins.back().expected += cur.expected;
    ranges.back().second = observed.size() - 1;
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].label = range_label(ranges[i].first, ranges[i].second, observed.size() - 1, labels);
  }
  if (bins.size() < 2) throw PreconditionError("insufficient data: fewer than two bins after merging");
  const int dof = static_cast<int>(bins.size()) - 1;
  return finish(std::move(bins), dof);
}

GofReport geometric_gof(std::span<const Count> samples, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InputError("geometric parameter must lie in (0, 1]");
  if (samples.empty()) throw PreconditionError("insufficient data");
  const Count top = *std::max_element(samples.begin(), samples.end());
  std::vector<double> observed(top + 1, 0.0), prob(top + 1, 0.0);
  for (Count v : samples) observed[v] += 1.0;
  for (Count j = 0; j < top; ++j) prob[j] = p * std::pow(1.0 - p, static_cast<double>(j));
  prob[top] = std::pow(1.0 - p, static_cast<double>(top));  // P(Y >= top)
  return chi_square_gof(observed, prob);
}

GofReport geometric_gof(const ComponentArray& components, int k, double p) {
  const auto* row = components.row(k);
  if (!row || row->values.size() < 1000) throw PreconditionError("insufficient data: row needs >= 1000 labels");
  return geometric_gof(row->values, p);
}

GofReport independence_chi2(std::span<const Count> xs, std::span<const Count> ys) {
  if (xs.size() != ys.size()) throw InputError("paired samples must have equal length");
  if (xs.empty()) throw PreconditionError("insufficient data");
  const double n = static_cast<double>(xs.size());
  Count cx = *std::max_element(xs.begin(), xs.end());
  Count cy = *std::max_element(ys.begin(), ys.end());
  while (true) {
    std::vector<double> rx(cx + 1, 0.0), ry(cy + 1, 0.0);
    std::vector<double> cell((cx + 1) * (cy + 1), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Count a = std::min(xs[i], cx), b = std::min(ys[i], cy);
      rx[a] += 1.0;
      ry[b] += 1.0;
      cell[a * (cy + 1) + b] += 1.0;
    }
    auto min_nonzero = [](const std::vector<double>& v) {
      double m = std::numeric_limits<double>::infinity();
      for (double x : v) {
        if (x > 0.0) m = std::min(m, x);
      }
      return m;
    };
    const double mx = min_nonzero(rx), my = min_nonzero(ry);
    if (mx * my / n >= kMinExpected) {
      std::vector<GofBin> bins;
      int used_x = 0, used_y = 0;
      for (double v : rx) used_x += v > 0.0;
      for (double v : ry) used_y += v > 0.0;
      for (Count a = 0; a <= cx; ++a) {
        for (Count b = 0; b <= cy; ++b) {
          if (rx[a] == 0.0 || ry[b] == 0.0) continue;
          GofBin bin;
          bin.label = (a == cx ? ">=" : "") + std::to_string(a) + "," + (b == cy ? ">=" : "") + std::to_string(b);
          bin.observed = cell[a * (cy + 1) + b];
          bin.expected = rx[a] * ry[b] / n;
          bins.push_back(std::move(bin));
        }
      }
      if (used_x < 2 || used_y < 2) throw PreconditionError("insufficient data: a variable has one category");
      return finish(std::move(bins), (used_x - 1) * (used_y - 1));
    }
    // Merge the top category of the variable holding the sparsest one.
    const bool shrink_x = (mx <= my && cx > 1) || cy <= 1;
    if (shrink_x) {
      if (cx <= 1) throw PreconditionError("insufficient data for a 2x2 table");
      --cx;
    } else {
      --cy;
    }
  }
}

GofReport independence_test(const ComponentArray& components, const ComponentPair& pair) {
  const auto* rk = components.row(pair.k);
  const auto* rl = components.row(pair.l);
  if (!rk || !rl) throw PreconditionError("insufficient data: missing component row");
  const std::int64_t d = pair.j2 - pair.j;
  std::vector<Count> xs, ys;
  if (pair.k == pair.l) {
    if (d == 0) throw InputError("a label cannot be tested against itself");
    const std::int64_t lag = std::abs(d);
    for (std::int64_t b = rk->offset; b + 2 * lag <= rk->end(); b += 2 * lag) {
      for (std::int64_t u = b; u < b + lag; ++u) {
        xs.push_back(d > 0 ? rk->at(u) : rk->at(u + lag));
        ys.push_back(d > 0 ? rk->at(u + lag) : rk->at(u));
      }
    }
  } else {
    const std::int64_t lo = std::max(rk->offset, rl->offset - d);
    const std::int64_t hi = std::min(rk->end(), rl->end() - d);
    for (std::int64_t t = lo; t < hi; ++t) {
      xs.push_back(rk->at(t));
      ys.push_back(rl->at(t + d));
    }
  }
  if (xs.size() < 1000) throw PreconditionError("insufficient data: fewer than 1000 pairs");
  return independence_chi2(xs, ys);
}

std::vector<GofReport> independence_test(const ComponentArray& components, std::span<const ComponentPair> pairs) {
  std::vector<GofReport> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(independence_test(components, p));
  return out;
}

GofReport two_sample_chi2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InputError("histograms must have the same nonzero length");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  const double n = na + nb;
  if (na == 0.0 || nb == 0.0) throw PreconditionError("insufficient data: empty histogram");
  // Merge adjacent categories until both expected counts reach 5.
  std::vector<std::pair<double, double>> cats;
  std::pair<double, double> cur{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    cur.first += a[i];
    cur.second += b[i];
    const double tot = cur.first + cur.second;
    if (std::min(tot * na / n, tot * nb / n) >= kMinExpected) {
      cats.push_back(cur);
      cur = {0.0, 0.0};
    }
  }
  if (cur.first + cur.second > 0.0) {
    if (cats.empty()) throw PreconditionError("insufficient data");
    cats.back().first += cur.first;
    cats.back().second += cur.second;
  }
  if (cats.size() < 2) throw PreconditionError("insufficient data: fewer than two categories");
  std::vector<GofBin> bins;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const double tot = cats[i].first + cats[i].second;
    bins.push_back({"a" + std::to_string(i), cats[i].first, tot * na / n});
    bins.push_back({"b" + std::to_string(i), cats[i].second, tot * nb / n});
  }
  return finish(std::move(bins), static_cast<int>(cats.size()) - 1);
}

double proportion_z(double count_a, double n_a, double count_b, double n_b) {
  const double pa = count_a / n_a, pb = count_b / n_b;
  const double se = std::sqrt(pa * (1.0 - pa) / n_a + pb * (1.0 - pb) / n_b);
  if (se == 0.0) return pa == pb ? 0.0 : std::numeric_limits<double>::infinity();
  return (pa - pb) / se;
}

double ks_uniform_distance(std::vector<double> samples) {
  if (samples.empty()) return 1.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    d = std::max({d, (i + 1) / n - samples[i], samples[i] - i / n});
  }
  return d;
}

BlockLaw bernoulli_block_law(double lambda) {
  return [lambda](std::string_view block) {
    double p = 1.0;
    for (char c : block) p *= c == '1' ? lambda : 1.0 - lambda;
    return p;
  };
}

BlockLaw markov_block_law(const std::array<std::array<double, 2>, 2>& Q) {
  const double pi1 = Q[0][1] / (Q[0][1] + Q[1][0]);
  return [Q, pi1](std::string_view block) {
    if (block.empty()) return 1.0;
    double p = block[0] == '1' ? pi1 : 1.0 - pi1;
    for (std::size_t i = 1; i < block.size(); ++i) p *= Q[block[i - 1] == '1'][block[i] == '1'];
    return p;
  };
}

TInvarianceReport block_comparison(const BallConfig& before, const BallConfig& after, Coord from, Coord to,
                                   int block_len, int batches, const BlockLaw& exact) {
  if (block_len < 1 || block_len > 16) throw InputError("block length must lie in 1..16");
  if (batches < 2) throw InputError("need at least two batches");
  const Coord positions = to - from - block_len + 1;
  const Coord per_batch = positions / batches;
  if (per_batch < 1) throw PreconditionError("window too small for the requested batches");
  const std::size_t patterns = std::size_t{1} << block_len;

  // counts[b][p]: occurrences of pattern p starting in batch b.
  std::vector<std::vector<double>> cb(static_cast<std::size_t>(batches), std::vector<double>(patterns, 0.0));
  std::vector<std::vector<double>> ca = cb;
  auto code_at = [block_len](const BallConfig& c, Coord z) {
    std::size_t code = 0;
    for (int i = 0; i < block_len; ++i) code = (code << 1) | c[z + i];
    return code;
  };
  for (int b = 0; b < batches; ++b) {
    const Coord start = from + b * per_batch;
    for (Coord z = start; z < start + per_batch; ++z) {
      cb[static_cast<std::size_t>(b)][code_at(before, z)] += 1.0;
      ca[static_cast<std::size_t>(b)][code_at(after, z)] += 1.0;
    }
  }
  TInvarianceReport rep;
  rep.boxes = to - from;
  const double m = static_cast<double>(per_batch);
  const double nb = batches;
  for (std::size_t p = 0; p < patterns; ++p) {
    BlockFrequency f;
    for (int i = block_len - 1; i >= 0; --i) f.block.push_back(((p >> i) & 1) ? '1' : '0');
    double sum_d = 0.0, sum_d2 = 0.0, sum_x = 0.0, sum_x2 = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double x = cb[static_cast<std::size_t>(b)][p] / m;
      const double y = ca[static_cast<std::size_t>(b)][p] / m;
      sum_d += y - x;
      sum_d2 += (y - x) * (y - x);
      sum_x += x;
      sum_x2 += x * x;
      f.after += y;
    }
    f.before = sum_x / nb;
    f.after /= nb;
    const double mean_d = sum_d / nb;
    const double var_d = std::max(0.0, (sum_d2 - nb * mean_d * mean_d) / (nb - 1.0));
    f.se = std::sqrt(var_d / nb);
    f.z = f.se > 0.0 ? mean_d / f.se : (mean_d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (exact) {
      f.exact = exact(f.block);
      const double var_x = std::max(0.0, (sum_x2 - nb * f.before * f.before) / (nb - 1.0));
      const double se_x = std::sqrt(var_x / nb);
      f.z_exact = se_x > 0.0 ? (f.before - *f.exact) / se_x : 0.0;
    }
    rep.max_abs_z = std::max(rep.max_abs_z, std::abs(f.z));
    rep.blocks.push_back(std::move(f));
  }
  return rep;
}

TInvarianceReport t_invariance_test(const ExcursionSource& source, const TInvarianceOptions& options,
                                    const BlockLaw& exact) {
  if (options.steps < 0) throw InputError("steps must be nonnegative");
  // The carrier is empty at every record and T is causal, so T^t eta is exact on any
  // window that starts at a record; the sample's window starts at one.
  const auto sample = sample_anti_palm(source, {options.boxes, 0, options.cap}, options.seed);
  const BallConfig after = evolve(sample.config, options.steps);
  auto rep = block_comparison(sample.config, after, 0, options.boxes, options.block_len, options.batches, exact);
  rep.steps = options.steps;
  rep.capped = sample.capped;
  return rep;
}

ShiftReport component_shift_check(const BallConfig& config) {
  ShiftReport rep;
  const Coord anchor = config.origin() - 1;
  const BallConfig eta = config.shifted(-anchor);
  const BallConfig teta = evolve(config).shifted(-anchor);
  rep.counts_conserved = soliton_counts(eta) == soliton_counts(teta);
  const ComponentArray d0 = decompose(eta);
  const ComponentArray d1 = decompose(teta);
  const int top = std::max(d0.max_size(), d1.max_size());
  for (int k = 1; k <= top; ++k) {
    if (d0.trimmed(k) != d1.trimmed(k)) {
      rep.rows_match = false;
      rep.mismatched.push_back(k);
      continue;
    }
    const auto f0 = d0.first_nonzero(k), f1 = d1.first_nonzero(k);
    if (f0 && f1) rep.offsets[k] = *f1 - *f0;
  }
  return rep;
}

}  // namespace bbs
