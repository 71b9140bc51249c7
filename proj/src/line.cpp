#include "bbs/line.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <thread>

#include "bbs/error.hpp"

namespace bbs {

namespace {

constexpr std::size_t kChunk = 4096;

}  // namespace

AnchoredConfig assemble(const ExcursionSequence& excursions) {
  AnchoredConfig out;
  out.first_index = excursions.first_index;
  out.config = config_from_excursions(excursions, &out.records);
  return out;
}

ExcursionSequence extract_excursions(const AnchoredConfig& anchored) {
  if (anchored.first_index > 0 || anchored.end_index() < 0 || anchored.record(0) != 0) {
    throw PreconditionError("record 0 must sit at the origin");
  }
  ExcursionSequence seq;
  seq.first_index = anchored.first_index;
  seq.items.reserve(anchored.excursion_count());
  for (std::int64_t i = anchored.first_index; i < anchored.end_index(); ++i) {
    seq.items.push_back(Excursion::from_config(anchored.config, anchored.record(i), anchored.record(i + 1)));
  }
  return seq;
}

ExcursionSource nu_source(const AlphaParams& alpha) {
  auto sampler = std::make_shared<const ExcursionSampler>(alpha);
  return [sampler](Rng& rng) { return sampler->sample_excursion(rng); };
}

ExcursionSource markov_chain_source(const std::array<std::array<double, 2>, 2>& Q) {
  markov_alpha(Q);  // validates Q
  const double up_after_empty = Q[0][1];
  const double up_after_ball = Q[1][1];
  return [=](Rng& rng) {
    std::vector<Bit> bits;
    Bit prev = 0;
    std::size_t height = 0;
    while (true) {
      const Bit b = rng.bernoulli(prev ? up_after_ball : up_after_empty) ? 1 : 0;
      if (!b && height == 0) break;  // the walk drops below the record
      if (b) ++height; else --height;
      bits.push_back(b);
      prev = b;
    }
    return Excursion::from_bits(std::move(bits));
  };
}

ExcursionSource bernoulli_walk_source(double lambda) {
  bernoulli_alpha(lambda);
  return markov_chain_source({{{1.0 - lambda, lambda}, {1.0 - lambda, lambda}}});
}

std::vector<Excursion> sample_excursions(const ExcursionSource& source, std::size_t count, std::uint64_t seed,
                                         unsigned jobs) {
  std::vector<Excursion> out(count);
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::size_t c) {
    Rng rng(seed, c);
    const std::size_t hi = std::min(count, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < hi; ++i) out[i] = source(rng);
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(chunks, 1)));
  if (jobs <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
    });
  }
  return out;
}

AnchoredConfig sample_palm(const ExcursionSource& source, std::size_t count, std::uint64_t seed, unsigned jobs) {
  ExcursionSequence seq;
  seq.first_index = -static_cast<std::int64_t>(count / 2);
  seq.items = sample_excursions(source, count, seed, jobs);
  return assemble(seq);
}

AnchoredConfig sample_palm(const AlphaParams& alpha, std::size_t count, std::uint64_t seed, unsigned jobs) {
  return sample_palm(nu_source(alpha), count, seed, jobs);
}

AnchoredConfig sample_bernoulli_palm(double lambda, std::size_t count, std::uint64_t seed, unsigned jobs) {
  return sample_palm(bernoulli_walk_source(lambda), count, seed, jobs);
}

AnchoredConfig sample_markov_palm(const std::array<std::array<double, 2>, 2>& Q, std::size_t count,
                                  std::uint64_t seed, unsigned jobs) {
  return sample_palm(markov_chain_source(Q), count, seed, jobs);
}

AntiPalmSample sample_anti_palm(const ExcursionSource& source, const AntiPalmOptions& options, std::uint64_t seed) {
  if (options.boxes < 0 || options.margin < 0 || options.cap == 0) {
    throw PreconditionError("anti-Palm window needs boxes >= 0, margin >= 0 and a positive cap");
  }
  AntiPalmSample out;
  Rng rng(seed, 0);

  // Length-biased covering block: accept eps with probability (2n+1)/cap.
  Excursion cover;
  while (true) {
    cover = source(rng);
    ++out.proposals;
    const std::uint64_t len = 2 * cover.half_length() + 1;
    if (len >= options.cap) {
      ++out.capped;
      break;
    }
    if (rng.below(options.cap) < len) break;
    if (out.proposals > 100'000'000) throw PreconditionError("length-biased draw does not terminate");
  }
  // The block occupies its record and 2n boxes; the origin is uniform among them.
  const Coord u = static_cast<Coord>(rng.below(2 * cover.half_length() + 1));
  const Coord r0 = -u;

  std::vector<Excursion> right{cover};
  Coord r_hi = r0 + 2 * static_cast<Coord>(cover.half_length()) + 1;
  while (r_hi < options.boxes + options.margin) {
    right.push_back(source(rng));
    r_hi += 2 * static_cast<Coord>(right.back().half_length()) + 1;
  }
  std::vector<Excursion> left;
  Coord r_lo = r0;
  while (r_lo > -options.margin) {
    left.push_back(source(rng));
    r_lo -= 2 * static_cast<Coord>(left.back().half_length()) + 1;
  }

  std::vector<Bit> bits(static_cast<std::size_t>(r_hi - r_lo + 1), Bit{0});
  Coord r = r_lo;
  auto place = [&](const Excursion& e) {
    out.records.push_back(r);
    const auto eb = e.bits();
    std::copy(eb.begin(), eb.end(), bits.begin() + (r + 1 - r_lo));
    r += 2 * static_cast<Coord>(e.half_length()) + 1;
  };
  for (auto it = left.rbegin(); it != left.rend(); ++it) place(*it);
  for (const auto& e : right) place(e);
  out.records.push_back(r);
  out.config = BallConfig(r_lo, std::move(bits));
  return out;
}

}  // namespace bbs
