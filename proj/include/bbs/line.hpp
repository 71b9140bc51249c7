#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/measures.hpp"
#include "bbs/rng.hpp"

namespace bbs {

/// Configuration built from a window of excursions, with its record positions.
struct AnchoredConfig {
  BallConfig config;
  std::int64_t first_index = 0;  // index of the first excursion of the window
  std::vector<Coord> records;    // r(eta, i) for i = first_index .. first_index + count

  std::size_t excursion_count() const { return records.empty() ? 0 : records.size() - 1; }
  std::int64_t end_index() const { return first_index + static_cast<std::int64_t>(excursion_count()); }
  Coord record(std::int64_t i) const { return records.at(static_cast<std::size_t>(i - first_index)); }
};

/// Record 0 at the origin, excursion i between records i and i+1.
AnchoredConfig assemble(const ExcursionSequence& excursions);
/// Inverse of assemble; PreconditionError unless record 0 sits at the origin.
ExcursionSequence extract_excursions(const AnchoredConfig& anchored);

using ExcursionSource = std::function<Excursion(Rng&)>;

/// nu_alpha through its slot-diagram sampler.
ExcursionSource nu_source(const AlphaParams& alpha);
/// Excursions of the walk driven by a two-state Markov chain started in state 0 after a record.
ExcursionSource markov_chain_source(const std::array<std::array<double, 2>, 2>& Q);
/// Excursions of the simple walk that steps up with probability lambda.
ExcursionSource bernoulli_walk_source(double lambda);

/// `count` i.i.d. draws; draw i comes from stream i / 4096, so the result does not depend on `jobs`.
std::vector<Excursion> sample_excursions(const ExcursionSource& source, std::size_t count, std::uint64_t seed,
                                         unsigned jobs = 1);

/// Palm sample: i.i.d. excursions with indices -count/2 .. count - count/2 - 1.
AnchoredConfig sample_palm(const ExcursionSource& source, std::size_t count, std::uint64_t seed, unsigned jobs = 1);
AnchoredConfig sample_palm(const AlphaParams& alpha, std::size_t count, std::uint64_t seed, unsigned jobs = 1);
AnchoredConfig sample_bernoulli_palm(double lambda, std::size_t count, std::uint64_t seed, unsigned jobs = 1);
AnchoredConfig sample_markov_palm(const std::array<std::array<double, 2>, 2>& Q, std::size_t count,
                                  std::uint64_t seed, unsigned jobs = 1);

struct AntiPalmOptions {
  Coord boxes = 0;          // observation window [0, boxes)
  Coord margin = 0;         // extra boxes sampled on both sides
  std::uint64_t cap = 4096; // rejection cap on 2n + 1 for the block covering the origin
};

struct AntiPalmSample {
  BallConfig config;          // window from the first to the last record, both included
  std::vector<Coord> records; // every record inside the window
  std::uint64_t capped = 0;   // covering-block draws whose length exceeded the cap
  std::uint64_t proposals = 0;
};

/// Translation-invariant sample: the block covering the origin is length biased,
/// the origin is uniform inside it, and i.i.d. excursions fill both sides.
AntiPalmSample sample_anti_palm(const ExcursionSource& source, const AntiPalmOptions& options, std::uint64_t seed);

}  // namespace bbs
