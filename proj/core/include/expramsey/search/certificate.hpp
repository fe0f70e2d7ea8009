#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expramsey/colourings/colouring.hpp"
#include "expramsey/search/family.hpp"

namespace expramsey::search {

struct Witness {
  std::vector<std::uint64_t> generators;
  /// Tower syntax, deduplicated by value.
  std::vector<std::string> elements;
  std::vector<std::string> roles;
  unsigned colour = 0;
};

/// Outcome of checking every instance of a family below a bound.
struct Certificate {
  std::string family;
  std::string colouring;
  std::uint64_t bound = 0;
  std::uint64_t seed = 0;
  std::uint64_t instances_checked = 0;
  /// Empty means every instance was non-monochromatic.
  std::optional<Witness> witness;
  /// Only recorded on request; keeps default output byte-reproducible.
  std::optional<double> wall_time;

  bool avoidance_verified() const { return !witness.has_value(); }
  std::string to_json() const;
  static Certificate from_json(const std::string& text);
  /// Header line plus one row per witness element.
  std::string to_csv() const;
};

struct SearchOptions {
  unsigned threads = 1;
  SearchBudget budget;
  bool timing = false;
  /// Recorded in the certificate; drives the sampling in verify_certificate.
  std::uint64_t seed = 0;
};

/// First monochromatic instance in the family's order, or a verified
/// avoidance. For schurplusexp the check runs per colour class (a class
/// holding both a Schur triple and an exponential triple), reporting the
/// same first instance the plain enumeration would.
Certificate find_monochromatic(const colourings::ColouringPtr& colouring, const FamilyPtr& family,
                               std::uint64_t bound, const SearchOptions& options = {});

/// Rebuilds colouring and family from their descriptors. A counterexample
/// must be an admissible instance whose elements all carry the recorded
/// colour. An avoidance claim is recounted, and a seeded random sample of
/// roughly sample_rate of the instances is re-checked (schurplusexp is
/// re-run in full). Never throws; any failure yields false.
bool verify_certificate(const Certificate& cert, double sample_rate = 0.01);

}  // namespace expramsey::search
