#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expramsey/search/family.hpp"

namespace expramsey::search {

struct RamseyOptions {
  SearchBudget budget;
  std::uint64_t seed = 0;
  /// Flip limit per restart and number of restarts for the local searcher.
  std::uint64_t max_flips = 200'000;
  unsigned max_restarts = 50;
};

/// Least N such that every k-colouring of [N] has a monochromatic instance,
/// or the fact that no N <= n_max forces one.
struct RamseyComputation {
  std::string kind;  // "exptriple" or "vdw"
  unsigned k = 0;
  unsigned length = 0;  // progression length for vdw
  std::uint64_t n_max = 0;
  bool exact = false;
  /// The value when exact, otherwise n_max.
  std::uint64_t value = 0;
  /// Colouring of [value - 1] (of [n_max] when not exact); entry i is the colour of i + 1.
  std::vector<unsigned> witness;
  std::uint64_t relevant_values = 0;
  std::uint64_t constraints = 0;
  std::uint64_t backtrack_nodes = 0;

  struct CrossCheck {
    std::string method;
    bool ran = false;
    /// The independent searcher found an instance-free colouring of [value - 1].
    bool agreed = false;
    std::uint64_t restarts = 0;
    std::uint64_t flips = 0;
  } cross_check;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

/// Backtracking over the values that occur in some exponential triple below
/// N, with N stepping through perfect powers. Colours are introduced in
/// first-use order and domains are pruned by not-all-equal propagation. The
/// witness for N - 1 is re-derived by a seeded random-restart local search.
RamseyComputation exp_ramsey_number(unsigned k, std::uint64_t n_max, const RamseyOptions& options = {});

/// W_k(l) by backtracking with the same symmetry breaking.
RamseyComputation vdw_number(unsigned k, unsigned length, std::uint64_t n_max, const RamseyOptions& options = {});

/// Whether colouring (entry i colours i + 1) has no monochromatic {a, b, a^b}
/// inside [colouring.size()]. Plain double loop, no shared code with the solver.
bool avoids_exp_triples(std::span<const unsigned> colouring);
/// Whether colouring has no monochromatic l-term arithmetic progression.
bool avoids_progressions(std::span<const unsigned> colouring, unsigned length);

/// CNF for "a k-colouring of [n] without a monochromatic exponential triple",
/// one variable per (relevant value, colour).
std::string exp_triple_dimacs(unsigned k, std::uint64_t n);

struct GridWitness {
  std::vector<std::uint64_t> corner;
  std::uint64_t step = 0;
  unsigned colour = 0;
};

/// colours has N^n entries; the point (p_1, ..., p_n) in [N]^n sits at index
/// sum (p_i - 1) N^(i-1). Looks for s, d >= 1 with f constant on
/// s + d * {0..length}^n, smallest d first, then corners in lexicographic order.
std::optional<GridWitness> find_monochromatic_grid(std::span<const unsigned> colours, std::uint64_t N, unsigned n,
                                                   unsigned length, const SearchBudget& budget = {});

struct FuWitness {
  /// Blocks as bitmasks over [N] (bit i - 1 stands for i).
  std::vector<std::uint32_t> blocks;
  unsigned colour = 0;
};

/// colours has 2^N entries indexed by subset bitmask (entry 0 unused).
/// Finds nonempty A_1, ..., A_m with max A_i < min A_{i+1} and every
/// nonempty union of blocks the same colour; blocks are tried in increasing
/// bitmask order. N <= 20.
std::optional<FuWitness> ordered_fu_search(std::span<const unsigned> colours, unsigned N, unsigned m,
                                           const SearchBudget& budget = {});

}  // namespace expramsey::search
