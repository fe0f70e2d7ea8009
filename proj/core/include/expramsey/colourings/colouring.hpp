#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "expramsey/tower/exp_term.hpp"

namespace expramsey::colourings {

using tower::ExpTerm;

/// A deterministic map from positive integers (as terms) to colours 1..k.
/// Implementations are immutable and safe to share between threads.
class Colouring {
 public:
  virtual ~Colouring() = default;

  virtual unsigned k() const = 0;
  virtual unsigned colour(const ExpTerm& x) const = 0;
  /// Same as colour(ExpTerm::literal(x)); overridden where a faster path exists.
  virtual unsigned colour(std::uint64_t x) const { return colour(ExpTerm::literal(x)); }

  /// Spec string that parse_colouring maps back to an equivalent colouring.
  virtual std::string descriptor() const = 0;
  /// Human-readable name of a colour, e.g. "(0,3)" for the pair colouring.
  virtual std::string label(unsigned c) const { return std::to_string(c); }
};

using ColouringPtr = std::shared_ptr<const Colouring>;

/// k = r+3: f(1) = r+3, otherwise ((L(x) - 1) mod (r+2)) + 1.
ColouringPtr logstar_colouring(unsigned r);

/// k = 16: the pair (x mod 4, l(x) mod 4), encoded as 4*(x mod 4) + (l(x) mod 4) + 1.
ColouringPtr schur_exp_colouring();

/// Every element gets colour 1 out of k.
ColouringPtr constant_colouring(unsigned k = 1);

/// map[i] is the colour of i+1; colours lie in 1..k. OutOfDomain past the end.
ColouringPtr table_colouring(std::vector<unsigned> map, unsigned k, std::string source = "");
/// {"k": int, "map": [c_1, ..., c_N]}
ColouringPtr table_colouring_from_json(const std::string& text, std::string source = "");
ColouringPtr table_colouring_from_file(const std::string& path);

/// Componentwise colouring, mixed-radix encoded; k is the product of the k's.
ColouringPtr product_colouring(std::vector<ColouringPtr> parts);

/// Mini-language:
///   logstar:r=1 | schurexp | const:k=1 | table:path.json
///   lacunary:seq=n*2^n,nmax=12 | pow2abb:range=12 | abbb:range=8
///   product:spec1+spec2
ColouringPtr parse_colouring(std::string_view spec);

}  // namespace expramsey::colourings
