#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "locfuse/core.hpp"

namespace locfuse {

enum class ReduceMethod : std::uint8_t {
  gaussian = 0,
  random0 = 1,
  first = 2,
  center = 3,
  last = 4,
};

std::string_view to_string(ReduceMethod method);
std::optional<ReduceMethod> parse_reduce_method(std::string_view name);

// Everything needed to rebuild a Reducer bit-for-bit. Stored in codebook
// headers so queries reuse the build-time reduction.
struct ReducerSpec {
  ReduceMethod method = ReduceMethod::random0;
  std::uint32_t in_dim = 1;
  std::uint32_t out_dim = 1;
  std::uint64_t seed = 0;
  bool normalize = true;

  friend bool operator==(const ReducerSpec&, const ReducerSpec&) = default;
};

// Maps a global descriptor of dimension G onto the local dimension D.
//
// Index methods pick D coordinates:
//   first   [0, D)
//   last    [G-D, G)
//   center  [(G-D)/2, (G-D)/2 + D)
//   random0 the first D entries of a Fisher-Yates shuffle of [0, G):
//           for i = G-1 down to 1: j = rng.next() % (i+1); swap(a[i], a[j])
//           with rng = SplitMix64(seed).
// gaussian multiplies by a D x G matrix with i.i.d. N(0, 1/D) entries,
// filled row-major from SplitMix64(seed).normal().
//
// The result is L2-normalized unless spec.normalize is false.
class Reducer {
 public:
  explicit Reducer(const ReducerSpec& spec);

  const ReducerSpec& spec() const noexcept { return spec_; }
  ReduceMethod method() const noexcept { return spec_.method; }
  std::size_t in_dim() const noexcept { return spec_.in_dim; }
  std::size_t out_dim() const noexcept { return spec_.out_dim; }

  const std::vector<std::uint32_t>& index_list() const noexcept { return indices_; }
  // Row-major D x G; empty for index methods.
  const std::vector<double>& projection() const noexcept { return projection_; }

  Descriptor reduce(std::span<const float> global) const;

  // Test hook: replace the gaussian projection matrix.
  static Reducer with_projection(const ReducerSpec& spec,
                                 std::vector<double> projection);

 private:
  ReducerSpec spec_;
  std::vector<std::uint32_t> indices_;
  std::vector<double> projection_;
};

Reducer build_reducer(ReduceMethod method, std::size_t in_dim,
                      std::size_t out_dim, std::uint64_t seed,
                      bool normalize = true);

inline Descriptor reduce(const Reducer& reducer, std::span<const float> global) {
  return reducer.reduce(global);
}

}  // namespace locfuse
