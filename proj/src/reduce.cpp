#include "locfuse/reduce.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "locfuse/rng.hpp"

namespace locfuse {

std::string_view to_string(ReduceMethod method) {
  switch (method) {
    case ReduceMethod::gaussian: return "gaussian";
    case ReduceMethod::random0: return "random0";
    case ReduceMethod::first: return "first";
    case ReduceMethod::center: return "center";
    case ReduceMethod::last: return "last";
  }
  return "unknown";
}

std::optional<ReduceMethod> parse_reduce_method(std::string_view name) {
  if (name == "gaussian") return ReduceMethod::gaussian;
  if (name == "random0" || name == "random-0") return ReduceMethod::random0;
  if (name == "first") return ReduceMethod::first;
  if (name == "center") return ReduceMethod::center;
  if (name == "last") return ReduceMethod::last;
  return std::nullopt;
}

Reducer::Reducer(const ReducerSpec& spec) : spec_(spec) {
  const std::size_t g = spec.in_dim;
  const std::size_t d = spec.out_dim;
  if (d < 1 || d > g) {
    throw Error(ErrorCode::InvalidDims,
                "reducer needs 1 <= out_dim <= in_dim, got out_dim=" +
                    std::to_string(d) + " in_dim=" + std::to_string(g));
  }
  if (static_cast<std::uint8_t>(spec.method) > 4) {
    throw Error(ErrorCode::InvalidArgument, "unknown reduce method");
  }
  switch (spec.method) {
    case ReduceMethod::first:
      indices_.resize(d);
      std::iota(indices_.begin(), indices_.end(), 0u);
      break;
    case ReduceMethod::last:
      indices_.resize(d);
      std::iota(indices_.begin(), indices_.end(), static_cast<std::uint32_t>(g - d));
      break;
    case ReduceMethod::center:
      indices_.resize(d);
      std::iota(indices_.begin(), indices_.end(),
                static_cast<std::uint32_t>((g - d) / 2));
      break;
    case ReduceMethod::random0: {
      std::vector<std::uint32_t> order(g);
      std::iota(order.begin(), order.end(), 0u);
      SplitMix64 rng(spec.seed);
      for (std::size_t i = g - 1; i >= 1; --i) {
        const std::size_t j = rng.index(i + 1);
        std::swap(order[i], order[j]);
      }
      indices_.assign(order.begin(), order.begin() + static_cast<long>(d));
      break;
    }
    case ReduceMethod::gaussian: {
      projection_.resize(d * g);
      SplitMix64 rng(spec.seed);
      const double stddev = 1.0 / std::sqrt(static_cast<double>(d));
      for (double& v : projection_) v = stddev * rng.normal();
      break;
    }
  }
}

Reducer Reducer::with_projection(const ReducerSpec& spec,
                                 std::vector<double> projection) {
  if (spec.method != ReduceMethod::gaussian ||
      projection.size() != std::size_t{spec.in_dim} * spec.out_dim) {
    throw Error(ErrorCode::InvalidDims, "projection shape does not match the reducer dims");
  }
  Reducer r(ReducerSpec{ReduceMethod::first, spec.in_dim, spec.out_dim, spec.seed,
                        spec.normalize});
  r.spec_ = spec;
  r.indices_.clear();
  r.projection_ = std::move(projection);
  return r;
}

Descriptor Reducer::reduce(std::span<const float> global) const {
  const std::size_t g = spec_.in_dim;
  const std::size_t d = spec_.out_dim;
  if (global.size() != g) {
    throw Error(ErrorCode::DimensionMismatch,
                "global descriptor has dim " + std::to_string(global.size()) +
                    ", reducer expects " + std::to_string(g));
  }
  std::vector<double> out(d);
  if (spec_.method == ReduceMethod::gaussian) {
    for (std::size_t r = 0; r < d; ++r) {
      const double* row = projection_.data() + r * g;
      double acc = 0.0;
      for (std::size_t c = 0; c < g; ++c) acc += row[c] * global[c];
      out[r] = acc;
    }
  } else {
    for (std::size_t k = 0; k < d; ++k) out[k] = global[indices_[k]];
  }
  double norm2 = 0.0;
  for (double v : out) norm2 += v * v;
  if (!(norm2 > 0.0)) {
    throw Error(ErrorCode::ZeroVector, "reduced global descriptor is zero");
  }
  Descriptor result(d);
  const double inv = spec_.normalize ? 1.0 / std::sqrt(norm2) : 1.0;
  for (std::size_t k = 0; k < d; ++k) result[k] = static_cast<float>(out[k] * inv);
  return result;
}

Reducer build_reducer(ReduceMethod method, std::size_t in_dim,
                      std::size_t out_dim, std::uint64_t seed, bool normalize) {
  if (out_dim < 1 || out_dim > in_dim) {
    throw Error(ErrorCode::InvalidDims,
                "reducer needs 1 <= D <= G, got D=" + std::to_string(out_dim) +
                    " G=" + std::to_string(in_dim));
  }
  return Reducer(ReducerSpec{method, static_cast<std::uint32_t>(in_dim),
                             static_cast<std::uint32_t>(out_dim), seed, normalize});
}

}  // namespace locfuse
