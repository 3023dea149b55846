#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locfuse/codebook.hpp"
#include "locfuse/core.hpp"

namespace locfuse {

enum class IndexMode : std::uint8_t { exact, ivf };

struct SearchParams {
  IndexMode mode = IndexMode::exact;
  std::size_t n_cells = 16;
  std::size_t n_probe = 4;
  std::uint64_t seed = 0;
  // Lowe-style ratio test on squared distances: keep a match only when
  // best < ratio^2 * second_best. Off by default.
  bool ratio_test = false;
  double ratio = 0.8;
};

// Codebook rows are scanned in blocks of this many entries; f16 rows are
// widened one block at a time.
inline constexpr std::size_t kSearchBlockRows = 256;

struct SearchHit {
  std::size_t entry = 0;  // codebook row
  float distance = 0.0f;  // squared Euclidean, float accumulation
};

// Nearest-neighbour index over a codebook. Holds a reference; the codebook
// must outlive the index.
class SearchIndex {
 public:
  static SearchIndex build(const Codebook& cb, const SearchParams& params);

  IndexMode mode() const noexcept { return params_.mode; }
  const SearchParams& params() const noexcept { return params_; }
  const Codebook& codebook() const noexcept { return *cb_; }
  std::size_t n_cells() const noexcept { return cells_.size(); }
  const std::vector<std::vector<std::uint32_t>>& cells() const noexcept {
    return cells_;
  }

  // nullopt for an empty codebook or a rejected ratio test.
  std::optional<SearchHit> nearest(std::span<const float> query) const;

  MatchSet match(const DescriptorBank& queries,
                 std::span<const Eigen::Vector2d> keypoints) const;

 private:
  SearchIndex(const Codebook& cb, const SearchParams& params)
      : cb_(&cb), params_(params) {}

  void scan(std::span<const float> query, std::span<const std::uint32_t> rows,
            SearchHit& best, float& second, std::vector<float>& scratch) const;
  void scan_all(std::span<const float> query, SearchHit& best, float& second,
                std::vector<float>& scratch) const;

  const Codebook* cb_;
  SearchParams params_;
  std::vector<float> centroids_;  // n_cells x dim
  std::vector<std::vector<std::uint32_t>> cells_;
};

}  // namespace locfuse
