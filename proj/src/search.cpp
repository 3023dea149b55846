#include "locfuse/search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "locfuse/analyze.hpp"
#include "locfuse/parallel.hpp"

namespace locfuse {

namespace {

float squared_l2(const float* a, const float* b, std::size_t dim) {
  float acc = 0.0f;
  for (std::size_t k = 0; k < dim; ++k) {
    const float d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

// Smaller distance wins; equal distances go to the lower row, which is the
// lower point id because codebook rows are sorted by point id.
void offer(SearchHit& best, float& second, std::size_t row, float d) {
  if (d < best.distance || (d == best.distance && row < best.entry)) {
    second = std::min(second, best.distance);
    best = SearchHit{row, d};
  } else {
    second = std::min(second, d);
  }
}

}  // namespace

SearchIndex SearchIndex::build(const Codebook& cb, const SearchParams& params) {
  SearchIndex index(cb, params);
  if (params.mode == IndexMode::exact) return index;

  if (params.n_cells < 1 || params.n_cells > cb.size()) {
    throw Error(ErrorCode::TooManyCells,
                std::to_string(params.n_cells) + " cells for " +
                    std::to_string(cb.size()) + " codebook entries");
  }
  if (params.n_probe < 1 || params.n_probe > params.n_cells) {
    throw Error(ErrorCode::InvalidArgument, "n_probe must lie in [1, n_cells]");
  }
  const KMeansResult km = kmeans(cb.descriptors, params.n_cells, params.seed);
  const std::size_t dim = cb.dim();
  index.centroids_.resize(km.k * dim);
  for (std::size_t i = 0; i < index.centroids_.size(); ++i) {
    index.centroids_[i] = static_cast<float>(km.centroids[i]);
  }
  index.cells_.assign(km.k, {});
  for (std::size_t r = 0; r < km.assignment.size(); ++r) {
    index.cells_[km.assignment[r]].push_back(static_cast<std::uint32_t>(r));
  }
  return index;
}

void SearchIndex::scan(std::span<const float> query,
                       std::span<const std::uint32_t> rows, SearchHit& best,
                       float& second, std::vector<float>& scratch) const {
  const std::size_t dim = cb_->dim();
  const DescriptorBank& bank = cb_->descriptors;
  for (std::size_t begin = 0; begin < rows.size(); begin += kSearchBlockRows) {
    const std::size_t end = std::min(rows.size(), begin + kSearchBlockRows);
    scratch.resize((end - begin) * dim);
    for (std::size_t i = begin; i < end; ++i) {
      bank.read_row(rows[i], std::span<float>(scratch.data() + (i - begin) * dim, dim));
    }
    for (std::size_t i = begin; i < end; ++i) {
      offer(best, second, rows[i],
            squared_l2(query.data(), scratch.data() + (i - begin) * dim, dim));
    }
  }
}

void SearchIndex::scan_all(std::span<const float> query, SearchHit& best,
                           float& second, std::vector<float>& scratch) const {
  const std::size_t dim = cb_->dim();
  const DescriptorBank& bank = cb_->descriptors;
  const std::size_t n = cb_->size();
  const bool widen = bank.dtype() == Dtype::f16;
  for (std::size_t begin = 0; begin < n; begin += kSearchBlockRows) {
    const std::size_t end = std::min(n, begin + kSearchBlockRows);
    const float* block;
    if (widen) {
      scratch.resize((end - begin) * dim);
      for (std::size_t r = begin; r < end; ++r) {
        bank.read_row(r, std::span<float>(scratch.data() + (r - begin) * dim, dim));
      }
      block = scratch.data();
    } else {
      block = bank.f32_data().data() + begin * dim;
    }
    for (std::size_t r = begin; r < end; ++r) {
      offer(best, second, r, squared_l2(query.data(), block + (r - begin) * dim, dim));
    }
  }
}

std::optional<SearchHit> SearchIndex::nearest(std::span<const float> query) const {
  if (query.size() != cb_->dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "query dim " + std::to_string(query.size()) + " != codebook dim " +
                    std::to_string(cb_->dim()));
  }
  if (cb_->size() == 0) return std::nullopt;
  const float inf = std::numeric_limits<float>::infinity();
  SearchHit best{cb_->size(), inf};
  float second = inf;
  std::vector<float> scratch;
  if (params_.mode == IndexMode::exact) {
    scan_all(query, best, second, scratch);
  } else {
    const std::size_t dim = cb_->dim();
    std::vector<std::pair<float, std::size_t>> cell_dist(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      cell_dist[c] = {squared_l2(query.data(), centroids_.data() + c * dim, dim), c};
    }
    const std::size_t probe = std::min(params_.n_probe, cells_.size());
    std::partial_sort(cell_dist.begin(), cell_dist.begin() + static_cast<long>(probe),
                      cell_dist.end());
    for (std::size_t p = 0; p < probe; ++p) {
      scan(query, cells_[cell_dist[p].second], best, second, scratch);
    }
  }
  if (best.entry >= cb_->size()) return std::nullopt;
  if (params_.ratio_test) {
    const double r2 = params_.ratio * params_.ratio;
    if (!(static_cast<double>(best.distance) < r2 * static_cast<double>(second))) {
      return std::nullopt;
    }
  }
  return best;
}

MatchSet SearchIndex::match(const DescriptorBank& queries,
                            std::span<const Eigen::Vector2d> keypoints) const {
  if (queries.rows() != keypoints.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(queries.rows()) + " query rows but " +
                    std::to_string(keypoints.size()) + " keypoints");
  }
  if (queries.dim() != cb_->dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "query dim " + std::to_string(queries.dim()) + " != codebook dim " +
                    std::to_string(cb_->dim()));
  }
  if (queries.rows() == 0) return {};
  std::vector<std::optional<SearchHit>> hits(queries.rows());
  parallel_for(queries.rows(), [&](std::size_t begin, std::size_t end) {
    std::vector<float> q(queries.dim());
    for (std::size_t i = begin; i < end; ++i) {
      queries.read_row(i, q);
      hits[i] = nearest(q);
    }
  });
  MatchSet out;
  out.reserve(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (!hits[i]) continue;
    Match m;
    m.query_index = i;
    m.keypoint = keypoints[i];
    m.point_id = cb_->point_ids[hits[i]->entry];
    m.point_coord = cb_->coords[hits[i]->entry].cast<double>();
    m.distance = hits[i]->distance;
    out.push_back(m);
  }
  return out;
}

}  // namespace locfuse
