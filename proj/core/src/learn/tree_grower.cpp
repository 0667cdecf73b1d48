// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stormrider/learn/tree_grower.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stormrider::learn {
namespace {

struct HistBin {
  double g = 0.0;
  double h = 0.0;
  std::uint32_t n = 0;
};

using Histogram = std::vector<HistBin>;

struct Split {
  bool found = false;
  std::uint32_t feature = 0;
  std::uint32_t bin = 0;
  double reduction = 0.0;  // before gamma
  double score = 0.0;      // reduction - gamma
  std::uint32_t left_count = 0;
};

struct Pending {
  std::int32_t node = 0;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  int depth = 0;
  Histogram hist;  // empty until built
};

}  // namespace

TreeGrower::TreeGrower(const BinnedMatrix& bins, const BinMapper& mapper) : bins_(bins), mapper_(mapper) {
  if (bins.cols() != mapper.features()) throw std::invalid_argument("TreeGrower: bin matrix and mapper disagree");
  offset_.resize(mapper.features());
  for (std::size_t f = 0; f < mapper.features(); ++f) {
    offset_[f] = total_bins_;
    total_bins_ += static_cast<std::uint32_t>(mapper.bins(f));
  }
}

GrowResult TreeGrower::grow(std::span<const double> grad, std::span<const double> hess,
                            std::vector<std::uint32_t> rows, std::span<const std::uint32_t> features,
                            const GrowerSettings& s, const Rng& rng) const {
  if (grad.size() != bins_.rows() || hess.size() != bins_.rows())
    throw std::invalid_argument("TreeGrower: gradient length differs from row count");
  if (rows.empty()) throw std::invalid_argument("TreeGrower: no rows to grow on");
  if (features.empty()) throw std::invalid_argument("TreeGrower: no candidate features");

  const bool sample_per_node =
      s.per_node_features > 0 && static_cast<std::size_t>(s.per_node_features) < features.size();
  const bool subtract = s.subtract_histograms && !sample_per_node;
  const auto min_obs = static_cast<std::uint32_t>(std::max(1, s.min_obs_leaf));

  GrowResult out;
  out.rows = std::move(rows);
  auto& nodes = out.tree.nodes;
  std::vector<std::uint32_t> scratch(out.rows.size());
  std::vector<Histogram> pool;

  auto take_hist = [&]() {
    if (pool.empty()) return Histogram(total_bins_);
    Histogram h = std::move(pool.back());
    pool.pop_back();
    return h;
  };
  auto give_hist = [&](Histogram&& h) {
    if (!h.empty()) pool.push_back(std::move(h));
  };

  auto build = [&](Histogram& hist, std::uint32_t begin, std::uint32_t end,
                   std::span<const std::uint32_t> feats) {
    const std::uint32_t* r = out.rows.data();
    const auto nf = static_cast<std::ptrdiff_t>(feats.size());
    const std::size_t work = static_cast<std::size_t>(end - begin) * feats.size();
#pragma omp parallel for schedule(static) if (work > 65536)
    for (std::ptrdiff_t fi = 0; fi < nf; ++fi) {
      const std::uint32_t f = feats[static_cast<std::size_t>(fi)];
      HistBin* hb = hist.data() + offset_[f];
      std::fill(hb, hb + mapper_.bins(f), HistBin{});
      const std::uint8_t* col = bins_.column(f).data();
      for (std::uint32_t i = begin; i < end; ++i) {
        const std::uint32_t row = r[i];
        HistBin& b = hb[col[row]];
        b.g += grad[row];
        b.h += hess[row];
        ++b.n;
      }
    }
  };

  auto sums = [&](std::uint32_t begin, std::uint32_t end) {
    double g = 0.0, h = 0.0;
    for (std::uint32_t i = begin; i < end; ++i) {
      g += grad[out.rows[i]];
      h += hess[out.rows[i]];
    }
    return std::pair{g, h};
  };

  auto can_split = [&](std::uint32_t n, int depth) {
    return (s.max_depth == 0 || depth < s.max_depth) && n >= 2 * min_obs;
  };

  auto best_split = [&](const Histogram& hist, std::span<const std::uint32_t> feats, double G, double H,
                        std::uint32_t n) {
    Split best;
    const double parent = (H + s.lambda) > 0.0 ? G * G / (H + s.lambda) : 0.0;
    const double tolerance = 1e-12 * std::max(1.0, std::abs(parent));
    for (const std::uint32_t f : feats) {
      const HistBin* hb = hist.data() + offset_[f];
      const std::size_t nb = mapper_.bins(f);
      double gl = 0.0, hl = 0.0;
      std::uint32_t nl = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        if (hb[b].n == 0) continue;
        gl += hb[b].g;
        hl += hb[b].h;
        nl += hb[b].n;
        if (nl < min_obs) continue;
        if (n - nl < min_obs) break;
        const double gr = G - gl;
        const double hr = H - hl;
        if (hl + s.lambda <= 0.0 || hr + s.lambda <= 0.0) continue;
        const double reduction = 0.5 * (gl * gl / (hl + s.lambda) + gr * gr / (hr + s.lambda) - parent);
        const double score = reduction - s.gamma;
        if (score > tolerance && (!best.found || score > best.score)) {
          best = {true, f, static_cast<std::uint32_t>(b), reduction, score, nl};
        }
      }
    }
    return best;
  };

  std::vector<std::uint32_t> node_features;
  auto candidates = [&](std::int32_t node) -> std::span<const std::uint32_t> {
    if (!sample_per_node) return features;
    Rng node_rng = rng.split(static_cast<std::uint64_t>(node));
    node_features.assign(features.begin(), features.end());
    const auto k = static_cast<std::size_t>(s.per_node_features);
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(node_rng.below(node_features.size() - i));
      std::swap(node_features[i], node_features[j]);
    }
    node_features.resize(k);
    std::sort(node_features.begin(), node_features.end());
    return node_features;
  };

  auto make_leaf = [&](std::int32_t id, std::uint32_t begin, std::uint32_t end, double G, double H) {
    TreeNode& node = nodes[static_cast<std::size_t>(id)];
    node.feature = -1;
    const double denom = H + s.lambda;
    node.value = denom > 0.0 ? -G / denom : 0.0;
    out.leaves.push_back({id, begin, end});
  };

  nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, 0, static_cast<std::uint32_t>(out.rows.size()), 0, {}});

  while (!stack.empty()) {
    Pending p = std::move(stack.back());
    stack.pop_back();
    const std::uint32_t n = p.end - p.begin;
    nodes[static_cast<std::size_t>(p.node)].cover = n;
    const auto [G, H] = sums(p.begin, p.end);

    if (!can_split(n, p.depth)) {
      give_hist(std::move(p.hist));
      make_leaf(p.node, p.begin, p.end, G, H);
      continue;
    }
    const auto feats = candidates(p.node);
    if (p.hist.empty()) {
      p.hist = take_hist();
      build(p.hist, p.begin, p.end, feats);
    }
    const Split split = best_split(p.hist, feats, G, H, n);
    if (!split.found) {
      give_hist(std::move(p.hist));
      make_leaf(p.node, p.begin, p.end, G, H);
      continue;
    }

    // Stable partition: rows stay ascending inside each child.
    const std::uint8_t* col = bins_.column(split.feature).data();
    std::uint32_t nl = 0, nr = 0;
    for (std::uint32_t i = p.begin; i < p.end; ++i) {
      const std::uint32_t row = out.rows[i];
      if (col[row] <= split.bin) {
        out.rows[p.begin + nl++] = row;
      } else {
        scratch[nr++] = row;
      }
    }
    std::copy(scratch.begin(), scratch.begin() + nr, out.rows.begin() + p.begin + nl);

    const auto left = static_cast<std::int32_t>(nodes.size());
    const auto right = left + 1;
    {
      TreeNode& node = nodes[static_cast<std::size_t>(p.node)];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.bin = static_cast<std::uint8_t>(split.bin);
      node.threshold = static_cast<double>(mapper_.cuts(split.feature)[split.bin]);
      node.left = left;
      node.right = right;
      node.gain = split.reduction;
    }
    nodes.emplace_back();
    nodes.emplace_back();

    Pending lp{left, p.begin, p.begin + nl, p.depth + 1, {}};
    Pending rp{right, p.begin + nl, p.end, p.depth + 1, {}};
    if (subtract) {
      const bool left_small = nl <= nr;
      Pending& small = left_small ? lp : rp;
      Pending& large = left_small ? rp : lp;
      const bool small_needs = can_split(small.end - small.begin, small.depth);
      const bool large_needs = can_split(large.end - large.begin, large.depth);
      if (large_needs) {
        small.hist = take_hist();
        build(small.hist, small.begin, small.end, feats);
        for (const std::uint32_t f : feats) {
          HistBin* dst = p.hist.data() + offset_[f];
          const HistBin* sub = small.hist.data() + offset_[f];
          for (std::size_t b = 0; b < mapper_.bins(f); ++b) {
            dst[b].g -= sub[b].g;
            dst[b].h -= sub[b].h;
            dst[b].n -= sub[b].n;
          }
        }
        large.hist = std::move(p.hist);
        if (!small_needs) give_hist(std::move(small.hist));
      } else if (small_needs) {
        small.hist = std::move(p.hist);
        build(small.hist, small.begin, small.end, feats);
      } else {
        give_hist(std::move(p.hist));
      }
    } else {
      give_hist(std::move(p.hist));
    }
    stack.push_back(std::move(rp));
    stack.push_back(std::move(lp));
  }
  return out;
}

}  // namespace stormrider::learn
