#include "blpc/framework.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blpc/errors.hpp"
#include "blpc/metrics.hpp"
#include "blpc/parallel.hpp"

namespace blpc {

namespace {

bool below(const Image& img, const FrameworkConfig& cfg) {
  return img.width() < cfg.min_width && img.height() < cfg.min_height;
}

double mean_of(const Image& img) {
  if (img.empty()) return 0.0;
  double s = 0.0;
  for (double v : img.data()) s += v;
  return s / static_cast<double>(img.size());
}

double stddev_of(const Image& img) {
  if (img.empty()) return 0.0;
  const double m = mean_of(img);
  double s = 0.0;
  for (double v : img.data()) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(img.size()));
}

// Every j-th element with the smallest j that leaves at most `budget`.
std::vector<Point> every_jth(const std::vector<Point>& points, std::size_t budget) {
  if (points.size() <= budget) return points;
  if (budget == 0) return {};
  const std::size_t j = (points.size() + budget - 1) / budget;
  std::vector<Point> out;
  out.reserve(budget);
  for (std::size_t i = 0; i < points.size(); i += j) out.push_back(points[i]);
  return out;
}

bool all_zero(const Image& img) {
  return std::all_of(img.data().begin(), img.data().end(), [](double v) { return v == 0.0; });
}

void require_positive(bool ok, const char* field) {
  if (!ok) throw ConfigError(std::string("framework config: ") + field + " is out of range");
}

// Candidate indices bucketed on a square grid for K-nearest queries.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Point>& points, int width, int height, int cell)
      : cell_(std::max(1, cell)), cols_((width + cell_ - 1) / cell_), rows_((height + cell_ - 1) / cell_) {
    buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const int cx = std::clamp(points[i].x / cell_, 0, cols_ - 1);
      const int cy = std::clamp(points[i].y / cell_, 0, rows_ - 1);
      buckets_[static_cast<std::size_t>(cy) * cols_ + cx].push_back(i);
    }
  }

  // Fills `out` with the k nearest (squared distance, index) pairs, ties
  // broken by index.
  void nearest(const std::vector<Point>& points, Point p, std::size_t k,
               std::vector<std::pair<long long, std::size_t>>& out) const {
    out.clear();
    const int cx = std::clamp(p.x / cell_, 0, cols_ - 1);
    const int cy = std::clamp(p.y / cell_, 0, rows_ - 1);
    const int max_ring = std::max(cols_, rows_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int gy = cy - ring; gy <= cy + ring; ++gy) {
        if (gy < 0 || gy >= rows_) continue;
        const bool edge_row = gy == cy - ring || gy == cy + ring;
        for (int gx = cx - ring; gx <= cx + ring; gx += edge_row ? 1 : 2 * ring) {
          if (gx >= 0 && gx < cols_) {
            for (std::size_t i : buckets_[static_cast<std::size_t>(gy) * cols_ + gx]) {
              const long long dx = points[i].x - p.x;
              const long long dy = points[i].y - p.y;
              out.emplace_back(dx * dx + dy * dy, i);
            }
          }
          if (ring == 0) break;
        }
      }
      if (out.size() >= k) {
        std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k - 1), out.end());
        const long long kth = out[k - 1].first;
        const long long reach = static_cast<long long>(ring) * cell_;
        if (kth <= reach * reach) break;
      }
    }
    std::sort(out.begin(), out.end());
    if (out.size() > k) out.resize(k);
  }

 private:
  int cell_;
  int cols_;
  int rows_;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

void FrameworkConfig::validate() const {
  require_positive(alpha > 0.0 && std::isfinite(alpha), "alpha");
  require_positive(s_u >= 2, "s_u");
  require_positive(t_p >= 16, "t_p");
  if (!is_power_of_two(window_size) || window_size < 8) {
    throw ConfigError("framework config: window_size must be a power of two >= 8");
  }
  require_positive(min_width > 0 && min_height > 0, "min_width/min_height");
  require_positive(lk_window >= 5 && lk_window % 2 == 1, "lk_window");
  require_positive(lk_min_eigenvalue > 0.0, "lk_min_eigenvalue");
  require_positive(densify_sigma_spatial >= 0.0, "densify_sigma_spatial");
  require_positive(densify_sigma_range > 0.0, "densify_sigma_range");
  require_positive(densify_neighbours >= 1, "densify_neighbours");
  require_positive(degraded_weight > 0.0 && degraded_weight <= 1.0, "degraded_weight");
  if (trigger.threshold) require_positive(*trigger.threshold > 1.0, "ratio_threshold");
  bilateral.validate();
}

Image downsample2(const Image& image) {
  if (image.empty()) throw DimensionError("downsample2: empty image");
  const int w = (image.width() + 1) / 2;
  const int h = (image.height() + 1) / 2;
  Image out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      out(x, y) = 0.25 * (image.clamped(2 * x, 2 * y) + image.clamped(2 * x + 1, 2 * y) +
                          image.clamped(2 * x, 2 * y + 1) + image.clamped(2 * x + 1, 2 * y + 1));
    }
  return out;
}

Pyramid build_pyramid(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg) {
  require_same_shape(frame1, frame2, "build_pyramid");
  if (frame1.empty()) throw DimensionError("build_pyramid: empty frames");

  std::vector<PyramidLayer> chain{{frame1, frame2, 1}};
  while (!below(chain.back().frame1, cfg) && chain.back().frame1.width() > 1 &&
         chain.back().frame1.height() > 1) {
    const PyramidLayer& last = chain.back();
    chain.push_back({downsample2(last.frame1), downsample2(last.frame2), last.scale * 2});
  }

  const std::size_t d = chain.size() - 1;
  Pyramid p;
  p.layers.push_back(chain[d]);
  if (d >= 2) p.layers.push_back(chain[d / 2]);
  if (d >= 1) p.layers.push_back(chain[0]);
  return p;
}

KeyPointSet select_keypoints(const Image& difference, const FrameworkConfig& cfg) {
  KeyPointSet k;
  const int w = difference.width();
  const int h = difference.height();
  for (int y = cfg.s_u / 2; y < h; y += cfg.s_u)
    for (int x = cfg.s_u / 2; x < w; x += cfg.s_u) k.uniform.push_back({x, y});
  const auto budget = static_cast<std::size_t>(cfg.t_p);
  k.uniform = every_jth(k.uniform, budget);

  const double threshold = cfg.alpha * stddev_of(difference);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = difference(x, y);
      if (v > 0.0 && v >= threshold) k.difference.push_back({x, y});
    }

  k.retained_difference = every_jth(k.difference, budget - k.uniform.size());
  // Both lists are in scan order, so the complement is a merge walk.
  std::size_t r = 0;
  for (const Point& p : k.difference) {
    if (r < k.retained_difference.size() && k.retained_difference[r] == p) {
      ++r;
    } else {
      k.dropped.push_back(p);
    }
  }
  return k;
}

KeyPointSet select_keypoints(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg) {
  require_same_shape(frame1, frame2, "select_keypoints");
  Image diff(frame1.width(), frame1.height());
  for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] = std::abs(frame1.data()[i] - frame2.data()[i]);
  return select_keypoints(diff, cfg);
}

namespace {

struct Gradients {
  Image gx;
  Image gy;
};

Gradients central_gradients(const Image& img) {
  Gradients g{Image(img.width(), img.height()), Image(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      g.gx(x, y) = 0.5 * (img.clamped(x + 1, y) - img.clamped(x - 1, y));
      g.gy(x, y) = 0.5 * (img.clamped(x, y + 1) - img.clamped(x, y - 1));
    }
  return g;
}

// Gradients are read through `grad(x, y, gx, gy)` so callers can pass either
// a precomputed field or on-the-fly differences. Window pixels outside
// frame 1, or whose displaced sample leaves frame 2, do not contribute.
template <typename Grad>
LucasKanadeResult lk_solve(const Image& frame1, const Image& frame2, Grad&& grad, Point center, int window,
                           double min_eigenvalue, FlowVector initial, int max_iterations) {
  const int r = window / 2;
  const int w = frame1.width();
  const int h = frame1.height();
  const double min_count = 0.25 * window * window;

  LucasKanadeResult res;
  FlowVector d = initial;
  for (int it = 0; it < max_iterations; ++it) {
    double gxx = 0.0, gxy = 0.0, gyy = 0.0, bx = 0.0, by = 0.0;
    int count = 0;
    for (int y = std::max(0, center.y - r); y <= std::min(h - 1, center.y + r); ++y) {
      const double sy = y + d.dy;
      if (sy < 0.0 || sy > h - 1) continue;
      for (int x = std::max(0, center.x - r); x <= std::min(w - 1, center.x + r); ++x) {
        const double sx = x + d.dx;
        if (sx < 0.0 || sx > w - 1) continue;
        double gx, gy;
        grad(x, y, gx, gy);
        const double diff = bilinear_sample(frame2, sx, sy) - frame1(x, y);
        gxx += gx * gx;
        gxy += gx * gy;
        gyy += gy * gy;
        bx += gx * diff;
        by += gy * diff;
        ++count;
      }
    }
    if (count < min_count) return {};
    const double a = gxx / count, b = gxy / count, c = gyy / count;
    res.min_eigenvalue = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    if (!(res.min_eigenvalue >= min_eigenvalue)) return {FlowVector{}, false, res.min_eigenvalue};
    const double det = gxx * gyy - gxy * gxy;
    const double ux = -(gyy * bx - gxy * by) / det;
    const double uy = -(gxx * by - gxy * bx) / det;
    d.dx += ux;
    d.dy += uy;
    if (ux * ux + uy * uy < 1e-6) break;
  }
  if (!std::isfinite(d.dx) || !std::isfinite(d.dy)) return {FlowVector{}, false, res.min_eigenvalue};
  res.flow = d;
  res.valid = true;
  return res;
}

}  // namespace

LucasKanadeResult lucas_kanade_at(const Image& frame1, const Image& frame2, Point center, int window,
                                  double min_eigenvalue, FlowVector initial, int max_iterations) {
  require_same_shape(frame1, frame2, "lucas_kanade_at");
  if (window < 5 || window % 2 == 0) throw ConfigError("lucas_kanade_at: window must be odd and >= 5");
  auto grad = [&](int x, int y, double& gx, double& gy) {
    gx = 0.5 * (frame1.clamped(x + 1, y) - frame1.clamped(x - 1, y));
    gy = 0.5 * (frame1.clamped(x, y + 1) - frame1.clamped(x, y - 1));
  };
  return lk_solve(frame1, frame2, grad, center, window, min_eigenvalue, initial, max_iterations);
}

FlowField densify(const std::vector<PointEstimate>& estimates, const Image& guide, const FrameworkConfig& cfg) {
  std::vector<Point> pts;
  std::vector<FlowVector> vec;
  std::vector<double> base;
  std::vector<double> level;
  for (const auto& e : estimates) {
    if (!e.valid) continue;
    const Point p{std::clamp(e.location.x, 0, guide.width() - 1), std::clamp(e.location.y, 0, guide.height() - 1)};
    pts.push_back(p);
    vec.push_back(e.flow);
    base.push_back(e.degraded ? cfg.degraded_weight : 1.0);
    level.push_back(guide(p.x, p.y));
  }
  if (pts.empty()) throw DegenerateInputError("densify: no valid estimates");

  const int w = guide.width();
  const int h = guide.height();
  const double ss = cfg.densify_spatial_sigma();
  const double inv_s = 1.0 / (2.0 * ss * ss);
  const double inv_r = 1.0 / (2.0 * cfg.densify_sigma_range * cfg.densify_sigma_range);
  const auto k = static_cast<std::size_t>(cfg.densify_neighbours);
  // About k/4 points per cell keeps the first two rings small.
  const double area = static_cast<double>(w) * h;
  const int cell = std::clamp(static_cast<int>(std::ceil(std::sqrt(area * static_cast<double>(k) /
                                                                   (4.0 * static_cast<double>(pts.size()))))),
                              1, std::max(w, h));
  const BucketGrid grid(pts, w, h, cell);

  FlowField out(w, h);
  parallel_for(static_cast<std::size_t>(h), resolve_threads(cfg.threads), [&](std::size_t row) {
    thread_local std::vector<std::pair<long long, std::size_t>> near;
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      grid.nearest(pts, {x, y}, k, near);
      const double g = guide(x, y);
      double sw = 0.0, su = 0.0, sv = 0.0;
      for (const auto& [d2, j] : near) {
        const double dg = g - level[j];
        const double wj = base[j] * std::exp(-static_cast<double>(d2) * inv_s - dg * dg * inv_r);
        sw += wj;
        su += wj * vec[j].dx;
        sv += wj * vec[j].dy;
      }
      out(x, y) = sw > 0.0 ? FlowVector{su / sw, sv / sw} : vec[near.front().second];
    }
  });
  return out;
}

WarpResult warp_and_residual(const Image& frame1, const Image& frame2, const FlowField& flow) {
  require_same_shape(frame1, frame2, "warp_and_residual");
  WarpResult r;
  r.warped = motion_compensate(frame2, flow);
  r.residual = Image(frame1.width(), frame1.height());
  for (std::size_t i = 0; i < frame1.size(); ++i) {
    r.residual.data()[i] = std::abs(frame1.data()[i] - r.warped.data()[i]);
  }
  return r;
}

FlowField upsample_flow(const FlowField& flow, int width, int height, double factor) {
  if (flow.width() == 0 || flow.height() == 0) throw DimensionError("upsample_flow: empty flow");
  Image u(flow.width(), flow.height());
  Image v(flow.width(), flow.height());
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      const FlowVector f = flow.valid(x, y) ? flow(x, y) : FlowVector{};
      u(x, y) = f.dx;
      v(x, y) = f.dy;
    }
  const double sx = static_cast<double>(flow.width()) / width;
  const double sy = static_cast<double>(flow.height()) / height;
  FlowField out(width, height);
  for (int y = 0; y < height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      out(x, y) = {bilinear_sample(u, fx, fy) * factor, bilinear_sample(v, fx, fy) * factor};
    }
  }
  return out;
}

FlowResult estimate_flow_detailed(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg) {
  cfg.validate();
  require_same_shape(frame1, frame2, "estimate_flow");
  if (frame1.empty()) throw DimensionError("estimate_flow: empty frames");

  const Pyramid pyramid = build_pyramid(frame1, frame2, cfg);
  const int threads = resolve_threads(cfg.threads);
  FlowResult result;
  FlowField flow;

  for (std::size_t li = 0; li < pyramid.layers.size(); ++li) {
    const PyramidLayer& layer = pyramid.layers[li];
    const Image& a = layer.frame1;
    const int w = a.width();
    const int h = a.height();
    flow = li == 0 ? FlowField(w, h)
                   : upsample_flow(flow, w, h, static_cast<double>(pyramid.factor(li - 1)));

    const WarpResult before = warp_and_residual(a, layer.frame2, flow);
    LayerStats stats;
    stats.width = w;
    stats.height = h;
    stats.scale = layer.scale;
    stats.residual_before = mean_of(before.residual);

    const bool last = li + 1 == pyramid.layers.size();
    if (all_zero(before.residual)) {
      stats.residual_after = 0.0;
      result.layers.push_back(stats);
      if (last) result.final_estimates.clear();
      continue;
    }

    // The prior flow is already folded into `warped`, so everything below
    // estimates the residual motion only.
    const Image& b = before.warped;
    const KeyPointSet keys = select_keypoints(before.residual, cfg);
    std::vector<Point> spectral = keys.uniform;
    spectral.insert(spectral.end(), keys.retained_difference.begin(), keys.retained_difference.end());

    // The window cannot exceed the layer; small layers use the largest
    // power of two that fits.
    int m_w = cfg.window_size;
    while (m_w > std::min(w, h) && m_w > 8) m_w /= 2;

    std::vector<PointEstimate> estimates(spectral.size() + keys.dropped.size());
    if (m_w <= std::min(w, h)) {
      parallel_for(spectral.size(), threads, [&](std::size_t i) {
        try {
          estimates[i] = estimate_at(a, b, spectral[i], m_w, cfg.bilateral, cfg.trigger, cfg.estimator);
        } catch (const DegenerateInputError&) {
          estimates[i].location = spectral[i];
          estimates[i].valid = false;
        }
      });
    } else {
      for (std::size_t i = 0; i < spectral.size(); ++i) {
        estimates[i].location = spectral[i];
        estimates[i].valid = false;
      }
    }
    // Dropped points start from the nearest valid spectral estimate so that
    // LK only has to refine a small remainder.
    std::vector<Point> seeds;
    std::vector<FlowVector> seed_flow;
    for (std::size_t i = 0; i < spectral.size(); ++i)
      if (estimates[i].valid) {
        seeds.push_back(estimates[i].location);
        seed_flow.push_back(estimates[i].flow);
      }
    const BucketGrid seed_grid(seeds, w, h, cfg.s_u);
    const Gradients grads = keys.dropped.empty() ? Gradients{} : central_gradients(a);
    auto grad = [&](int x, int y, double& gx, double& gy) {
      x = std::clamp(x, 0, w - 1);
      y = std::clamp(y, 0, h - 1);
      gx = grads.gx(x, y);
      gy = grads.gy(x, y);
    };
    parallel_for(keys.dropped.size(), threads, [&](std::size_t i) {
      const Point p = keys.dropped[i];
      FlowVector init{};
      if (!seeds.empty()) {
        thread_local std::vector<std::pair<long long, std::size_t>> near;
        seed_grid.nearest(seeds, p, 1, near);
        init = seed_flow[near.front().second];
      }
      // LK runs against the unwarped frame 2 from prior + residual seed, which
      // keeps clamped warp borders out of its data term.
      const FlowVector prior = flow(p.x, p.y);
      const LucasKanadeResult lk = lk_solve(a, layer.frame2, grad, p, cfg.lk_window, cfg.lk_min_eigenvalue,
                                            {prior.dx + init.dx, prior.dy + init.dy}, 10);
      PointEstimate& e = estimates[spectral.size() + i];
      e.location = p;
      e.flow = {lk.flow.dx - prior.dx, lk.flow.dy - prior.dy};
      e.method = Method::LK;
      e.valid = lk.valid;
    });

    stats.uniform = keys.uniform.size();
    stats.difference = keys.difference.size();
    stats.retained = keys.retained_difference.size();
    stats.dropped = keys.dropped.size();
    stats.spectral_estimations = spectral.size();
    stats.lk_estimations = keys.dropped.size();
    stats.blpc_estimations = static_cast<std::size_t>(std::count_if(
        estimates.begin(), estimates.end(), [](const PointEstimate& e) { return e.method == Method::BLPC; }));

    const bool any_valid =
        std::any_of(estimates.begin(), estimates.end(), [](const PointEstimate& e) { return e.valid; });
    if (any_valid) {
      const FlowField residual = densify(estimates, a, cfg);
      for (std::size_t i = 0; i < flow.size(); ++i) {
        flow.vectors()[i].dx += residual.vectors()[i].dx;
        flow.vectors()[i].dy += residual.vectors()[i].dy;
      }
    }
    stats.residual_after = mean_of(warp_and_residual(a, layer.frame2, flow).residual);
    result.layers.push_back(stats);
    if (last) result.final_estimates.assign(estimates.begin(), estimates.begin() + spectral.size());
  }

  result.flow = std::move(flow);
  return result;
}

FlowField estimate_flow(const Image& frame1, const Image& frame2, const FrameworkConfig& cfg) {
  return estimate_flow_detailed(frame1, frame2, cfg).flow;
}

}  // namespace blpc
