#include "holo/unwrap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <vector>

#include "holo/core.hpp"

namespace holo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTau = 2.0 * std::numbers::pi;

int reflect(int i, int n) {
  if (i < 0) return -1 - i;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

struct Edge {
  std::uint32_t a, b;
  double reliability;
};

// Union-find over pixels; each root keeps its group size and an intrusive
// member list so a whole group can be shifted by 2*pi*k when merged.
struct Groups {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> size;
  std::vector<std::int32_t> head, tail, next;  // member lists, -1 = none
  std::vector<std::int32_t> k;                 // per-pixel wrap count

  explicit Groups(std::size_t n)
      : parent(n), size(n, 1), head(n), tail(n), next(n, -1), k(n, 0) {
    for (std::size_t i = 0; i < n; ++i) {
      parent[i] = std::uint32_t(i);
      head[i] = tail[i] = std::int32_t(i);
    }
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void shift_group(std::uint32_t root, std::int32_t dk) {
    for (std::int32_t i = head[root]; i != -1; i = next[std::size_t(i)])
      k[std::size_t(i)] += dk;
  }

  void merge(std::uint32_t into, std::uint32_t from) {
    parent[from] = into;
    next[std::size_t(tail[into])] = head[from];
    tail[into] = tail[from];
    size[into] += size[from];
  }
};

}  // namespace

UnwrapResult unwrap_phase(const ImageGrid& wrapped, const PixelMask* mask) {
  const int w = wrapped.width();
  const int h = wrapped.height();
  const std::size_t n = wrapped.size();
  for (double v : wrapped.values())
    if (!(v > -kPi - 1e-12 && v <= kPi + 1e-12))
      throw DomainError("unwrap_phase input must lie in (-pi, pi]");
  if (mask && (mask->width != w || mask->height != h))
    throw ShapeError("unwrap_phase: mask shape mismatch");

  auto masked = [&](std::size_t i) {
    return mask && mask->bits[i] != 0;
  };
  auto wd = [&](double a, double b) { return wrap_phase(a - b); };

  // Residues: 2x2 loop integrals of wrapped differences.
  std::size_t residues = 0;
  for (int y = 0; y + 1 < h; ++y)
    for (int x = 0; x + 1 < w; ++x) {
      const double p00 = wrapped.at(x, y), p10 = wrapped.at(x + 1, y);
      const double p11 = wrapped.at(x + 1, y + 1), p01 = wrapped.at(x, y + 1);
      const double loop =
          wd(p10, p00) + wd(p11, p10) + wd(p01, p11) + wd(p00, p01);
      if (std::abs(loop) > kPi) ++residues;
    }

  // Pixel reliability: negated sum of squared wrapped second differences.
  std::vector<double> rel(n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto at = [&](int xx, int yy) {
        return wrapped.at(reflect(xx, w), reflect(yy, h));
      };
      const double c = wrapped.at(x, y);
      const double hh = wd(at(x - 1, y), c) - wd(c, at(x + 1, y));
      const double vv = wd(at(x, y - 1), c) - wd(c, at(x, y + 1));
      const double d1 = wd(at(x - 1, y - 1), c) - wd(c, at(x + 1, y + 1));
      const double d2 = wd(at(x + 1, y - 1), c) - wd(c, at(x - 1, y + 1));
      rel[std::size_t(y) * w + x] = -(hh * hh + vv * vv + d1 * d1 + d2 * d2);
    }

  // Edges between unmasked 4-neighbours, most reliable first.
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = std::size_t(y) * w + x;
      if (masked(i)) continue;
      if (x + 1 < w && !masked(i + 1))
        edges.push_back({std::uint32_t(i), std::uint32_t(i + 1),
                         rel[i] + rel[i + 1]});
      if (y + 1 < h && !masked(i + w))
        edges.push_back({std::uint32_t(i), std::uint32_t(i + w),
                         rel[i] + rel[i + w]});
    }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) {
                     return a.reliability > b.reliability;
                   });

  Groups g(n);
  for (const Edge& e : edges) {
    std::uint32_t ra = g.find(e.a);
    std::uint32_t rb = g.find(e.b);
    if (ra == rb) continue;
    // Shift the smaller group so the step across this edge is the wrapped one.
    std::uint32_t pa = e.a, pb = e.b;
    if (g.size[ra] < g.size[rb]) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    const double ua = wrapped[pa] + kTau * g.k[pa];
    const double ub = wrapped[pb] + kTau * g.k[pb];
    const std::int32_t dk = std::int32_t(std::lround((ua - ub) / kTau));
    if (dk != 0) g.shift_group(rb, dk);
    g.merge(ra, rb);
  }

  UnwrapResult result;
  result.unwrapped = ImageGrid(w, h, Unit::Radians);
  result.filled = PixelMask(w, h);
  std::vector<std::uint8_t> done(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (masked(i)) continue;
    result.unwrapped[i] = wrapped[i] + kTau * g.k[i];
    done[i] = 1;
  }

  // Fill masked pixels from unwrapped neighbours, breadth-first.
  std::deque<std::size_t> queue;
  auto try_fill = [&](std::size_t i, double neighbour_value) {
    const double dk = std::round((neighbour_value - wrapped[i]) / kTau);
    result.unwrapped[i] = wrapped[i] + kTau * dk;
    result.filled.bits[i] = 1;
    done[i] = 1;
    queue.push_back(i);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = std::size_t(y) * w + x;
      if (done[i]) queue.push_back(i);
    }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int x = int(i % std::size_t(w));
    const int y = int(i / std::size_t(w));
    const double v = result.unwrapped[i];
    if (x > 0 && !done[i - 1]) try_fill(i - 1, v);
    if (x + 1 < w && !done[i + 1]) try_fill(i + 1, v);
    if (y > 0 && !done[i - std::size_t(w)]) try_fill(i - std::size_t(w), v);
    if (y + 1 < h && !done[i + std::size_t(w)]) try_fill(i + std::size_t(w), v);
  }
  // Fully masked image (no seeds): pass the input through, everything flagged.
  for (std::size_t i = 0; i < n; ++i)
    if (!done[i]) {
      result.unwrapped[i] = wrapped[i];
      result.filled.bits[i] = 1;
    }

  result.residue_count = residues;
  return result;
}

}  // namespace holo
