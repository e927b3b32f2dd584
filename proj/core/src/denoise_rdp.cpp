#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "spiral/denoisers.hpp"

namespace spiral {

namespace {

struct RdpLevel {
  std::size_t cells_per_side = 0;
  Vector fit;
  Vector merged;
  Vector split;
  Vector cost;
  std::vector<char> keep;
};

std::size_t require_dyadic_square(const Signal& s) {
  const Shape shape = s.image_shape();
  if (!shape.square() || !is_power_of_two(shape.rows)) {
    throw std::invalid_argument("rdp: image must be square with a power-of-two side");
  }
  return shape.rows;
}

// levels[L] holds cells of side 2^L.
std::vector<RdpLevel> solve_levels(const Signal& s, double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("rdp: kappa must be >= 0");
  const std::size_t side = require_dyadic_square(s);
  const std::size_t depth = log2_exact(side);
  const Vector& v = s.values();
  std::vector<RdpLevel> levels(depth + 1);
  for (std::size_t level = 0; level <= depth; ++level) {
    RdpLevel& current = levels[level];
    const std::size_t width = std::size_t{1} << level;
    const std::size_t per_side = side >> level;
    const std::size_t count = per_side * per_side;
    current.cells_per_side = per_side;
    current.fit.resize(count);
    current.merged.resize(count);
    current.split.assign(count, 0.0);
    current.cost.resize(count);
    current.keep.assign(count, 1);
    const double pixels = static_cast<double>(width * width);
    for (std::size_t i = 0; i < per_side; ++i) {
      for (std::size_t j = 0; j < per_side; ++j) {
        const std::size_t idx = i * per_side + j;
        double total = 0.0;
        for (std::size_t r = i * width; r < (i + 1) * width; ++r) {
          for (std::size_t c = j * width; c < (j + 1) * width; ++c) total += v[r * side + c];
        }
        const double mean = total / pixels;
        const double fit = mean > 0.0 ? mean : 0.0;
        double acc = 0.0;
        for (std::size_t r = i * width; r < (i + 1) * width; ++r) {
          for (std::size_t c = j * width; c < (j + 1) * width; ++c) {
            const double d = v[r * side + c] - fit;
            acc += d * d;
          }
        }
        current.fit[idx] = fit;
        current.merged[idx] = 0.5 * acc + kappa;
        if (level == 0) {
          current.cost[idx] = current.merged[idx];
          continue;
        }
        const RdpLevel& child = levels[level - 1];
        const std::size_t cps = child.cells_per_side;
        const double split = child.cost[(2 * i) * cps + 2 * j] +
                             child.cost[(2 * i) * cps + 2 * j + 1] +
                             child.cost[(2 * i + 1) * cps + 2 * j] +
                             child.cost[(2 * i + 1) * cps + 2 * j + 1];
        current.split[idx] = split;
        const bool keep = current.merged[idx] <= split;
        current.keep[idx] = keep ? 1 : 0;
        current.cost[idx] = keep ? current.merged[idx] : split;
      }
    }
  }
  return levels;
}

void collect(const std::vector<RdpLevel>& levels, std::size_t level, std::size_t i, std::size_t j,
             std::size_t side, std::vector<RdpCell>& cells, Vector& f) {
  const RdpLevel& current = levels[level];
  const std::size_t idx = i * current.cells_per_side + j;
  if (level == 0 || current.keep[idx]) {
    const std::size_t width = std::size_t{1} << level;
    const double value = current.fit[idx];
    cells.push_back({i * width, j * width, width, value});
    for (std::size_t r = i * width; r < (i + 1) * width; ++r) {
      for (std::size_t c = j * width; c < (j + 1) * width; ++c) f[r * side + c] = value;
    }
    return;
  }
  collect(levels, level - 1, 2 * i, 2 * j, side, cells, f);
  collect(levels, level - 1, 2 * i, 2 * j + 1, side, cells, f);
  collect(levels, level - 1, 2 * i + 1, 2 * j, side, cells, f);
  collect(levels, level - 1, 2 * i + 1, 2 * j + 1, side, cells, f);
}

bool constant_block(const Vector& v, std::size_t side, std::size_t r0, std::size_t c0,
                    std::size_t width) {
  const double first = v[r0 * side + c0];
  for (std::size_t r = r0; r < r0 + width; ++r) {
    for (std::size_t c = c0; c < c0 + width; ++c) {
      if (v[r * side + c] != first) return false;
    }
  }
  return true;
}

std::size_t count_cells(const Vector& v, std::size_t side, std::size_t r0, std::size_t c0,
                        std::size_t width) {
  if (width == 1 || constant_block(v, side, r0, c0, width)) return 1;
  const std::size_t half = width / 2;
  return count_cells(v, side, r0, c0, half) + count_cells(v, side, r0, c0 + half, half) +
         count_cells(v, side, r0 + half, c0, half) +
         count_cells(v, side, r0 + half, c0 + half, half);
}

}  // namespace

RdpResult rdp_fit(const Signal& s, double kappa) {
  const auto levels = solve_levels(s, kappa);
  const std::size_t side = s.image_shape().rows;
  RdpResult result;
  Vector f(side * side, 0.0);
  collect(levels, levels.size() - 1, 0, 0, side, result.cells, f);
  result.f = Signal(std::move(f), Shape{side, side});
  result.cost = levels.back().cost[0];
  return result;
}

std::vector<RdpNode> rdp_tree(const Signal& s, double kappa) {
  const auto levels = solve_levels(s, kappa);
  std::vector<RdpNode> nodes;
  for (std::size_t level = levels.size(); level-- > 0;) {
    const RdpLevel& current = levels[level];
    const std::size_t width = std::size_t{1} << level;
    for (std::size_t i = 0; i < current.cells_per_side; ++i) {
      for (std::size_t j = 0; j < current.cells_per_side; ++j) {
        const std::size_t idx = i * current.cells_per_side + j;
        RdpNode node;
        node.cell = {i * width, j * width, width, current.fit[idx]};
        node.merged_cost = current.merged[idx];
        node.split_cost = current.split[idx];
        node.optimal_cost = current.cost[idx];
        node.decision = current.keep[idx] ? RdpDecision::kKeep : RdpDecision::kSplit;
        nodes.push_back(node);
      }
    }
  }
  return nodes;
}

std::vector<CyclicShift> shift_grid(std::size_t side, std::size_t extent) {
  const std::size_t n = std::max<std::size_t>(1, std::min(side, extent));
  std::vector<CyclicShift> shifts;
  shifts.reserve(n * n);
  for (std::size_t dr = 0; dr < n; ++dr) {
    for (std::size_t dc = 0; dc < n; ++dc) shifts.emplace_back(dr, dc);
  }
  return shifts;
}

RdpTiResult rdp_ti_fit(const Signal& s, double kappa, std::span<const CyclicShift> shifts) {
  const std::size_t side = require_dyadic_square(s);
  if (shifts.empty()) throw std::invalid_argument("rdp_ti_fit: empty shift set");
  const Vector& v = s.values();
  Vector accumulated(side * side, 0.0);
  Vector shifted(side * side);
  double total_cells = 0.0;
  for (const auto& [dr, dc] : shifts) {
    for (std::size_t r = 0; r < side; ++r) {
      const std::size_t sr = (r + dr) % side;
      for (std::size_t c = 0; c < side; ++c) shifted[r * side + c] = v[sr * side + (c + dc) % side];
    }
    const RdpResult fit = rdp_fit(Signal(shifted, Shape{side, side}), kappa);
    total_cells += static_cast<double>(fit.cells.size());
    const Vector& fv = fit.f.values();
    for (std::size_t r = 0; r < side; ++r) {
      const std::size_t sr = (r + dr) % side;
      for (std::size_t c = 0; c < side; ++c) {
        accumulated[sr * side + (c + dc) % side] += fv[r * side + c];
      }
    }
  }
  const double count = static_cast<double>(shifts.size());
  for (double& x : accumulated) x /= count;
  RdpTiResult result;
  result.f = Signal(std::move(accumulated), Shape{side, side});
  result.mean_cells = total_cells / count;
  return result;
}

std::size_t rdp_cell_count(const Signal& f) {
  const std::size_t side = require_dyadic_square(f);
  return count_cells(f.values(), side, 0, 0, side);
}

void write_partition_csv(std::ostream& out, std::span<const RdpCell> cells) {
  out << "row,col,side,value\n" << std::setprecision(17);
  for (const RdpCell& cell : cells) {
    out << cell.row << ',' << cell.col << ',' << cell.side << ',' << cell.value << '\n';
  }
}

}  // namespace spiral
