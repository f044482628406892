#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "wanet/diagnostics.hpp"
#include "wanet/geometry.hpp"

namespace wanet {

using NodeId = std::uint32_t;

/// Spatial grid over the domain with a cell-linked list per cell.
///
/// `head[c]` is the first node in cell c and `next[i]` the node after i in
/// the same cell; `kEnd` terminates a chain.
struct CellGrid {
  static constexpr NodeId kEnd = ~NodeId{0};

  double cell_size_x = 0.0;
  double cell_size_y = 0.0;
  int cells_x = 0;
  int cells_y = 0;
  std::vector<NodeId> head;
  std::vector<NodeId> next;

  int index(int ix, int iy) const { return iy * cells_x + ix; }
  std::size_t cell_count() const { return head.size(); }

  /// Node ids in cell (ix, iy), in chain order.
  std::vector<NodeId> occupants(int ix, int iy) const {
    std::vector<NodeId> out;
    for (NodeId i = head[index(ix, iy)]; i != kEnd; i = next[i])
      out.push_back(i);
    return out;
  }
};

struct CellIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

inline CellIndex cell_of(const Position& p, const CellGrid& grid) {
  const int ix = std::min(static_cast<int>(std::floor(p.x / grid.cell_size_x)),
                          grid.cells_x - 1);
  const int iy = std::min(static_cast<int>(std::floor(p.y / grid.cell_size_y)),
                          grid.cells_y - 1);
  return {std::max(ix, 0), std::max(iy, 0)};
}

namespace detail {

// Largest cell count along an edge whose cells are all at least `range` wide.
inline int fitting_cells(double length, double range) {
  double count = std::floor(length / range);
  while (count > 1.0 && length / count < range)
    count -= 1.0;
  return static_cast<int>(count);
}

} // namespace detail

/// Bins `positions` into cells that tile the domain exactly and are no
/// narrower than `range`.
inline CellGrid build_grid(std::span<const Position> positions, const Domain& d,
                           double range) {
  if (!(range > 0.0) || !std::isfinite(range))
    throw Error("build_grid: range must be positive and finite");
  const int nx = detail::fitting_cells(d.lx, range);
  const int ny = detail::fitting_cells(d.ly, range);
  if (nx < 1 || ny < 1) {
    std::ostringstream os;
    os << "build_grid: range exceeds domain (range " << range << " m, domain "
       << d.lx << " x " << d.ly << " m)";
    throw Error(os.str());
  }
  if (3.0 * range > std::min(d.lx, d.ly)) {
    std::ostringstream os;
    os << "cell list range " << range
       << " m exceeds a third of the shortest domain edge; "
          "it will not beat brute force";
    warn(os.str());
  }

  CellGrid grid;
  grid.cells_x = nx;
  grid.cells_y = ny;
  grid.cell_size_x = d.lx / nx;
  grid.cell_size_y = d.ly / ny;
  grid.head.assign(static_cast<std::size_t>(nx) * ny, CellGrid::kEnd);
  grid.next.assign(positions.size(), CellGrid::kEnd);
  // Insert in reverse so each chain lists ids in ascending order.
  for (std::size_t k = positions.size(); k-- > 0;) {
    const auto c = cell_of(positions[k], grid);
    const auto cell = grid.index(c.ix, c.iy);
    grid.next[k] = grid.head[cell];
    grid.head[cell] = static_cast<NodeId>(k);
  }
  return grid;
}

/// Symmetric adjacency in compressed-row form: the neighbors of node i are
/// `ids[offsets[i] .. offsets[i+1])`, sorted ascending.
class NeighborLists {
public:
  NeighborLists() : offsets_{0} {}

  /// Builds from undirected pairs; each pair must appear once.
  NeighborLists(std::size_t n_nodes, std::span<const std::pair<NodeId, NodeId>> pairs,
                std::uint64_t pair_evals)
      : offsets_(n_nodes + 1, 0), ids_(2 * pairs.size()), pair_evals_(pair_evals) {
    for (const auto& [a, b] : pairs) {
      ++offsets_[a + 1];
      ++offsets_[b + 1];
    }
    for (std::size_t i = 0; i < n_nodes; ++i)
      offsets_[i + 1] += offsets_[i];
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [a, b] : pairs) {
      ids_[fill[a]++] = b;
      ids_[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < n_nodes; ++i)
      std::sort(ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                ids_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }

  std::size_t size() const { return offsets_.size() - 1; }

  std::span<const NodeId> operator[](std::size_t i) const {
    return {ids_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  bool contains(std::size_t i, NodeId j) const {
    const auto row = (*this)[i];
    return std::binary_search(row.begin(), row.end(), j);
  }

  /// Number of undirected edges.
  std::size_t edge_count() const { return ids_.size() / 2; }

  /// Distance evaluations spent building these lists.
  std::uint64_t pair_evals() const { return pair_evals_; }

  friend bool operator==(const NeighborLists& a, const NeighborLists& b) {
    return a.offsets_ == b.offsets_ && a.ids_ == b.ids_;
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> ids_;
  std::uint64_t pair_evals_ = 0;
};

namespace detail {

inline bool within(const Position& a, const Position& b, const Domain& d, double range) {
  return distance(a, b, d) <= range;
}

// Distinct cells of the 3x3 stencil around (ix, iy). Periodic grids wrap;
// bounded grids clip. Narrow periodic grids can alias offsets onto the
// same cell, so duplicates are removed.
inline int stencil(const CellGrid& grid, bool periodic, int ix, int iy,
                   std::array<int, 9>& cells) {
  int count = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      int cx = ix + dx;
      int cy = iy + dy;
      if (periodic) {
        cx = (cx + grid.cells_x) % grid.cells_x;
        cy = (cy + grid.cells_y) % grid.cells_y;
      } else if (cx < 0 || cx >= grid.cells_x || cy < 0 || cy >= grid.cells_y) {
        continue;
      }
      const int c = grid.index(cx, cy);
      if (std::find(cells.begin(), cells.begin() + count, c) == cells.begin() + count)
        cells[count++] = c;
    }
  }
  return count;
}

} // namespace detail

/// Neighbor lists via the cell-linked list: each node is compared only with
/// nodes in its own and the adjacent cells. Every unordered pair in
/// adjacent cells is evaluated once.
inline NeighborLists neighbors_cell_list(std::span<const Position> positions,
                                         const Domain& d, double range) {
  const CellGrid grid = build_grid(positions, d, range);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::uint64_t evals = 0;
  std::array<int, 9> cells{};

  for (int iy = 0; iy < grid.cells_y; ++iy) {
    for (int ix = 0; ix < grid.cells_x; ++ix) {
      const int own = grid.index(ix, iy);
      if (grid.head[own] == CellGrid::kEnd)
        continue;
      const int count = detail::stencil(grid, d.periodic, ix, iy, cells);
      for (NodeId i = grid.head[own]; i != CellGrid::kEnd; i = grid.next[i]) {
        for (int k = 0; k < count; ++k) {
          for (NodeId j = grid.head[cells[k]]; j != CellGrid::kEnd; j = grid.next[j]) {
            if (j <= i)
              continue;
            ++evals;
            if (detail::within(positions[i], positions[j], d, range))
              pairs.emplace_back(i, j);
          }
        }
      }
    }
  }
  return NeighborLists(positions.size(), pairs, evals);
}

/// Reference construction comparing every pair once.
inline NeighborLists neighbors_brute_force(std::span<const Position> positions,
                                           const Domain& d, double range) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::uint64_t evals = 0;
  const auto n = static_cast<NodeId>(positions.size());
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      ++evals;
      if (detail::within(positions[i], positions[j], d, range))
        pairs.emplace_back(i, j);
    }
  }
  return NeighborLists(positions.size(), pairs, evals);
}

enum class NeighborMethod { BruteForce, CellList };

/// Cell list whenever a grid fits the domain, brute force otherwise.
inline NeighborLists build_neighbor_lists(std::span<const Position> positions,
                                          const Domain& d, double range) {
  if (range <= std::min(d.lx, d.ly))
    return neighbors_cell_list(positions, d, range);
  return neighbors_brute_force(positions, d, range);
}

inline NeighborLists build_neighbor_lists(std::span<const Position> positions,
                                          const Domain& d, double range,
                                          NeighborMethod method) {
  return method == NeighborMethod::BruteForce
             ? neighbors_brute_force(positions, d, range)
             : neighbors_cell_list(positions, d, range);
}

using Edge = std::pair<NodeId, NodeId>;

/// Undirected edges (i < j), sorted lexicographically.
inline std::vector<Edge> export_graph(const NeighborLists& lists) {
  std::vector<Edge> edges;
  edges.reserve(lists.edge_count());
  for (std::size_t i = 0; i < lists.size(); ++i)
    for (NodeId j : lists[i])
      if (j > i)
        edges.emplace_back(static_cast<NodeId>(i), j);
  return edges;
}

} // namespace wanet
