#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cspoly/angle.hpp"
#include "cspoly/curve.hpp"
#include "cspoly/linalg.hpp"

namespace cspoly {

/// Convex hull of the degree-3 composite curve over 4*3^(m+1) equally spaced
/// points. Every pair of non-antipodal vertices spans an edge. (CLI family
/// code "1.2".)
struct TwoNeighborlySpec {
  int m = 0;
};

/// Cluster variant of the two-neighborly family: 4*3^m clusters of s points
/// each. Pairs from antipodal clusters are exempt from the edge claim.
/// (CLI family code "3.2".)
struct ClusterSpec {
  int m = 0;
  int s = 3;
  Angle spread{1, 4000};  // base-set offset step; 1/1000 of the base spacing
};

/// Convex hull of the degree-3k composite curve over n*5^m equally spaced
/// points; most k-subsets of vertices span faces. (CLI family code "1.3".)
struct ManyFacesSpec {
  int k = 2;
  int m = 0;
  int n = 4;  // must be even
};

/// Direct sum of r copies of the ManyFaces polytope. (CLI family code "1.5".)
struct DirectSumSpec {
  int k = 2;
  int m = 0;
  int n = 4;
  int r = 1;
};

/// Convex hull of the plain moment curve of order k sampled on an even grid;
/// used for the arc/neighborliness desk tests.
struct CurveHullSpec {
  int k = 2;
  std::int64_t grid = 100;  // must be even
};

using ConstructionSpec =
    std::variant<TwoNeighborlySpec, ClusterSpec, ManyFacesSpec, DirectSumSpec, CurveHullSpec>;

inline std::int64_t pow_i64(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i)
    out = detail::checked_i64(static_cast<__int128>(out) * base, "pow_i64 overflow");
  return out;
}

/// One contiguous run of cos/sin coordinate pairs, with enough structure to
/// re-expand the deduplicated coordinates into the redundant embedding
/// (one sub-block of base frequencies per level j, scaled by multiplier^j).
struct BlockStructure {
  FrequencySet freqs;       // deduplicated frequencies of this block
  FrequencySet base;        // generating base set
  std::int64_t multiplier;  // level scale factor
  int levels = 0;           // highest level m
  int coord_offset = 0;     // first column of this block's coordinate pairs
};

struct VertexLabel {
  int block = 0;
  Angle angle;
  int cluster = -1;  // cluster id for cluster grids, else -1
};

struct PolytopeInstance {
  Matrix vertices;                 // one vertex per row, deduplicated coordinates
  std::vector<VertexLabel> labels;
  std::vector<int> antipodal;      // fixed-point-free involution on row indices
  std::vector<BlockStructure> blocks;
  int predicted_dim = 0;
  int observed_dim = 0;
  int paper_ambient_dim = 0;       // dimension of the redundant embedding
  bool is_projection = false;      // projections may carry duplicate rows
  std::optional<ConstructionSpec> spec;
  std::string family;              // CLI family code, e.g. "1.3"

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int ambient_dim() const { return static_cast<int>(vertices.cols()); }

  /// Cluster id of vertex i (-1 when the instance has no cluster structure).
  int cluster_of(int i) const { return labels[static_cast<std::size_t>(i)].cluster; }

  /// True iff vertices i and j belong to antipodal clusters.
  bool antipodal_clusters(int i, int j) const {
    const int ci = cluster_of(i);
    if (ci < 0) return false;
    return cluster_of(j) == cluster_of(antipodal[static_cast<std::size_t>(i)]);
  }
};

inline std::int64_t predicted_vertex_count(const ConstructionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::int64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>) return 4 * pow_i64(3, s.m + 1);
        if constexpr (std::is_same_v<T, ClusterSpec>) return 4LL * s.s * pow_i64(3, s.m);
        if constexpr (std::is_same_v<T, ManyFacesSpec>) return s.n * pow_i64(5, s.m);
        if constexpr (std::is_same_v<T, DirectSumSpec>) return s.r * s.n * pow_i64(5, s.m);
        if constexpr (std::is_same_v<T, CurveHullSpec>) return s.grid;
      },
      spec);
}

/// Closed-form dimension in deduplicated coordinates. For the ManyFaces
/// family this is exact when n > 2(6k-1) and an upper bound otherwise; for
/// clusters it is exact when s >= 3.
inline int predicted_dimension(const ConstructionSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>) return 4 * s.m + 6;
        if constexpr (std::is_same_v<T, ClusterSpec>) return 4 * s.m + 6;
        if constexpr (std::is_same_v<T, ManyFacesSpec>)
          return static_cast<int>(2 * lemma23_cardinality(s.k, s.m));
        if constexpr (std::is_same_v<T, DirectSumSpec>)
          return static_cast<int>(2 * s.r * lemma23_cardinality(s.k, s.m));
        if constexpr (std::is_same_v<T, CurveHullSpec>) return 2 * s.k;
      },
      spec);
}

/// Whether the dimension formula is asserted as an equality for this spec
/// (otherwise it is only an upper bound on the observed dimension).
inline bool dimension_equality_claimed(const ConstructionSpec& spec) {
  return std::visit(
      [](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>) return true;
        if constexpr (std::is_same_v<T, ClusterSpec>) return s.s >= 3;
        if constexpr (std::is_same_v<T, ManyFacesSpec>) return s.n > 2 * (6 * s.k - 1);
        if constexpr (std::is_same_v<T, DirectSumSpec>) return s.n > 2 * (6 * s.k - 1);
        if constexpr (std::is_same_v<T, CurveHullSpec>) return s.grid > 2 * (2 * s.k - 1);
      },
      spec);
}

inline std::string family_code(const ConstructionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>) return "1.2";
        if constexpr (std::is_same_v<T, ClusterSpec>) return "3.2";
        if constexpr (std::is_same_v<T, ManyFacesSpec>) return "1.3";
        if constexpr (std::is_same_v<T, DirectSumSpec>) return "1.5";
        if constexpr (std::is_same_v<T, CurveHullSpec>) return "curve";
      },
      spec);
}

inline std::string describe(const ConstructionSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>)
          os << "family 1.2 (m=" << s.m << ")";
        else if constexpr (std::is_same_v<T, ClusterSpec>)
          os << "family 3.2 (m=" << s.m << ", s=" << s.s << ", spread=" << s.spread.str() << ")";
        else if constexpr (std::is_same_v<T, ManyFacesSpec>)
          os << "family 1.3 (k=" << s.k << ", m=" << s.m << ", n=" << s.n << ")";
        else if constexpr (std::is_same_v<T, DirectSumSpec>)
          os << "family 1.5 (k=" << s.k << ", m=" << s.m << ", n=" << s.n << ", r=" << s.r << ")";
        else
          os << "curve hull (k=" << s.k << ", grid=" << s.grid << ")";
      },
      spec);
  return os.str();
}

namespace detail {

/// Shared assembly path: evaluate the composite curve on labeled angles,
/// match antipodes exactly, measure the rank, and check instance invariants.
inline PolytopeInstance assemble(const FrequencySet& freqs, const FrequencySet& base,
                                 std::int64_t multiplier, int levels,
                                 const std::vector<VertexLabel>& labels,
                                 const ConstructionSpec& spec) {
  const int n = static_cast<int>(labels.size());
  PolytopeInstance out;
  out.vertices.resize(n, 2 * static_cast<int>(freqs.size()));
  for (int i = 0; i < n; ++i)
    out.vertices.row(i) = eval_composite(freqs, labels[static_cast<std::size_t>(i)].angle).transpose();
  out.labels = labels;

  std::map<Angle, int> index_of;
  for (int i = 0; i < n; ++i) {
    if (!index_of.emplace(labels[static_cast<std::size_t>(i)].angle, i).second)
      throw std::invalid_argument("construct: duplicate grid angle");
  }
  out.antipodal.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto it = index_of.find(labels[static_cast<std::size_t>(i)].angle.antipode());
    if (it == index_of.end())
      throw std::invalid_argument("construct: grid is not closed under the antipode map");
    if (it->second == i)
      throw std::invalid_argument("construct: antipodal map has a fixed point");
    out.antipodal[static_cast<std::size_t>(i)] = it->second;
  }

  BlockStructure block;
  block.freqs = freqs;
  block.base = base;
  block.multiplier = multiplier;
  block.levels = levels;
  block.coord_offset = 0;
  out.blocks = {block};
  out.spec = spec;
  out.family = family_code(spec);
  out.predicted_dim = predicted_dimension(spec);
  out.paper_ambient_dim = 2 * static_cast<int>(base.size()) * (levels + 1);
  out.observed_dim = rank_with_tolerance(out.vertices);
  return out;
}

inline void check_instance(const PolytopeInstance& p) {
  const int n = p.num_vertices();
  for (int i = 0; i < n; ++i) {
    const int j = p.antipodal[static_cast<std::size_t>(i)];
    const double dev = (p.vertices.row(i) + p.vertices.row(j)).cwiseAbs().maxCoeff();
    if (dev > 1e-12) throw std::logic_error("construct: antipodal vertices are not exact negations");
  }
  if (!p.is_projection) {
    // Exact duplicates would sort adjacent; near-duplicates get the full scan
    // at desk scale.
    if (n <= 1500) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if ((p.vertices.row(i) - p.vertices.row(j)).norm() <= 1e-9)
            throw std::logic_error("construct: duplicate vertices");
        }
      }
    } else {
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int c = 0; c < p.vertices.cols(); ++c) {
          if (p.vertices(a, c) != p.vertices(b, c)) return p.vertices(a, c) < p.vertices(b, c);
        }
        return false;
      });
      for (int i = 0; i + 1 < n; ++i) {
        if ((p.vertices.row(order[static_cast<std::size_t>(i)]) -
             p.vertices.row(order[static_cast<std::size_t>(i + 1)]))
                .norm() <= 1e-9)
          throw std::logic_error("construct: duplicate vertices");
      }
    }
  }
  if (p.observed_dim > p.predicted_dim && !p.is_projection)
    throw std::logic_error("construct: observed dimension exceeds the predicted bound");
}

}  // namespace detail

inline PolytopeInstance construct(const ConstructionSpec& spec);

namespace detail {

inline PolytopeInstance construct_two_neighborly(const TwoNeighborlySpec& s,
                                                 const ConstructionSpec& spec) {
  if (s.m < 0) throw std::invalid_argument("construct: m must be >= 0");
  const FrequencySet base({1, 3, 5});
  const FrequencySet freqs = frequency_set(base, 3, s.m);
  const auto grid = build_angle_grid(4 * pow_i64(3, s.m + 1));
  std::vector<VertexLabel> labels;
  labels.reserve(grid.size());
  for (const Angle& t : grid) labels.push_back({0, t, -1});
  return assemble(freqs, base, 3, s.m, labels, spec);
}

inline PolytopeInstance construct_cluster(const ClusterSpec& s, const ConstructionSpec& spec) {
  if (s.m < 0) throw std::invalid_argument("construct: m must be >= 0");
  if (s.s < 1) throw std::invalid_argument("construct: cluster size must be >= 1");
  const FrequencySet base({1, 3, 5});
  const FrequencySet freqs = frequency_set(base, 3, s.m);
  const ClusterGrid grid = build_cluster_grid(s.m, s.s, s.spread);
  std::vector<VertexLabel> labels;
  labels.reserve(grid.angles.size());
  for (std::size_t i = 0; i < grid.angles.size(); ++i)
    labels.push_back({0, grid.angles[i], grid.cluster[i]});
  return assemble(freqs, base, 3, s.m, labels, spec);
}

inline PolytopeInstance construct_many_faces(const ManyFacesSpec& s,
                                             const ConstructionSpec& spec) {
  if (s.k < 1) throw std::invalid_argument("construct: k must be >= 1");
  if (s.m < 0) throw std::invalid_argument("construct: m must be >= 0");
  if (s.n < 2 || s.n % 2 != 0)
    throw std::invalid_argument("construct: n must be a positive even integer");
  const FrequencySet base = FrequencySet::odd_up_to(6 * s.k - 1);
  const FrequencySet freqs = frequency_set(base, 5, s.m);
  const auto grid = build_angle_grid(s.n * pow_i64(5, s.m));
  std::vector<VertexLabel> labels;
  labels.reserve(grid.size());
  for (const Angle& t : grid) labels.push_back({0, t, -1});
  return assemble(freqs, base, 5, s.m, labels, spec);
}

}  // namespace detail

/// Block-diagonal embedding of several centrally symmetric instances in
/// complementary coordinate blocks; the convex hull of the union.
inline PolytopeInstance direct_sum(std::span<const PolytopeInstance> parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: empty input");
  int total_n = 0, total_d = 0, total_paper = 0;
  for (const auto& p : parts) {
    total_n += p.num_vertices();
    total_d += p.ambient_dim();
    total_paper += p.paper_ambient_dim;
  }
  PolytopeInstance out;
  out.vertices = Matrix::Zero(total_n, total_d);
  out.labels.reserve(static_cast<std::size_t>(total_n));
  out.antipodal.resize(static_cast<std::size_t>(total_n));
  int row0 = 0, col0 = 0, block_id = 0;
  int predicted = 0;
  for (const auto& p : parts) {
    out.vertices.block(row0, col0, p.num_vertices(), p.ambient_dim()) = p.vertices;
    for (int i = 0; i < p.num_vertices(); ++i) {
      VertexLabel lab = p.labels[static_cast<std::size_t>(i)];
      lab.block = block_id;
      out.labels.push_back(lab);
      out.antipodal[static_cast<std::size_t>(row0 + i)] =
          row0 + p.antipodal[static_cast<std::size_t>(i)];
    }
    for (BlockStructure b : p.blocks) {
      b.coord_offset += col0;
      out.blocks.push_back(b);
    }
    predicted += p.predicted_dim;
    row0 += p.num_vertices();
    col0 += p.ambient_dim();
    ++block_id;
  }
  out.predicted_dim = predicted;
  out.paper_ambient_dim = total_paper;
  out.observed_dim = rank_with_tolerance(out.vertices);
  out.family = "sum";
  detail::check_instance(out);
  return out;
}

inline PolytopeInstance construct(const ConstructionSpec& spec) {
  PolytopeInstance out = std::visit(
      [&spec](const auto& s) -> PolytopeInstance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoNeighborlySpec>)
          return detail::construct_two_neighborly(s, spec);
        else if constexpr (std::is_same_v<T, ClusterSpec>)
          return detail::construct_cluster(s, spec);
        else if constexpr (std::is_same_v<T, ManyFacesSpec>)
          return detail::construct_many_faces(s, spec);
        else if constexpr (std::is_same_v<T, CurveHullSpec>) {
          if (s.k < 1) throw std::invalid_argument("construct: k must be >= 1");
          if (s.grid < 2 || s.grid % 2 != 0)
            throw std::invalid_argument("construct: grid size must be even and positive");
          const FrequencySet base = FrequencySet::odd_up_to(2 * s.k - 1);
          const auto grid = build_angle_grid(s.grid);
          std::vector<VertexLabel> labels;
          labels.reserve(grid.size());
          for (const Angle& t : grid) labels.push_back({0, t, -1});
          return detail::assemble(base, base, 1, 0, labels, spec);
        } else {
          if (s.r < 1) throw std::invalid_argument("construct: r must be >= 1");
          const ManyFacesSpec part{s.k, s.m, s.n};
          const PolytopeInstance copy = detail::construct_many_faces(part, ConstructionSpec(part));
          std::vector<PolytopeInstance> copies(static_cast<std::size_t>(s.r), copy);
          PolytopeInstance sum = direct_sum(copies);
          sum.spec = spec;
          sum.family = family_code(spec);
          return sum;
        }
      },
      spec);
  if (out.num_vertices() != predicted_vertex_count(spec))
    throw std::logic_error("construct: vertex count does not match the formula");
  detail::check_instance(out);
  return out;
}

/// Image of the instance under the projection that keeps only the chosen
/// frequency pairs inside one block. Labels are preserved and duplicate image
/// points are not collapsed, so fibers remain visible to callers.
inline PolytopeInstance project_to_block(const PolytopeInstance& p, int block,
                                         const FrequencySet& freqs) {
  if (block < 0 || block >= static_cast<int>(p.blocks.size()))
    throw std::invalid_argument("project_to_block: no such block");
  const BlockStructure& b = p.blocks[static_cast<std::size_t>(block)];
  std::vector<int> cols;
  for (const std::int64_t f : freqs.freqs()) {
    const int idx = b.freqs.index_of(f);
    if (idx < 0) throw std::invalid_argument("project_to_block: frequency not in block");
    cols.push_back(b.coord_offset + 2 * idx);
    cols.push_back(b.coord_offset + 2 * idx + 1);
  }
  PolytopeInstance out;
  out.vertices.resize(p.num_vertices(), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    out.vertices.col(static_cast<int>(c)) = p.vertices.col(cols[c]);
  out.labels = p.labels;
  out.antipodal = p.antipodal;
  BlockStructure nb;
  nb.freqs = freqs;
  nb.base = freqs;
  nb.multiplier = b.multiplier;
  nb.levels = 0;
  nb.coord_offset = 0;
  out.blocks = {nb};
  out.is_projection = true;
  out.predicted_dim = static_cast<int>(2 * freqs.size());
  out.paper_ambient_dim = static_cast<int>(2 * freqs.size());
  out.observed_dim = rank_with_tolerance(out.vertices);
  out.family = p.family + "-projection";
  return out;
}

/// Re-expands deduplicated coordinates into the redundant embedding: one
/// sub-block of base-frequency pairs per level, per block.
inline Matrix expand_to_paper_embedding(const PolytopeInstance& p) {
  Matrix out(p.num_vertices(), p.paper_ambient_dim);
  int col = 0;
  for (const BlockStructure& b : p.blocks) {
    std::int64_t scale = 1;
    for (int j = 0; j <= b.levels; ++j) {
      for (const std::int64_t f : b.base.freqs()) {
        const std::int64_t ff =
            detail::checked_i64(static_cast<__int128>(f) * scale, "expand overflow");
        const int idx = b.freqs.index_of(ff);
        if (idx < 0) throw std::logic_error("expand_to_paper_embedding: missing frequency");
        out.col(col++) = p.vertices.col(b.coord_offset + 2 * idx);
        out.col(col++) = p.vertices.col(b.coord_offset + 2 * idx + 1);
      }
      scale *= b.multiplier;
    }
  }
  if (col != p.paper_ambient_dim)
    throw std::logic_error("expand_to_paper_embedding: dimension mismatch");
  return out;
}

}  // namespace cspoly
