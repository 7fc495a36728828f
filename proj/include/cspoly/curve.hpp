#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "cspoly/angle.hpp"

namespace cspoly {

/// A sorted set of distinct odd positive frequencies. One cos/sin coordinate
/// pair per frequency is the deduplicated embedding used everywhere.
class FrequencySet {
 public:
  FrequencySet() = default;

  explicit FrequencySet(std::vector<std::int64_t> freqs) : freqs_(std::move(freqs)) {
    std::sort(freqs_.begin(), freqs_.end());
    freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
    for (const std::int64_t f : freqs_) {
      if (f <= 0 || f % 2 == 0)
        throw std::invalid_argument("FrequencySet: frequencies must be odd and positive");
    }
  }

  /// All odd integers in [1, max_odd].
  static FrequencySet odd_up_to(std::int64_t max_odd) {
    std::vector<std::int64_t> f;
    for (std::int64_t v = 1; v <= max_odd; v += 2) f.push_back(v);
    return FrequencySet(std::move(f));
  }

  const std::vector<std::int64_t>& freqs() const { return freqs_; }
  std::size_t size() const { return freqs_.size(); }
  bool empty() const { return freqs_.empty(); }
  std::int64_t operator[](std::size_t i) const { return freqs_[i]; }

  bool contains(std::int64_t f) const {
    return std::binary_search(freqs_.begin(), freqs_.end(), f);
  }

  /// Position of frequency f, or -1.
  int index_of(std::int64_t f) const {
    const auto it = std::lower_bound(freqs_.begin(), freqs_.end(), f);
    if (it == freqs_.end() || *it != f) return -1;
    return static_cast<int>(it - freqs_.begin());
  }

  bool operator==(const FrequencySet& o) const { return freqs_ == o.freqs_; }

 private:
  std::vector<std::int64_t> freqs_;
};

/// (cos t, sin t, cos 3t, sin 3t, ..., cos (2k-1)t, sin (2k-1)t).
inline Eigen::VectorXd eval_moment_curve(int k, const Angle& t) {
  if (k < 1) throw std::invalid_argument("eval_moment_curve: k must be >= 1");
  Eigen::VectorXd out(2 * k);
  for (int i = 0; i < k; ++i) {
    const auto cs = trig_turn(t.times(2 * i + 1));
    out[2 * i] = cs[0];
    out[2 * i + 1] = cs[1];
  }
  return out;
}

/// Union of multiplier^j * base for j = 0..m, sorted and deduplicated.
inline FrequencySet frequency_set(const FrequencySet& base, std::int64_t multiplier, int m) {
  if (base.empty()) throw std::invalid_argument("frequency_set: base must be nonempty");
  if (multiplier < 3 || multiplier % 2 == 0)
    throw std::invalid_argument("frequency_set: multiplier must be odd and >= 3");
  if (m < 0) throw std::invalid_argument("frequency_set: m must be >= 0");
  std::set<std::int64_t> acc;
  std::int64_t scale = 1;
  for (int j = 0; j <= m; ++j) {
    for (const std::int64_t f : base.freqs())
      acc.insert(detail::checked_i64(static_cast<__int128>(f) * scale, "frequency overflow"));
    if (j < m)
      scale = detail::checked_i64(static_cast<__int128>(scale) * multiplier, "frequency overflow");
  }
  return FrequencySet(std::vector<std::int64_t>(acc.begin(), acc.end()));
}

/// Closed form 3k(m+1) - m*floor((3k+2)/5) for the size of
/// union_{j<=m} 5^j * {odd integers in [1, 6k-1]}.
inline std::int64_t lemma23_cardinality(int k, int m) {
  if (k < 1) throw std::invalid_argument("lemma23_cardinality: k must be >= 1");
  if (m < 0) throw std::invalid_argument("lemma23_cardinality: m must be >= 0");
  const std::int64_t kk = k, mm = m;
  return 3 * kk * (mm + 1) - mm * ((3 * kk + 2) / 5);
}

/// (cos f*t, sin f*t) for each f in F, in order. Odd frequencies make this an
/// odd map: eval_composite(F, t + pi) = -eval_composite(F, t).
inline Eigen::VectorXd eval_composite(const FrequencySet& F, const Angle& t) {
  Eigen::VectorXd out(2 * static_cast<int>(F.size()));
  for (int i = 0; i < static_cast<int>(F.size()); ++i) {
    const auto cs = trig_turn(t.times(F[i]));
    out[2 * i] = cs[0];
    out[2 * i + 1] = cs[1];
  }
  return out;
}

/// q equally spaced angles j/q of a turn. q must be even so that the grid is
/// closed under the antipode map (index j -> j + q/2 mod q).
inline std::vector<Angle> build_angle_grid(std::int64_t q) {
  if (q <= 0 || q % 2 != 0)
    throw std::invalid_argument("build_angle_grid: grid size must be even and positive");
  std::vector<Angle> grid;
  grid.reserve(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) grid.emplace_back(j, q);
  return grid;
}

/// 4*3^m clusters of s angles each, obtained by pulling the four-cluster base
/// set back through t -> 3t m times. `spread` is the offset step of the base
/// set; at level m the realized step is spread/3^m. The whole set is centrally
/// symmetric and consists of exact rationals.
struct ClusterGrid {
  std::vector<Angle> angles;     // cluster-major, offset-minor
  std::vector<int> cluster;      // cluster id per angle
  int num_clusters = 0;
  int points_per_cluster = 0;

  /// Cluster holding the antipodes of cluster c.
  int antipodal_cluster(int c) const { return (c + num_clusters / 2) % num_clusters; }
};

inline ClusterGrid build_cluster_grid(int m, int s, const Angle& spread) {
  if (m < 0) throw std::invalid_argument("build_cluster_grid: m must be >= 0");
  if (s < 1) throw std::invalid_argument("build_cluster_grid: s must be >= 1");
  if (spread.num() == 0 && s > 1)
    throw std::invalid_argument("build_cluster_grid: zero spread collapses clusters");
  // Disjointness: s * spread must stay below half the base spacing (1/8 turn).
  if (static_cast<__int128>(8) * s * spread.num() >= spread.den())
    throw std::invalid_argument(
        "build_cluster_grid: clusters overlap; require s * spread < 1/8 turn");
  std::int64_t pow3 = 1;
  for (int j = 0; j < m; ++j) pow3 *= 3;
  const std::int64_t centers = 4 * pow3;
  const Angle step(spread.num(), detail::checked_i64(
                                     static_cast<__int128>(spread.den()) * pow3,
                                     "build_cluster_grid: spread denominator overflow"));
  ClusterGrid out;
  out.num_clusters = static_cast<int>(centers);
  out.points_per_cluster = s;
  out.angles.reserve(static_cast<std::size_t>(centers) * s);
  out.cluster.reserve(static_cast<std::size_t>(centers) * s);
  for (std::int64_t c = 0; c < centers; ++c) {
    const Angle center(c, centers);
    for (int i = 0; i < s; ++i) {
      out.angles.push_back(center.plus(step.times(i)));
      out.cluster.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace cspoly
