#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspoly/lp.hpp"
#include "cspoly/parallel.hpp"
#include "cspoly/polytopes.hpp"
#include "cspoly/rng.hpp"
#include "cspoly/stats.hpp"

namespace cspoly {

/// Supporting functional with equality on the subset and slack at least one
/// everywhere else (after normalization), plus substitution diagnostics.
struct FaceCertificate {
  Eigen::VectorXd normal;
  double offset = 0.0;
  double min_slack_ratio = 0.0;       // min off-subset slack / ||normal||
  double max_equality_residual = 0.0; // max on-subset |<c,v> - offset| / ||normal||
};

enum class FaceStatus { Face, NotFace, SolverFailure };

struct FaceQuery {
  FaceStatus status = FaceStatus::SolverFailure;
  std::optional<FaceCertificate> certificate;
  bool antipodal_shortcut = false;  // decided exactly, without an LP
  long pivots = 0;
};

struct FaceOracleOptions {
  double margin_tol = 1e-7;       // threshold on the maximized support margin
  double certificate_tol = 1e-7;  // allowed equality residual on re-check
  bool shortcut_antipodal = true;
  SimplexOptions lp{};
};

namespace detail {

inline std::vector<int> normalize_subset(const PolytopeInstance& p, std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("is_face: subset must be nonempty");
  std::vector<int> s(subset.begin(), subset.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.front() < 0 || s.back() >= p.num_vertices())
    throw std::invalid_argument("is_face: vertex index out of range");
  return s;
}

inline bool contains_antipodal_pair(const PolytopeInstance& p, const std::vector<int>& s) {
  for (const int i : s) {
    const int j = p.antipodal[static_cast<std::size_t>(i)];
    if (std::binary_search(s.begin(), s.end(), j)) return true;
  }
  return false;
}

}  // namespace detail

/// Decides whether `subset` is exactly the vertex set of a face.
///
/// Any supporting functional of a proper face has positive offset (the center
/// lies in the relative interior), so the offset is normalized to one and the
/// LP maximizes the worst off-subset margin:
///
///   max eps  s.t.  <c, v_i> = 1 (i in subset),  <c, v_j> + eps <= 1 (j off),
///
/// with eps capped at one. A positive optimal margin yields a certificate,
/// rescaled to the slack >= 1 normalization and re-verified by direct
/// substitution; an infeasible program or a non-positive maximal margin is a
/// sound NotFace. Subsets containing an antipodal pair are rejected exactly,
/// without an LP.
inline FaceQuery is_face(const PolytopeInstance& p, std::span<const int> subset,
                         const FaceOracleOptions& opts = {}) {
  const std::vector<int> s = detail::normalize_subset(p, subset);
  FaceQuery out;
  if (opts.shortcut_antipodal && detail::contains_antipodal_pair(p, s)) {
    out.status = FaceStatus::NotFace;
    out.antipodal_shortcut = true;
    return out;
  }
  const int d = p.ambient_dim();
  const int n = p.num_vertices();
  const int eps_col = d;
  LinearProgram lp = LinearProgram::vars(d + 1);
  lp.upper[eps_col] = 1.0;
  lp.objective[eps_col] = -1.0;

  const int n_on = static_cast<int>(s.size());
  const int n_off = n - n_on;
  lp.eq_lhs = Eigen::MatrixXd::Zero(n_on, d + 1);
  lp.eq_rhs = Eigen::VectorXd::Ones(n_on);
  for (int i = 0; i < n_on; ++i) lp.eq_lhs.block(i, 0, 1, d) = p.vertices.row(s[static_cast<std::size_t>(i)]);
  lp.le_lhs = Eigen::MatrixXd::Zero(n_off, d + 1);
  lp.le_rhs = Eigen::VectorXd::Ones(n_off);
  {
    int r = 0;
    for (int j = 0; j < n; ++j) {
      if (std::binary_search(s.begin(), s.end(), j)) continue;
      lp.le_lhs.block(r, 0, 1, d) = p.vertices.row(j);
      lp.le_lhs(r, eps_col) = 1.0;
      ++r;
    }
  }

  const LpOutcome sol = solve(lp, opts.lp);
  out.pivots = sol.pivots;
  if (sol.status == LpStatus::Infeasible) {
    out.status = FaceStatus::NotFace;
    return out;
  }
  if (sol.status != LpStatus::Optimal) {
    out.status = FaceStatus::SolverFailure;
    return out;
  }
  const double margin = sol.x[eps_col];
  if (margin <= opts.margin_tol) {
    out.status = FaceStatus::NotFace;
    return out;
  }

  FaceCertificate cert;
  cert.normal = sol.x.head(d) / margin;
  cert.offset = 1.0 / margin;
  const double norm = cert.normal.norm();
  double max_res = 0.0;
  for (const int i : s)
    max_res = std::max(max_res, std::abs(p.vertices.row(i).dot(cert.normal) - cert.offset));
  double min_slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    if (std::binary_search(s.begin(), s.end(), j)) continue;
    min_slack = std::min(min_slack, cert.offset - p.vertices.row(j).dot(cert.normal));
  }
  if (n_off == 0) min_slack = 0.0;
  cert.max_equality_residual = norm > 0.0 ? max_res / norm : max_res;
  cert.min_slack_ratio = norm > 0.0 ? min_slack / norm : 0.0;
  if (norm == 0.0 || cert.max_equality_residual > opts.certificate_tol ||
      cert.min_slack_ratio <= 0.0) {
    out.status = FaceStatus::SolverFailure;
    return out;
  }
  out.status = FaceStatus::Face;
  out.certificate = std::move(cert);
  return out;
}

/// Is `subset` contained in some proper face? Feasibility of a supporting
/// functional at offset one through the subset, with capped off-subset slack
/// maximized; a positive optimum exhibits a supporting hyperplane whose
/// contact set is a proper face containing the subset.
inline bool contained_in_proper_face(const PolytopeInstance& p, std::span<const int> subset,
                                     const FaceOracleOptions& opts = {}) {
  const std::vector<int> s = detail::normalize_subset(p, subset);
  if (detail::contains_antipodal_pair(p, s)) return false;
  const int d = p.ambient_dim();
  const int n = p.num_vertices();
  const int n_on = static_cast<int>(s.size());
  const int n_off = n - n_on;
  // Variables: c (d, free), one capped slack per off-subset vertex.
  // <c, v_j> + s_j <= 1 with s_j in [0, 1] keeps the hyperplane supporting
  // while letting slack accumulate only where the contact set excludes v_j.
  LinearProgram lp = LinearProgram::vars(d + n_off);
  for (int j = 0; j < n_off; ++j) {
    lp.lower[d + j] = 0.0;
    lp.upper[d + j] = 1.0;
    lp.objective[d + j] = -1.0;
  }
  lp.eq_lhs = Eigen::MatrixXd::Zero(n_on, d + n_off);
  lp.eq_rhs = Eigen::VectorXd::Ones(n_on);
  for (int i = 0; i < n_on; ++i)
    lp.eq_lhs.block(i, 0, 1, d) = p.vertices.row(s[static_cast<std::size_t>(i)]);
  lp.le_lhs = Eigen::MatrixXd::Zero(n_off, d + n_off);
  lp.le_rhs = Eigen::VectorXd::Ones(n_off);
  {
    int r = 0;
    for (int j = 0; j < n; ++j) {
      if (std::binary_search(s.begin(), s.end(), j)) continue;
      lp.le_lhs.block(r, 0, 1, d) = p.vertices.row(j);
      lp.le_lhs(r, d + r) = 1.0;
      ++r;
    }
  }
  const LpOutcome sol = solve(lp, opts.lp);
  if (sol.status != LpStatus::Optimal) return false;
  return -sol.objective > opts.margin_tol;  // total captured slack
}

struct FaceDimension {
  int dimension = 0;
  bool is_simplex = false;
};

/// Affine dimension of the subset's points; flags whether they form a
/// simplex (dimension == size - 1).
inline FaceDimension face_dimension(const PolytopeInstance& p, std::span<const int> subset) {
  const std::vector<int> s = detail::normalize_subset(p, subset);
  FaceDimension out;
  if (s.size() == 1) {
    out.dimension = 0;
    out.is_simplex = true;
    return out;
  }
  Matrix diffs(static_cast<int>(s.size()) - 1, p.ambient_dim());
  for (std::size_t i = 1; i < s.size(); ++i)
    diffs.row(static_cast<int>(i - 1)) = p.vertices.row(s[i]) - p.vertices.row(s[0]);
  out.dimension = rank_with_tolerance(diffs);
  out.is_simplex = out.dimension == static_cast<int>(s.size()) - 1;
  return out;
}

struct PairOutcome {
  int a = 0, b = 0;
  FaceStatus status = FaceStatus::SolverFailure;
};

struct EdgeScan {
  std::int64_t pairs = 0;             // all unordered pairs
  std::int64_t antipodal_pairs = 0;   // decided exactly
  std::int64_t edges = 0;
  std::int64_t non_edges = 0;         // non-antipodal pairs that are not faces
  std::int64_t failures = 0;          // solver failures
  std::vector<PairOutcome> non_edge_list;
  std::vector<PairOutcome> failure_list;
  double bn08_bound = 0.0;            // (N^2/2)(1 - 2^-d)
  bool bn08_ok = false;
};

struct EdgeScanOptions {
  std::int64_t oracle_cap = 200000;
  int workers = 1;
  FaceOracleOptions oracle{};
};

/// Runs the face oracle over every unordered vertex pair (antipodal pairs are
/// counted NotFace without an LP) and checks the universal edge bound
/// f_1 <= (N^2/2)(1 - 2^-d).
inline EdgeScan enumerate_edges(const PolytopeInstance& p, const EdgeScanOptions& opts = {}) {
  const int n = p.num_vertices();
  const std::int64_t all_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const std::int64_t lp_pairs = all_pairs - n / 2;
  if (lp_pairs > opts.oracle_cap)
    throw std::invalid_argument(
        "enumerate_edges: pair count exceeds the oracle cap; raise the cap or use the sampling "
        "path (estimate_face_fraction)");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(all_pairs));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
  std::vector<signed char> result(pairs.size(), -1);  // 1 face, 0 not, -2 failure, -3 antipodal
  parallel_for_index(static_cast<std::int64_t>(pairs.size()), opts.workers, [&](std::int64_t i) {
    const auto [a, b] = pairs[static_cast<std::size_t>(i)];
    if (p.antipodal[static_cast<std::size_t>(a)] == b) {
      result[static_cast<std::size_t>(i)] = -3;
      return;
    }
    const std::array<int, 2> s{a, b};
    const FaceQuery q = is_face(p, s, opts.oracle);
    result[static_cast<std::size_t>(i)] =
        q.status == FaceStatus::Face ? 1 : (q.status == FaceStatus::NotFace ? 0 : -2);
  });
  EdgeScan scan;
  scan.pairs = all_pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    switch (result[i]) {
      case 1: ++scan.edges; break;
      case -3: ++scan.antipodal_pairs; break;
      case 0:
        ++scan.non_edges;
        if (scan.non_edge_list.size() < 1000)
          scan.non_edge_list.push_back({pairs[i].first, pairs[i].second, FaceStatus::NotFace});
        break;
      default:
        ++scan.failures;
        scan.failure_list.push_back({pairs[i].first, pairs[i].second, FaceStatus::SolverFailure});
    }
  }
  const double nn = static_cast<double>(n);
  scan.bn08_bound = nn * nn / 2.0 * (1.0 - std::pow(2.0, -p.observed_dim));
  scan.bn08_ok = static_cast<double>(scan.edges) <= scan.bn08_bound;
  return scan;
}

enum class CheckStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    default: return "INCONCLUSIVE";
  }
}

struct NeighborlyReport {
  std::int64_t required_pairs = 0;   // non-antipodal, non-exempt
  std::int64_t passed = 0;
  std::int64_t exempt_pairs = 0;     // pairs from antipodal clusters
  std::int64_t exempt_edges = 0;     // how many of those happen to be edges anyway
  std::int64_t failures = 0;
  std::vector<PairOutcome> failed_pairs;
  CheckStatus status = CheckStatus::Inconclusive;
};

/// Checks that every required vertex pair spans an edge. For cluster
/// instances, pairs drawn from antipodal clusters are exempt: they are probed
/// and reported, but not required either way.
inline NeighborlyReport verify_two_neighborly(const PolytopeInstance& p,
                                              const EdgeScanOptions& opts = {}) {
  const int n = p.num_vertices();
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (p.antipodal[static_cast<std::size_t>(a)] != b) pairs.push_back({a, b});
  if (static_cast<std::int64_t>(pairs.size()) > opts.oracle_cap)
    throw std::invalid_argument("verify_two_neighborly: pair count exceeds the oracle cap");
  std::vector<signed char> result(pairs.size(), -1);
  parallel_for_index(static_cast<std::int64_t>(pairs.size()), opts.workers, [&](std::int64_t i) {
    const auto [a, b] = pairs[static_cast<std::size_t>(i)];
    const std::array<int, 2> s{a, b};
    const FaceQuery q = is_face(p, s, opts.oracle);
    result[static_cast<std::size_t>(i)] =
        q.status == FaceStatus::Face ? 1 : (q.status == FaceStatus::NotFace ? 0 : -2);
  });
  NeighborlyReport rep;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    const bool exempt = p.antipodal_clusters(a, b);
    if (exempt) {
      ++rep.exempt_pairs;
      if (result[i] == 1) ++rep.exempt_edges;
      continue;
    }
    ++rep.required_pairs;
    if (result[i] == 1) {
      ++rep.passed;
    } else if (result[i] == 0) {
      rep.failed_pairs.push_back({a, b, FaceStatus::NotFace});
    } else {
      ++rep.failures;
      rep.failed_pairs.push_back({a, b, FaceStatus::SolverFailure});
    }
  }
  if (rep.failures > 0)
    rep.status = CheckStatus::Inconclusive;
  else
    rep.status = rep.passed == rep.required_pairs ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

enum class SamplingMode { WithReplacement, WithoutReplacement, ExhaustivePairs };

inline const char* to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::WithReplacement: return "with-replacement";
    case SamplingMode::WithoutReplacement: return "without-replacement";
    default: return "exhaustive-pairs";
  }
}

struct FaceReport {
  std::int64_t trials = 0;
  std::int64_t face_count = 0;
  std::int64_t not_face_count = 0;
  std::int64_t failures = 0;
  double failure_fraction = 0.0;  // not-a-face fraction
  ConfidenceInterval ci{};
  double paper_bound = std::numeric_limits<double>::quiet_NaN();
  bool bound_ok = true;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::WithReplacement;
  int tuple_size = 0;
};

/// Paper bound on the not-a-face probability for a sampled k-tuple, when one
/// applies to this instance/tuple-size combination (NaN otherwise).
inline double face_fraction_bound(const PolytopeInstance& p, int k) {
  if (k == 1) return 0.0;
  if (!p.spec) return std::numeric_limits<double>::quiet_NaN();
  if (const auto* mf = std::get_if<ManyFacesSpec>(&*p.spec)) {
    if (k == mf->k)
      return std::pow(1.0 - std::pow(5.0, -(k - 1)), mf->m);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Seeded sampling of k-tuples of vertices; each tuple's support set goes to
/// the face oracle (the hull of a multiset equals the hull of its support).
/// Exhaustive mode enumerates all ordered pairs exactly and requires k == 2.
inline FaceReport estimate_face_fraction(const PolytopeInstance& p, int k, std::int64_t trials,
                                         std::uint64_t seed, SamplingMode mode,
                                         const EdgeScanOptions& opts = {}) {
  if (k < 1) throw std::invalid_argument("estimate_face_fraction: k must be >= 1");
  const int n = p.num_vertices();
  FaceReport rep;
  rep.seed = seed;
  rep.mode = mode;
  rep.tuple_size = k;
  rep.paper_bound = face_fraction_bound(p, k);

  if (mode == SamplingMode::ExhaustivePairs) {
    if (k != 2)
      throw std::invalid_argument("estimate_face_fraction: exhaustive mode requires k = 2");
    // Ordered pairs: n diagonal tuples collapse to singletons, each unordered
    // pair accounts for two ordered tuples.
    std::int64_t singleton_failures = 0, singleton_lp_failures = 0;
    for (int i = 0; i < n; ++i) {
      const std::array<int, 1> s{i};
      const FaceQuery q = is_face(p, s, opts.oracle);
      if (q.status == FaceStatus::NotFace) ++singleton_failures;
      if (q.status == FaceStatus::SolverFailure) ++singleton_lp_failures;
    }
    const EdgeScan scan = enumerate_edges(p, opts);
    rep.trials = static_cast<std::int64_t>(n) * n;
    rep.not_face_count = singleton_failures + 2 * (scan.antipodal_pairs + scan.non_edges);
    rep.failures = singleton_lp_failures + 2 * scan.failures;
    rep.face_count = rep.trials - rep.not_face_count - rep.failures;
    rep.failure_fraction =
        static_cast<double>(rep.not_face_count) / static_cast<double>(rep.trials);
    rep.ci.level = 0.99;
    rep.ci.lo = rep.ci.hi = rep.failure_fraction;  // exact enumeration
    rep.bound_ok = std::isnan(rep.paper_bound) || rep.failure_fraction <= rep.paper_bound;
    return rep;
  }

  if (trials <= 0) throw std::invalid_argument("estimate_face_fraction: trials must be positive");
  if (mode == SamplingMode::WithoutReplacement && k > n)
    throw std::invalid_argument("estimate_face_fraction: k exceeds the vertex count");
  std::vector<signed char> result(static_cast<std::size_t>(trials), -1);
  parallel_for_index(trials, opts.workers, [&](std::int64_t t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    std::vector<int> tuple;
    if (mode == SamplingMode::WithReplacement) {
      for (int i = 0; i < k; ++i)
        tuple.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
      std::sort(tuple.begin(), tuple.end());
      tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
    } else {
      tuple = rng.distinct_indices(k, n);
    }
    const FaceQuery q = is_face(p, tuple, opts.oracle);
    result[static_cast<std::size_t>(t)] =
        q.status == FaceStatus::Face ? 1 : (q.status == FaceStatus::NotFace ? 0 : -2);
  });
  rep.trials = trials;
  for (const signed char r : result) {
    if (r == 1)
      ++rep.face_count;
    else if (r == 0)
      ++rep.not_face_count;
    else
      ++rep.failures;
  }
  rep.failure_fraction = static_cast<double>(rep.not_face_count) / static_cast<double>(trials);
  rep.ci = wilson_interval(rep.not_face_count, trials);
  rep.bound_ok = std::isnan(rep.paper_bound) || rep.failure_fraction <= rep.paper_bound;
  return rep;
}

struct SumLawMismatch {
  std::vector<int> subset;
  FaceStatus whole;
  FaceStatus blockwise;
};

struct SumLawReport {
  std::int64_t samples = 0;
  std::int64_t mismatches = 0;
  std::int64_t inconclusive = 0;
  std::vector<SumLawMismatch> mismatch_list;
  // Empirical check of the face probability for r-tuples, r = block count.
  std::int64_t r_tuple_trials = 0;
  std::int64_t r_tuple_faces = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // NaN when not positive
  bool bound_ok = true;
  CheckStatus status = CheckStatus::Inconclusive;
};

/// Checks, on sampled subsets, that a subset spans a face of the direct sum
/// iff each block part spans a face of its copy; empty parts are vacuous.
/// Also samples r-tuples and compares the empirical face probability with the
/// composite lower bound (1 - r/(k+1)!)(1 - r(1-5^(1-k))^m) when positive.
inline SumLawReport verify_direct_sum_law(const PolytopeInstance& sum,
                                          std::span<const PolytopeInstance> parts,
                                          std::int64_t trials, std::uint64_t seed,
                                          const EdgeScanOptions& opts = {}) {
  if (parts.empty()) throw std::invalid_argument("verify_direct_sum_law: no parts");
  std::vector<int> part_start;
  int off = 0;
  for (const auto& p : parts) {
    part_start.push_back(off);
    off += p.num_vertices();
  }
  if (off != sum.num_vertices())
    throw std::invalid_argument("verify_direct_sum_law: parts do not match the sum");
  const int n = sum.num_vertices();
  const int r = static_cast<int>(parts.size());

  SumLawReport rep;
  rep.samples = trials;
  std::vector<signed char> agree(static_cast<std::size_t>(trials), -1);
  std::vector<std::vector<int>> sampled(static_cast<std::size_t>(trials));
  std::vector<std::pair<signed char, signed char>> verdicts(static_cast<std::size_t>(trials));
  parallel_for_index(trials, opts.workers, [&](std::int64_t t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const int size = 2 + static_cast<int>(t % 2);  // alternate pairs and triples
    const std::vector<int> subset = rng.distinct_indices(size, n);
    sampled[static_cast<std::size_t>(t)] = subset;
    const FaceQuery whole = is_face(sum, subset, opts.oracle);
    signed char block_verdict = 1;
    for (int b = 0; b < r && block_verdict != -2; ++b) {
      std::vector<int> local;
      for (const int v : subset) {
        if (v >= part_start[static_cast<std::size_t>(b)] &&
            v < part_start[static_cast<std::size_t>(b)] + parts[static_cast<std::size_t>(b)].num_vertices())
          local.push_back(v - part_start[static_cast<std::size_t>(b)]);
      }
      if (local.empty()) continue;
      const FaceQuery q = is_face(parts[static_cast<std::size_t>(b)], local, opts.oracle);
      if (q.status == FaceStatus::SolverFailure)
        block_verdict = -2;
      else if (q.status == FaceStatus::NotFace)
        block_verdict = 0;
    }
    const signed char whole_verdict = whole.status == FaceStatus::Face
                                          ? 1
                                          : (whole.status == FaceStatus::NotFace ? 0 : -2);
    verdicts[static_cast<std::size_t>(t)] = {whole_verdict, block_verdict};
    agree[static_cast<std::size_t>(t)] =
        (whole_verdict == -2 || block_verdict == -2) ? -2 : (whole_verdict == block_verdict);
  });
  for (std::int64_t t = 0; t < trials; ++t) {
    if (agree[static_cast<std::size_t>(t)] == -2) {
      ++rep.inconclusive;
    } else if (agree[static_cast<std::size_t>(t)] == 0) {
      ++rep.mismatches;
      if (rep.mismatch_list.size() < 100) {
        SumLawMismatch m;
        m.subset = sampled[static_cast<std::size_t>(t)];
        m.whole = verdicts[static_cast<std::size_t>(t)].first == 1 ? FaceStatus::Face
                                                                   : FaceStatus::NotFace;
        m.blockwise = verdicts[static_cast<std::size_t>(t)].second == 1 ? FaceStatus::Face
                                                                        : FaceStatus::NotFace;
        rep.mismatch_list.push_back(std::move(m));
      }
    }
  }

  // Composite probability bound, when the sum was built from a known family.
  if (sum.spec) {
    if (const auto* ds = std::get_if<DirectSumSpec>(&*sum.spec)) {
      double fact = 1.0;
      for (int i = 2; i <= ds->k + 1; ++i) fact *= i;
      const double q = std::pow(1.0 - std::pow(5.0, -(ds->k - 1)), ds->m);
      const double bound = (1.0 - ds->r / fact) * (1.0 - ds->r * q);
      if (bound > 0.0) rep.bound = bound;
    }
  }
  std::vector<signed char> face_result(static_cast<std::size_t>(trials), -1);
  parallel_for_index(trials, opts.workers, [&](std::int64_t t) {
    Rng rng = Rng::for_trial(seed ^ 0xf00dULL, static_cast<std::uint64_t>(t));
    std::vector<int> tuple;
    for (int i = 0; i < r; ++i)
      tuple.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    std::sort(tuple.begin(), tuple.end());
    tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
    const FaceQuery q = is_face(sum, tuple, opts.oracle);
    face_result[static_cast<std::size_t>(t)] =
        q.status == FaceStatus::Face ? 1 : (q.status == FaceStatus::NotFace ? 0 : -2);
  });
  rep.r_tuple_trials = trials;
  for (const signed char v : face_result)
    if (v == 1) ++rep.r_tuple_faces;
  if (!std::isnan(rep.bound)) {
    const double frac =
        static_cast<double>(rep.r_tuple_faces) / static_cast<double>(rep.r_tuple_trials);
    const ConfidenceInterval ci = wilson_interval(rep.r_tuple_faces, rep.r_tuple_trials);
    rep.bound_ok = ci.hi >= rep.bound || frac >= rep.bound;
  }
  if (rep.inconclusive > 0)
    rep.status = CheckStatus::Inconclusive;
  else
    rep.status = (rep.mismatches == 0 && rep.bound_ok) ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

struct ArcReport {
  std::int64_t trials = 0;
  std::int64_t faces = 0;
  std::int64_t inconclusive_collinear = 0;  // strict oracle failed, but the
                                            // subset lies in a proper face
  std::int64_t refutations = 0;             // not contained in any proper face
  std::int64_t solver_failures = 0;
  std::vector<std::vector<int>> refutation_subsets;
  CheckStatus status = CheckStatus::Inconclusive;
};

/// Samples n-point subsets inside random open arcs of the given length on the
/// sampled moment-curve hull and verifies they span faces. A strict-oracle
/// failure where the subset still lies on a proper supporting hyperplane is
/// reported separately as inconclusive (extra grid points on the hyperplane),
/// not as a refutation.
inline ArcReport arc_face_property(int k, std::int64_t grid_size, double arc_length,
                                   int subset_size, std::int64_t trials, std::uint64_t seed,
                                   const EdgeScanOptions& opts = {}) {
  if (subset_size < 1 || subset_size > k)
    throw std::invalid_argument("arc_face_property: subset size must be in [1, k]");
  if (!(arc_length > 0.0) || arc_length >= 2.0 * std::numbers::pi)
    throw std::invalid_argument("arc_face_property: arc length must lie in (0, 2*pi)");
  const CurveHullSpec spec{k, grid_size};
  const PolytopeInstance hull = construct(ConstructionSpec(spec));
  const int n = hull.num_vertices();
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i)] = hull.labels[static_cast<std::size_t>(i)].angle.radians();

  ArcReport rep;
  rep.trials = trials;
  std::vector<signed char> result(static_cast<std::size_t>(trials), -1);
  std::vector<std::vector<int>> chosen(static_cast<std::size_t>(trials));
  parallel_for_index(trials, opts.workers, [&](std::int64_t t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    std::vector<int> in_arc;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw std::invalid_argument("arc_face_property: arc too short to hold the subset");
      in_arc.clear();
      const double start = rng.unit() * 2.0 * std::numbers::pi;
      for (int i = 0; i < n; ++i) {
        double delta = theta[static_cast<std::size_t>(i)] - start;
        delta -= std::floor(delta / (2.0 * std::numbers::pi)) * 2.0 * std::numbers::pi;
        if (delta > 0.0 && delta < arc_length) in_arc.push_back(i);
      }
      if (static_cast<int>(in_arc.size()) >= subset_size) break;
    }
    const std::vector<int> picks = rng.distinct_indices(subset_size, static_cast<int>(in_arc.size()));
    std::vector<int> subset;
    for (const int idx : picks) subset.push_back(in_arc[static_cast<std::size_t>(idx)]);
    chosen[static_cast<std::size_t>(t)] = subset;
    const FaceQuery q = is_face(hull, subset, opts.oracle);
    if (q.status == FaceStatus::Face) {
      result[static_cast<std::size_t>(t)] = 1;
    } else if (q.status == FaceStatus::SolverFailure) {
      result[static_cast<std::size_t>(t)] = -2;
    } else {
      result[static_cast<std::size_t>(t)] =
          contained_in_proper_face(hull, subset, opts.oracle) ? 2 : 0;
    }
  });
  for (std::int64_t t = 0; t < trials; ++t) {
    switch (result[static_cast<std::size_t>(t)]) {
      case 1: ++rep.faces; break;
      case 2: ++rep.inconclusive_collinear; break;
      case -2: ++rep.solver_failures; break;
      default:
        ++rep.refutations;
        if (rep.refutation_subsets.size() < 50)
          rep.refutation_subsets.push_back(chosen[static_cast<std::size_t>(t)]);
    }
  }
  if (rep.refutations > 0)
    rep.status = CheckStatus::Fail;
  else if (rep.solver_failures > 0)
    rep.status = CheckStatus::Inconclusive;
  else
    rep.status = CheckStatus::Pass;
  return rep;
}

}  // namespace cspoly
