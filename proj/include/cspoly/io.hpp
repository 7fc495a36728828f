#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cspoly/faces.hpp"
#include "cspoly/polytopes.hpp"
#include "cspoly/recovery.hpp"
#include "cspoly/version.hpp"

namespace cspoly {

using Json = nlohmann::ordered_json;

/// 17 significant digits: enough for a lossless double round trip.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline Angle parse_angle(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("parse_angle: expected \"num/den\"");
  const std::int64_t num = std::stoll(text.substr(0, slash));
  const std::int64_t den = std::stoll(text.substr(slash + 1));
  return Angle(num, den);
}

/// CSV with one vertex per row: index, block, angle "j/q", coordinates.
inline void write_vertex_csv(std::ostream& os, const PolytopeInstance& p,
                             bool paper_embedding = false) {
  const Matrix coords = paper_embedding ? expand_to_paper_embedding(p) : p.vertices;
  os << "index,block,angle";
  for (int c = 0; c < coords.cols(); ++c) os << ",x" << c;
  os << "\n";
  for (int i = 0; i < p.num_vertices(); ++i) {
    const VertexLabel& lab = p.labels[static_cast<std::size_t>(i)];
    os << i << "," << lab.block << "," << lab.angle.str();
    for (int c = 0; c < coords.cols(); ++c) os << "," << format_double(coords(i, c));
    os << "\n";
  }
}

struct CsvVertices {
  Matrix vertices;
  std::vector<int> blocks;
  std::vector<Angle> angles;
};

inline CsvVertices read_vertex_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_vertex_csv: empty input");
  std::vector<std::vector<double>> rows;
  CsvVertices out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) throw std::invalid_argument("read_vertex_csv: short row");
    out.blocks.push_back(std::stoi(cells[1]));
    out.angles.push_back(parse_angle(cells[2]));
    std::vector<double> coords;
    for (std::size_t c = 3; c < cells.size(); ++c) coords.push_back(std::stod(cells[c]));
    rows.push_back(std::move(coords));
  }
  if (rows.empty()) throw std::invalid_argument("read_vertex_csv: no vertices");
  out.vertices.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::invalid_argument("read_vertex_csv: ragged rows");
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      out.vertices(static_cast<int>(i), static_cast<int>(c)) = rows[i][c];
  }
  return out;
}

/// Plain-text homogeneous V-representation: leading 1, then coordinates.
inline void write_vrep(std::ostream& os, const PolytopeInstance& p, bool paper_embedding = false) {
  const Matrix coords = paper_embedding ? expand_to_paper_embedding(p) : p.vertices;
  for (int i = 0; i < coords.rows(); ++i) {
    os << "1";
    for (int c = 0; c < coords.cols(); ++c) os << " " << format_double(coords(i, c));
    os << "\n";
  }
}

inline Json instance_summary_json(const PolytopeInstance& p) {
  Json j;
  j["family"] = p.family;
  j["description"] = p.spec ? describe(*p.spec) : p.family;
  j["vertices"] = p.num_vertices();
  j["predicted_dim"] = p.predicted_dim;
  j["observed_dim"] = p.observed_dim;
  j["ambient_dim"] = p.ambient_dim();
  j["paper_ambient_dim"] = p.paper_ambient_dim;
  j["dimension_equality_claimed"] = p.spec ? dimension_equality_claimed(*p.spec) : false;
  if (p.spec) j["vertex_count_formula"] = predicted_vertex_count(*p.spec);
  j["vertex_count_matches_formula"] =
      p.spec ? predicted_vertex_count(*p.spec) == p.num_vertices() : true;
  return j;
}

inline Json instance_full_json(const PolytopeInstance& p, bool paper_embedding = false) {
  Json j = instance_summary_json(p);
  Json blocks = Json::array();
  for (const BlockStructure& b : p.blocks) {
    Json bj;
    bj["frequencies"] = b.freqs.freqs();
    bj["base"] = b.base.freqs();
    bj["multiplier"] = b.multiplier;
    bj["levels"] = b.levels;
    bj["coord_offset"] = b.coord_offset;
    blocks.push_back(bj);
  }
  j["blocks"] = blocks;
  j["antipodal_map"] = p.antipodal;
  Json labels = Json::array();
  for (const VertexLabel& lab : p.labels) {
    Json lj;
    lj["block"] = lab.block;
    lj["angle"] = lab.angle.str();
    if (lab.cluster >= 0) lj["cluster"] = lab.cluster;
    labels.push_back(lj);
  }
  j["labels"] = labels;
  const Matrix coords = paper_embedding ? expand_to_paper_embedding(p) : p.vertices;
  Json verts = Json::array();
  for (int i = 0; i < coords.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < coords.cols(); ++c) row.push_back(coords(i, c));
    verts.push_back(row);
  }
  j["vertex_matrix"] = verts;
  j["embedding"] = paper_embedding ? "paper" : "reduced";
  return j;
}

inline Json to_json(const ConfidenceInterval& ci) {
  return Json{{"level", ci.level}, {"lo", ci.lo}, {"hi", ci.hi}};
}

inline Json to_json(const EdgeScan& scan) {
  Json j;
  j["pairs"] = scan.pairs;
  j["edges"] = scan.edges;
  j["antipodal_pairs"] = scan.antipodal_pairs;
  j["non_edges"] = scan.non_edges;
  j["solver_failures"] = scan.failures;
  j["edge_bound"] = scan.bn08_bound;
  j["edge_bound_ok"] = scan.bn08_ok;
  Json bad = Json::array();
  for (const PairOutcome& po : scan.non_edge_list) bad.push_back(Json::array({po.a, po.b}));
  j["non_edge_pairs"] = bad;
  return j;
}

inline Json to_json(const NeighborlyReport& rep) {
  Json j;
  j["required_pairs"] = rep.required_pairs;
  j["passed"] = rep.passed;
  j["exempt_pairs"] = rep.exempt_pairs;
  j["exempt_edges"] = rep.exempt_edges;
  j["solver_failures"] = rep.failures;
  j["status"] = to_string(rep.status);
  Json failed = Json::array();
  for (const PairOutcome& po : rep.failed_pairs) failed.push_back(Json::array({po.a, po.b}));
  j["failed_pairs"] = failed;
  return j;
}

inline Json to_json(const FaceReport& rep) {
  Json j;
  j["tuple_size"] = rep.tuple_size;
  j["mode"] = to_string(rep.mode);
  j["seed"] = rep.seed;
  j["trials"] = rep.trials;
  j["faces"] = rep.face_count;
  j["not_faces"] = rep.not_face_count;
  j["solver_failures"] = rep.failures;
  j["failure_fraction"] = rep.failure_fraction;
  j["confidence_interval"] = to_json(rep.ci);
  if (!std::isnan(rep.paper_bound)) {
    j["paper_bound"] = rep.paper_bound;
    j["bound_ok"] = rep.bound_ok;
  }
  return j;
}

inline Json to_json(const SumLawReport& rep) {
  Json j;
  j["samples"] = rep.samples;
  j["mismatches"] = rep.mismatches;
  j["inconclusive"] = rep.inconclusive;
  j["r_tuple_trials"] = rep.r_tuple_trials;
  j["r_tuple_faces"] = rep.r_tuple_faces;
  if (!std::isnan(rep.bound)) {
    j["composite_bound"] = rep.bound;
    j["bound_ok"] = rep.bound_ok;
  }
  j["status"] = to_string(rep.status);
  Json mm = Json::array();
  for (const SumLawMismatch& m : rep.mismatch_list) {
    Json e;
    e["subset"] = m.subset;
    e["whole"] = m.whole == FaceStatus::Face ? "face" : "not-face";
    e["blockwise"] = m.blockwise == FaceStatus::Face ? "face" : "not-face";
    mm.push_back(e);
  }
  j["mismatch_list"] = mm;
  return j;
}

inline Json to_json(const ArcReport& rep) {
  Json j;
  j["trials"] = rep.trials;
  j["faces"] = rep.faces;
  j["inconclusive_collinear"] = rep.inconclusive_collinear;
  j["refutations"] = rep.refutations;
  j["solver_failures"] = rep.solver_failures;
  j["status"] = to_string(rep.status);
  return j;
}

inline Json to_json(const RecoveryTrial& t) {
  Json j;
  j["support"] = t.support;
  j["signs"] = t.signs;
  j["recovered"] = t.recovered;
  j["face_condition"] = t.face_condition;
  j["face_inconclusive"] = t.face_inconclusive;
  j["consistent"] = t.consistent;
  j["skipped_degenerate"] = t.skipped_degenerate;
  if (!t.skipped_degenerate) {
    j["linf_error"] = t.linf_error;
    j["l1_objective"] = t.l1_objective;
    j["l1_true"] = t.l1_true;
    j["decode_status"] = to_string(t.decode_status);
  }
  return j;
}

}  // namespace cspoly
