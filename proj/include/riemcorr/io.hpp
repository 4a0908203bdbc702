#pragma once

// Serialization: CSV readers/writers for sphere and SO(3) samples, the
// VCG-style paired loader, JSON forms of points, Fréchet results, dependence
// reports, sweep tables, and the sweep-config JSON parser.
//
// All floating-point output uses the shortest round-trip decimal form, so
// identical inputs always serialize to identical bytes.

#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "riemcorr/dependence.hpp"
#include "riemcorr/errors.hpp"
#include "riemcorr/frechet.hpp"
#include "riemcorr/geometry.hpp"
#include "riemcorr/manifold.hpp"
#include "riemcorr/simulation.hpp"
#include "riemcorr/so3.hpp"

namespace riemcorr::io {

using nlohmann::json;

inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const std::to_chars_result res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// CSV primitives

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const std::from_chars_result res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw Error(context + ": cannot parse number '" + s + "'");
  return v;
}

// Splits file content into lines, tolerating CRLF endings and a trailing
// newline.
inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

inline bool blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sphere sample CSV (header: id,x,y,z)

struct DirectionRecord {
  std::string id;
  ManifoldPoint point;
};

inline constexpr const char* kSphereCsvHeader = "id,x,y,z";

inline std::string sphere_csv(const std::vector<ManifoldPoint>& points,
                              const std::vector<std::string>* ids = nullptr) {
  std::string out = std::string(kSphereCsvHeader) + "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& v = points[i].unit_vector();
    const std::string id = ids ? (*ids)[i] : std::to_string(i + 1);
    out += csv_escape(id) + "," + format_double(v.x) + "," + format_double(v.y) + "," +
           format_double(v.z) + "\n";
  }
  return out;
}

// Strict mode rejects rows whose vector norm is off by more than 1e-6;
// lenient mode renormalizes any nonzero vector and records a warning. Valid
// rows are always renormalized to full precision.
inline std::vector<DirectionRecord> load_sphere_records(const std::string& path,
                                                        bool lenient = false,
                                                        std::vector<std::string>* warnings = nullptr) {
  const std::vector<std::string> lines = detail::split_lines(read_text_file(path));
  if (lines.empty() || detail::blank(lines[0])) throw Error(path + ": missing header row");
  if (lines[0] != kSphereCsvHeader)
    throw Error(path + ": bad header '" + lines[0] + "' (expected '" + kSphereCsvHeader + "')");
  std::vector<DirectionRecord> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::blank(lines[li])) continue;
    const std::string where = path + ": row " + std::to_string(li + 1);
    const std::vector<std::string> f = split_csv_line(lines[li]);
    if (f.size() != 4) throw Error(where + ": expected 4 fields, got " + std::to_string(f.size()));
    const Vec3 v{detail::parse_double(f[1], where), detail::parse_double(f[2], where),
                 detail::parse_double(f[3], where)};
    const double n = norm(v);
    if (std::abs(n - 1.0) > 1e-6) {
      if (!lenient)
        throw Error(where + ": vector norm " + format_double(n) + " is not 1 (within 1e-6)");
      if (n < 1e-12) throw Error(where + ": zero vector cannot be normalized");
      if (warnings)
        warnings->push_back(where + ": renormalized vector with norm " + format_double(n));
    }
    out.push_back({f[0], ManifoldPoint::sphere_normalized(v)});
  }
  if (out.empty()) throw Error(path + ": no data rows");
  return out;
}

inline std::vector<ManifoldPoint> load_sphere_csv(const std::string& path, bool lenient = false,
                                                  std::vector<std::string>* warnings = nullptr) {
  std::vector<ManifoldPoint> out;
  for (DirectionRecord& r : load_sphere_records(path, lenient, warnings))
    out.push_back(std::move(r.point));
  return out;
}

// ---------------------------------------------------------------------------
// SO(3) sample CSV (header: id,format,v1..v9; formats: matrix 9 values
// row-major, quaternion 4 values scalar-first, axis-angle 4 values)

struct RotationRecord {
  std::string id;
  ManifoldPoint point;
};

inline constexpr const char* kSo3CsvHeader = "id,format,v1,v2,v3,v4,v5,v6,v7,v8,v9";

inline std::string so3_csv(const std::vector<ManifoldPoint>& points,
                           const std::vector<std::string>* ids = nullptr) {
  std::string out = std::string(kSo3CsvHeader) + "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Mat3& r = points[i].rotation_matrix();
    const std::string id = ids ? (*ids)[i] : std::to_string(i + 1);
    out += csv_escape(id) + ",matrix";
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) out += "," + format_double(r.m[row][col]);
    out += "\n";
  }
  return out;
}

namespace detail {

inline ManifoldPoint decode_rotation_row(const std::vector<std::string>& f,
                                         const std::string& where, bool lenient,
                                         std::vector<std::string>* warnings) {
  const std::string& format = f[1];
  const auto values = [&](std::size_t count) {
    // Accept either exactly `count` value fields or the full 9 with trailing
    // blanks (as a spreadsheet would save them).
    if (f.size() != 2 + count) {
      if (f.size() != 11)
        throw Error(where + ": expected " + std::to_string(count) + " values for format '" +
                    format + "'");
      for (std::size_t i = 2 + count; i < 11; ++i)
        if (!f[i].empty())
          throw Error(where + ": expected " + std::to_string(count) + " values for format '" +
                      format + "'");
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(parse_double(f[2 + i], where));
    return v;
  };

  if (format == "matrix") {
    const std::vector<double> v = values(9);
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = v[static_cast<std::size_t>(3 * i + j)];
    if (det(r) <= 0.0) throw Error(where + ": matrix has nonpositive determinant");
    const double defect = max_abs_diff(transpose(r) * r, Mat3::identity());
    if (defect > 1e-6) {
      if (!lenient)
        throw Error(where + ": matrix is not orthogonal (defect " + format_double(defect) + ")");
      if (warnings)
        warnings->push_back(where + ": projected non-orthogonal matrix (defect " +
                            format_double(defect) + ")");
    }
    return ManifoldPoint::rotation_projected(r);
  }
  if (format == "quaternion") {
    const std::vector<double> v = values(4);
    so3::Quaternion q{v[0], v[1], v[2], v[3]};
    const double n = q.norm();
    if (std::abs(n - 1.0) > 1e-6) {
      if (!lenient || n < 1e-12)
        throw Error(where + ": quaternion norm " + format_double(n) + " is not 1 (within 1e-6)");
      q = {q.a / n, q.b / n, q.c / n, q.d / n};
      if (warnings)
        warnings->push_back(where + ": renormalized quaternion with norm " + format_double(n));
    }
    return ManifoldPoint::rotation_projected(so3::rotation_from_quaternion(q));
  }
  if (format == "axis-angle") {
    const std::vector<double> v = values(4);
    Vec3 axis{v[0], v[1], v[2]};
    const double n = norm(axis);
    if (std::abs(n - 1.0) > 1e-6) {
      if (!lenient || n < 1e-12)
        throw Error(where + ": axis norm " + format_double(n) + " is not 1 (within 1e-6)");
      if (warnings)
        warnings->push_back(where + ": renormalized axis with norm " + format_double(n));
    }
    return ManifoldPoint::rotation_projected(
        so3::rotation_from_axis_angle({normalized(axis), v[3]}));
  }
  throw Error(where + ": unknown format '" + format + "'");
}

}  // namespace detail

inline std::vector<RotationRecord> load_so3_records(const std::string& path, bool lenient = false,
                                                    std::vector<std::string>* warnings = nullptr) {
  const std::vector<std::string> lines = detail::split_lines(read_text_file(path));
  if (lines.empty() || detail::blank(lines[0])) throw Error(path + ": missing header row");
  if (lines[0] != kSo3CsvHeader)
    throw Error(path + ": bad header '" + lines[0] + "' (expected '" + kSo3CsvHeader + "')");
  std::vector<RotationRecord> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::blank(lines[li])) continue;
    const std::string where = path + ": row " + std::to_string(li + 1);
    const std::vector<std::string> f = split_csv_line(lines[li]);
    if (f.size() < 2) throw Error(where + ": expected id and format fields");
    out.push_back({f[0], detail::decode_rotation_row(f, where, lenient, warnings)});
  }
  if (out.empty()) throw Error(path + ": no data rows");
  return out;
}

inline std::vector<ManifoldPoint> load_so3_csv(const std::string& path, bool lenient = false,
                                               std::vector<std::string>* warnings = nullptr) {
  std::vector<ManifoldPoint> out;
  for (RotationRecord& r : load_so3_records(path, lenient, warnings))
    out.push_back(std::move(r.point));
  return out;
}

// Loads a sample file of either manifold by inspecting the header.
inline std::vector<ManifoldPoint> load_sample_csv(const std::string& path, bool lenient = false,
                                                  std::vector<std::string>* warnings = nullptr) {
  const std::string text = read_text_file(path);
  const std::vector<std::string> lines = detail::split_lines(text);
  if (lines.empty()) throw Error(path + ": missing header row");
  if (lines[0] == kSphereCsvHeader) return load_sphere_csv(path, lenient, warnings);
  if (lines[0] == kSo3CsvHeader) return load_so3_csv(path, lenient, warnings);
  throw Error(path + ": unrecognized header '" + lines[0] + "'");
}

// ---------------------------------------------------------------------------
// VCG-style paired dataset: two sphere CSVs joined on id

inline PairedSample load_vcg_dataset(const std::string& path_f, const std::string& path_mp,
                                     bool lenient = false,
                                     std::vector<std::string>* warnings = nullptr) {
  const std::vector<DirectionRecord> f_recs = load_sphere_records(path_f, lenient, warnings);
  const std::vector<DirectionRecord> mp_recs = load_sphere_records(path_mp, lenient, warnings);

  std::map<std::string, std::size_t> mp_index;
  for (std::size_t i = 0; i < mp_recs.size(); ++i) {
    if (!mp_index.emplace(mp_recs[i].id, i).second)
      throw Error(path_mp + ": duplicate id '" + mp_recs[i].id + "'");
  }
  std::map<std::string, std::size_t> f_index;
  for (std::size_t i = 0; i < f_recs.size(); ++i) {
    if (!f_index.emplace(f_recs[i].id, i).second)
      throw Error(path_f + ": duplicate id '" + f_recs[i].id + "'");
  }

  std::string missing_mp, missing_f;
  for (const DirectionRecord& r : f_recs)
    if (mp_index.find(r.id) == mp_index.end())
      missing_mp += (missing_mp.empty() ? "" : ", ") + r.id;
  for (const DirectionRecord& r : mp_recs)
    if (f_index.find(r.id) == f_index.end()) missing_f += (missing_f.empty() ? "" : ", ") + r.id;
  if (!missing_mp.empty() || !missing_f.empty()) {
    std::string msg = "paired dataset id mismatch:";
    if (!missing_mp.empty()) msg += " missing from " + path_mp + ": " + missing_mp + ";";
    if (!missing_f.empty()) msg += " missing from " + path_f + ": " + missing_f + ";";
    throw Error(msg);
  }

  std::vector<ManifoldPoint> xs, ys;
  xs.reserve(f_recs.size());
  ys.reserve(f_recs.size());
  for (const DirectionRecord& r : f_recs) {
    xs.push_back(r.point);
    ys.push_back(mp_recs[mp_index.at(r.id)].point);
  }
  return PairedSample(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// JSON forms

inline json point_json(const ManifoldPoint& p) {
  if (p.manifold() == Manifold::sphere) {
    const Vec3& v = p.unit_vector();
    return json{{"manifold", "sphere"}, {"coordinates", {v.x, v.y, v.z}}};
  }
  const Mat3& r = p.rotation_matrix();
  return json{{"manifold", "so3"},
              {"matrix",
               {{r.m[0][0], r.m[0][1], r.m[0][2]},
                {r.m[1][0], r.m[1][1], r.m[1][2]},
                {r.m[2][0], r.m[2][1], r.m[2][2]}}}};
}

inline ManifoldPoint point_from_json(const json& j) {
  const std::string m = j.at("manifold").get<std::string>();
  if (m == "sphere") {
    const auto c = j.at("coordinates");
    if (!c.is_array() || c.size() != 3) throw Error("point JSON: coordinates must have 3 entries");
    return ManifoldPoint::sphere_normalized(
        {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
  }
  if (m == "so3") {
    const auto rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != 3) throw Error("point JSON: matrix must have 3 rows");
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 3)
        throw Error("point JSON: matrix rows must have 3 entries");
      for (int jj = 0; jj < 3; ++jj) r.m[i][jj] = rows[i][jj].get<double>();
    }
    return ManifoldPoint::rotation_projected(r);
  }
  throw Error("point JSON: unknown manifold '" + m + "'");
}

inline json small_matrix_json(const SmallMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim; ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim; ++j) row.push_back(m.a[i][j]);
    rows.push_back(row);
  }
  return rows;
}

// Frame vectors that define the matrix entries, in ambient representation.
inline json frame_json(const ManifoldPoint& p) {
  const TangentBasis basis = tangent_basis(p);
  json frame = json::array();
  if (basis.manifold == Manifold::sphere) {
    for (int k = 0; k < 2; ++k) {
      const Vec3& e = basis.sphere_axes[static_cast<std::size_t>(k)];
      frame.push_back({e.x, e.y, e.z});
    }
  } else {
    for (int k = 0; k < 3; ++k) {
      const Mat3& e = basis.rotation_axes[static_cast<std::size_t>(k)];
      frame.push_back({{e.m[0][0], e.m[0][1], e.m[0][2]},
                       {e.m[1][0], e.m[1][1], e.m[1][2]},
                       {e.m[2][0], e.m[2][1], e.m[2][2]}});
    }
  }
  return frame;
}

inline json frechet_result_json(const FrechetResult& r) {
  return json{{"mean", point_json(r.mean)},
              {"total-variance", r.total_variance},
              {"iterations", r.iterations},
              {"final-gradient-norm", r.final_gradient_norm},
              {"converged", r.converged},
              {"sample-diameter", r.sample_diameter},
              {"diameter-is-bound", r.diameter_is_bound},
              {"diameter-warning", r.diameter_warning}};
}

inline json dependence_report_json(const DependenceReport& r) {
  json j{{"n", r.n},
         {"reference-point", point_json(r.reference_point)},
         {"point-policy", policy_name(r.policy)},
         {"frame", frame_json(r.reference_point)},
         {"sigma-hat", small_matrix_json(r.sigma_hat)},
         {"rcov", r.rcov},
         {"rcorr", r.rcorr},
         {"dcorr", r.dcorr ? json(*r.dcorr) : json(nullptr)},
         {"frechet-mean-x", frechet_result_json(r.mean_x)},
         {"frechet-mean-y", frechet_result_json(r.mean_y)},
         {"frechet-mean-distance", r.frechet_mean_distance},
         {"domain-diagnostic",
          {{"max-reference-distance", r.max_reference_distance},
           {"injectivity-radius", r.injectivity_radius}}}};
  if (r.weights) j["weights"] = {r.weights->first, r.weights->second};
  return j;
}

// ---------------------------------------------------------------------------
// Sweep CSV and sweep-config JSON

inline constexpr const char* kSweepCsvHeader =
    "manifold,scenario,epsilon,replication,n,seed,policy,rcorr,dcorr,rcov,frechet-dist-means,"
    "error";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += r.manifold + "," + r.scenario + "," + format_double(r.epsilon) + "," + r.replication +
           "," + std::to_string(r.n) + "," + r.seed + "," + r.policy + "," + opt(r.rcorr) + "," +
           opt(r.dcorr) + "," + opt(r.rcov) + "," + opt(r.frechet_dist_means) + "," +
           csv_escape(r.error) + "\n";
  }
  return out;
}

namespace detail {

inline Vec3 vec3_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(what + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Mat3 rotation_from_json(const json& j, const std::string& what) {
  if (j.is_object() && j.contains("axis") && j.contains("angle")) {
    const Vec3 axis = vec3_from_json(j.at("axis"), what + ".axis");
    return so3::rotation_from_axis_angle({normalized(axis), j.at("angle").get<double>()});
  }
  if (j.is_array() && j.size() == 3) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      if (!j[i].is_array() || j[i].size() != 3)
        throw Error(what + " matrix rows must have 3 entries");
      for (int c = 0; c < 3; ++c) r.m[i][c] = j[i][c].get<double>();
    }
    return so3::polar_project(r);
  }
  throw Error(what + " must be a 3x3 array or {axis, angle}");
}

}  // namespace detail

// Config document: {"manifold", "scenario", "params": {...}, "noise-grid",
// "replications", "base-seed", "solver": {...}}. Scenario presets fill every
// field; params entries override individually.
inline SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig sweep;
  const Manifold manifold = manifold_from_name(j.at("manifold").get<std::string>());
  const Scenario scenario = scenario_from_name(j.at("scenario").get<std::string>());
  int n = 100;
  if (j.contains("params") && j.at("params").contains("n"))
    n = j.at("params").at("n").get<int>();
  sweep.scenario = make_scenario(manifold, scenario, n);

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (p.contains("mu")) sweep.scenario.mu = detail::vec3_from_json(p.at("mu"), "params.mu");
    if (p.contains("kappa")) sweep.scenario.kappa = p.at("kappa").get<double>();
    if (p.contains("rotation-axis"))
      sweep.scenario.rotation_axis =
          detail::vec3_from_json(p.at("rotation-axis"), "params.rotation-axis");
    if (p.contains("rotation-angle"))
      sweep.scenario.rotation_angle = p.at("rotation-angle").get<double>();
    if (p.contains("mu2")) sweep.scenario.mu2 = detail::vec3_from_json(p.at("mu2"), "params.mu2");
    if (p.contains("kappa2")) sweep.scenario.kappa2 = p.at("kappa2").get<double>();
    if (p.contains("alpha")) sweep.scenario.alpha = p.at("alpha").get<double>();
    if (p.contains("alpha2")) sweep.scenario.alpha2 = p.at("alpha2").get<double>();
    if (p.contains("theta")) sweep.scenario.theta = p.at("theta").get<double>();
    if (p.contains("b")) sweep.scenario.b_rotation = detail::rotation_from_json(p.at("b"), "params.b");
  }

  if (!j.contains("noise-grid")) throw Error("sweep config: missing noise-grid");
  for (const json& e : j.at("noise-grid")) sweep.noise_grid.push_back(e.get<double>());
  if (j.contains("replications")) sweep.replications = j.at("replications").get<int>();
  if (j.contains("base-seed")) sweep.base_seed = j.at("base-seed").get<std::uint64_t>();
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (s.contains("tolerance")) sweep.eval.solver.tolerance = s.at("tolerance").get<double>();
    if (s.contains("max-iterations"))
      sweep.eval.solver.max_iterations = s.at("max-iterations").get<int>();
    if (s.contains("step")) sweep.eval.solver.step = s.at("step").get<double>();
  }
  if (j.contains("with-dcorr")) sweep.eval.with_dcorr = j.at("with-dcorr").get<bool>();
  validate_sweep(sweep);
  return sweep;
}

// Sample CSV in the format of the sample's manifold.
inline std::string points_csv(const std::vector<ManifoldPoint>& points) {
  if (points.empty()) throw Error("points_csv: empty sample");
  return points[0].manifold() == Manifold::sphere ? sphere_csv(points) : so3_csv(points);
}

}  // namespace riemcorr::io
