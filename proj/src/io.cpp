#include "cliqueloop/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "cliqueloop/error.hpp"

namespace cliqueloop::io {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string text(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    parse_error(line, "invalid number '" + text + "'");
  }
  return v;
}

std::uint32_t parse_index(std::string_view field, std::size_t line) {
  const std::string text(field);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() ||
      errno == ERANGE || v > 0xffffffffULL) {
    parse_error(line, "invalid index '" + text + "'");
  }
  return static_cast<std::uint32_t>(v);
}

// Calls fn(line_number, content) for every non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    fn(number, line);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return in;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

NPoint point_from_json(const Json& j, std::size_t line) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
    parse_error(line, "coordinates must be an array of 2 or 3 numbers");
  }
  std::vector<double> coords;
  for (const auto& v : j) {
    if (!v.is_number()) parse_error(line, "coordinate is not a number");
    coords.push_back(v.get<double>());
  }
  try {
    return NPoint(coords);
  } catch (const Error& e) {
    parse_error(line, e.what());
  }
}

Json point_to_json(const NPoint& p) {
  Json a = Json::array();
  for (int k = 0; k < p.dim(); ++k) a.push_back(p[static_cast<std::size_t>(k)]);
  return a;
}

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  return out;
}

NPointSet read_points(std::istream& in, int dim_hint) {
  std::optional<NPointSet> points;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = split(text, ',');
    if (fields.size() != 2 && fields.size() != 3) {
      parse_error(line, "expected 2 or 3 comma-separated coordinates");
    }
    std::vector<double> coords;
    for (auto f : fields) coords.push_back(parse_double(f, line));
    if (!points) points.emplace(static_cast<int>(coords.size()));
    try {
      points->push_back(NPoint(coords));
    } catch (const Error& e) {
      parse_error(line, e.what());
    }
  });
  return points ? std::move(*points) : NPointSet(dim_hint);
}

NPointSet read_points(const std::filesystem::path& path, int dim_hint) {
  auto in = open_input(path);
  return read_points(in, dim_hint);
}

void write_points(std::ostream& out, const NPointSet& points) {
  for (const auto& p : points) {
    out << format_double(p[0]) << ',' << format_double(p[1]);
    if (p.dim() == 3) out << ',' << format_double(p[2]);
    out << '\n';
  }
}

std::vector<DescriptorEntry> read_descriptors(std::istream& in) {
  std::vector<DescriptorEntry> entries;
  std::uint32_t ordinal = 0;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    const auto fields = split(text, ',');
    DescriptorEntry entry{BinaryDescriptor(8), ordinal, 0};
    std::string_view hex;
    if (fields.size() == 1) {
      hex = fields[0];
    } else if (fields.size() == 3) {
      entry.keypoint_id = parse_index(fields[0], line);
      entry.map_id = parse_index(fields[1], line);
      hex = fields[2];
    } else {
      parse_error(line, "expected 'hex' or 'id,map_id,hex'");
    }
    try {
      entry.descriptor = BinaryDescriptor::from_hex(hex);
    } catch (const Error& e) {
      parse_error(line, e.what());
    }
    if (!entries.empty() && entry.descriptor.size() != entries.front().descriptor.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "line " + std::to_string(line) + ": descriptor has " +
                      std::to_string(entry.descriptor.size()) + " bits, expected " +
                      std::to_string(entries.front().descriptor.size()));
    }
    entries.push_back(std::move(entry));
    ++ordinal;
  });
  return entries;
}

std::vector<DescriptorEntry> read_descriptors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_descriptors(in);
}

void write_descriptors(std::ostream& out, const std::vector<DescriptorEntry>& entries) {
  for (const auto& e : entries) {
    out << e.keypoint_id << ',' << e.map_id << ',' << e.descriptor.to_hex() << '\n';
  }
}

CorrespondenceSet read_correspondences(std::istream& in, int dim_hint) {
  std::optional<CorrespondenceSet> corr;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      parse_error(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_error(line, "expected a JSON object");
    for (const char* key : {"m_idx", "q_idx", "m", "q"}) {
      if (!j.contains(key)) parse_error(line, std::string("missing field '") + key + "'");
    }
    Correspondence c;
    c.m = point_from_json(j["m"], line);
    c.q = point_from_json(j["q"], line);
    if (c.m.dim() != c.q.dim()) parse_error(line, "m and q dimensions differ");
    try {
      c.m_idx = j["m_idx"].get<std::uint32_t>();
      c.q_idx = j["q_idx"].get<std::uint32_t>();
      c.descriptor_distance = j.value("desc_dist", 0);
    } catch (const nlohmann::json::exception& e) {
      parse_error(line, std::string("invalid field: ") + e.what());
    }
    if (!corr) corr.emplace(c.m.dim());
    if (c.m.dim() != corr->dim()) parse_error(line, "dimension differs from earlier lines");
    corr->push_back(c);
  });
  return corr ? std::move(*corr) : CorrespondenceSet(dim_hint);
}

CorrespondenceSet read_correspondences(const std::filesystem::path& path, int dim_hint) {
  auto in = open_input(path);
  return read_correspondences(in, dim_hint);
}

void write_correspondences(std::ostream& out, const CorrespondenceSet& corr) {
  for (const auto& c : corr) {
    Json j;
    j["m_idx"] = c.m_idx;
    j["q_idx"] = c.q_idx;
    j["m"] = point_to_json(c.m);
    j["q"] = point_to_json(c.q);
    j["desc_dist"] = c.descriptor_distance;
    out << j.dump() << '\n';
  }
}

std::string result_to_json(const VerificationResult& result) {
  Json j;
  j["method"] = std::string(to_string(result.method));
  j["accepted"] = result.accepted;
  j["dim"] = result.inliers.dim();
  j["inlier_count"] = result.inlier_count;
  j["rmse"] = result.rmse ? Json(*result.rmse) : Json(nullptr);
  j["elapsed_ms"] = result.elapsed_ms;
  if (result.transform) {
    const Eigen::MatrixXd r = result.transform->rotation();
    const Eigen::VectorXd t = result.transform->translation();
    Json rot = Json::array();
    for (Eigen::Index row = 0; row < r.rows(); ++row) {
      for (Eigen::Index col = 0; col < r.cols(); ++col) rot.push_back(r(row, col));
    }
    Json trans = Json::array();
    for (Eigen::Index k = 0; k < t.size(); ++k) trans.push_back(t(k));
    j["transform"] = {{"rotation", rot}, {"translation", trans}};
  } else {
    j["transform"] = nullptr;
  }
  Json inliers = Json::array();
  for (const auto& c : result.inliers) inliers.push_back({c.m_idx, c.q_idx});
  j["inliers"] = std::move(inliers);
  j["diagnostic"] = result.diagnostic;
  return j.dump();
}

std::string truth_to_json(const Scene& scene) {
  Json j;
  const Eigen::MatrixXd r = scene.truth.rotation();
  const Eigen::VectorXd t = scene.truth.translation();
  Json rot = Json::array();
  for (Eigen::Index row = 0; row < r.rows(); ++row) {
    for (Eigen::Index col = 0; col < r.cols(); ++col) rot.push_back(r(row, col));
  }
  Json trans = Json::array();
  for (Eigen::Index k = 0; k < t.size(); ++k) trans.push_back(t(k));
  j["dim"] = scene.truth.dim();
  j["rotation"] = rot;
  j["translation"] = trans;
  j["inlier_indices"] = scene.inlier_indices();
  j["correspondences"] = scene.correspondences.size();
  return j.dump(2);
}

void write_scene(const std::filesystem::path& dir, const Scene& scene) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "'");
  {
    auto out = open_output(dir / "M.csv");
    write_points(out, scene.reference);
  }
  {
    auto out = open_output(dir / "Q.csv");
    write_points(out, scene.query);
  }
  {
    auto out = open_output(dir / "corr.jsonl");
    write_correspondences(out, scene.correspondences);
  }
  {
    auto out = open_output(dir / "truth.json");
    out << truth_to_json(scene) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write to '" + dir.string() + "' failed");
  }
}

}  // namespace cliqueloop::io
