#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "planarac/synthetic.hpp"
#include "planarac/types.hpp"

namespace planarac::io {

inline constexpr std::string_view kCorrespondenceMagic =
    "# planarac-correspondences v1";
inline constexpr std::string_view kGroundTruthMagic =
    "# planarac-groundtruth v1";
inline constexpr std::string_view kResultsMagic = "# planarac-results v1";
inline constexpr std::string_view kBenchmarkMagic = "# planarac-benchmark v1";

inline constexpr std::string_view kCorrespondenceHeader =
    "p1x,p1y,p2x,p2y,a1,a2,a3,a4";
inline constexpr std::string_view kGroundTruthHeader = "alpha,beta,focal";
inline constexpr std::string_view kResultsHeader =
    "solver,robust,alpha_rad,beta_rad,focal_px,inliers,residual_mean_px,"
    "residual_median_px,time_ms";
inline constexpr std::string_view kBenchmarkHeader =
    "solver,sigma,mean_rot_deg,std_rot_deg,mean_tr_deg,std_tr_deg,"
    "mean_focal_rel,std_focal_rel,fail_rate,mean_ms";

enum class Frame { kNormalized, kPixel };

inline std::string_view to_string(Frame f) {
  return f == Frame::kPixel ? "pixel" : "normalized";
}

struct CorrespondenceFile {
  Frame frame = Frame::kNormalized;
  std::optional<CameraIntrinsics> intrinsics;
  std::vector<AffineCorrespondence> acs;
};

struct GroundTruth {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> focal;
};

struct ResultRecord {
  std::string solver;
  std::string robust;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> focal;
  int inliers = 0;
  double residual_mean_px = 0.0;
  double residual_median_px = 0.0;
  double time_ms = 0.0;
};

// 17 significant digits round-trip every double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

namespace internal {

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline double parse_number(std::string_view field, int line) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    parse_fail(line, "not a finite number: '" + std::string(field) + "'");
  }
  return v;
}

inline std::optional<double> parse_optional(std::string_view field, int line) {
  if (trim(field).empty()) return std::nullopt;
  return parse_number(field, line);
}

// Reads the next line, counting it. Returns false at end of stream.
inline bool next_line(std::istream& in, std::string& line, int& number) {
  if (!std::getline(in, line)) return false;
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline void expect_line(std::istream& in, std::string& line, int& number,
                        std::string_view expected, const char* what) {
  if (!next_line(in, line, number)) {
    parse_fail(number + 1, std::string("missing ") + what);
  }
  if (trim(line) != expected) {
    parse_fail(number, std::string("expected ") + what + " '" +
                           std::string(expected) + "'");
  }
}

}  // namespace internal

// --- Correspondence files ---------------------------------------------------

inline void write_correspondences(std::ostream& out,
                                  const CorrespondenceFile& file) {
  nlohmann::ordered_json meta;
  meta["frame"] = to_string(file.frame);
  if (file.intrinsics) {
    meta["intrinsics"] = {{"fx", file.intrinsics->fx},
                          {"fy", file.intrinsics->fy},
                          {"cx", file.intrinsics->cx},
                          {"cy", file.intrinsics->cy}};
  }
  out << kCorrespondenceMagic << '\n' << meta.dump() << '\n'
      << kCorrespondenceHeader << '\n';
  for (const AffineCorrespondence& ac : file.acs) {
    out << format_double(ac.p1.x()) << ',' << format_double(ac.p1.y()) << ','
        << format_double(ac.p2.x()) << ',' << format_double(ac.p2.y()) << ','
        << format_double(ac.a1()) << ',' << format_double(ac.a2()) << ','
        << format_double(ac.a3()) << ',' << format_double(ac.a4()) << '\n';
  }
}

inline CorrespondenceFile read_correspondences(std::istream& in) {
  using internal::parse_fail;
  CorrespondenceFile file;
  std::string line;
  int number = 0;
  internal::expect_line(in, line, number, kCorrespondenceMagic,
                        "version line");

  if (!internal::next_line(in, line, number)) {
    parse_fail(number + 1, "missing metadata line");
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(number, std::string("metadata is not valid JSON: ") + e.what());
  }
  if (!meta.is_object() || !meta.contains("frame") ||
      !meta["frame"].is_string()) {
    parse_fail(number, "metadata needs a string \"frame\" entry");
  }
  const std::string frame = meta["frame"];
  if (frame == "pixel") {
    file.frame = Frame::kPixel;
  } else if (frame != "normalized") {
    parse_fail(number, "frame must be \"normalized\" or \"pixel\"");
  }
  if (meta.contains("intrinsics")) {
    const auto& k = meta["intrinsics"];
    for (const char* key : {"fx", "fy", "cx", "cy"}) {
      if (!k.is_object() || !k.contains(key) || !k[key].is_number()) {
        parse_fail(number, std::string("intrinsics need numeric '") + key +
                               "'");
      }
    }
    try {
      file.intrinsics = CameraIntrinsics(k["fx"].get<double>(),
                                         k["fy"].get<double>(),
                                         k["cx"].get<double>(),
                                         k["cy"].get<double>());
    } catch (const Error& e) {
      parse_fail(number, e.what());
    }
  }

  internal::expect_line(in, line, number, kCorrespondenceHeader,
                        "column header");
  while (internal::next_line(in, line, number)) {
    if (internal::trim(line).empty()) continue;
    const auto fields = internal::split(line, ',');
    if (fields.size() != 8) {
      parse_fail(number, "expected 8 fields, got " +
                             std::to_string(fields.size()));
    }
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = internal::parse_number(fields[i], number);
    AffineCorrespondence ac;
    ac.p1 = {v[0], v[1]};
    ac.p2 = {v[2], v[3]};
    ac.affine << v[4], v[5], v[6], v[7];
    try {
      validate(ac);
    } catch (const Error& e) {
      parse_fail(number, e.what());
    }
    file.acs.push_back(ac);
  }
  return file;
}

// --- Ground truth -----------------------------------------------------------

inline void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
  out << kGroundTruthMagic << '\n' << kGroundTruthHeader << '\n'
      << format_double(gt.alpha) << ',' << format_double(gt.beta) << ','
      << format_optional(gt.focal) << '\n';
}

inline GroundTruth read_ground_truth(std::istream& in) {
  std::string line;
  int number = 0;
  internal::expect_line(in, line, number, kGroundTruthMagic, "version line");
  internal::expect_line(in, line, number, kGroundTruthHeader, "column header");
  if (!internal::next_line(in, line, number)) {
    internal::parse_fail(number + 1, "missing ground-truth record");
  }
  const auto fields = internal::split(line, ',');
  if (fields.size() != 3) {
    internal::parse_fail(number, "expected 3 fields");
  }
  return {internal::parse_number(fields[0], number),
          internal::parse_number(fields[1], number),
          internal::parse_optional(fields[2], number)};
}

// --- Results ----------------------------------------------------------------

inline void write_results_header(std::ostream& out) {
  out << kResultsMagic << '\n' << kResultsHeader << '\n';
}

inline void write_result(std::ostream& out, const ResultRecord& r) {
  out << r.solver << ',' << r.robust << ',' << format_double(r.alpha) << ','
      << format_double(r.beta) << ',' << format_optional(r.focal) << ','
      << r.inliers << ',' << format_double(r.residual_mean_px) << ','
      << format_double(r.residual_median_px) << ','
      << format_double(r.time_ms) << '\n';
}

inline std::vector<ResultRecord> read_results(std::istream& in) {
  std::string line;
  int number = 0;
  internal::expect_line(in, line, number, kResultsMagic, "version line");
  internal::expect_line(in, line, number, kResultsHeader, "column header");
  std::vector<ResultRecord> out;
  while (internal::next_line(in, line, number)) {
    if (internal::trim(line).empty()) continue;
    const auto f = internal::split(line, ',');
    if (f.size() != 9) internal::parse_fail(number, "expected 9 fields");
    ResultRecord r;
    r.solver = std::string(internal::trim(f[0]));
    r.robust = std::string(internal::trim(f[1]));
    r.alpha = internal::parse_number(f[2], number);
    r.beta = internal::parse_number(f[3], number);
    r.focal = internal::parse_optional(f[4], number);
    r.inliers = static_cast<int>(internal::parse_number(f[5], number));
    r.residual_mean_px = internal::parse_number(f[6], number);
    r.residual_median_px = internal::parse_number(f[7], number);
    r.time_ms = internal::parse_number(f[8], number);
    out.push_back(std::move(r));
  }
  return out;
}

// --- Benchmark --------------------------------------------------------------

inline void write_benchmark(std::ostream& out,
                            std::span<const SweepRow> rows) {
  out << kBenchmarkMagic << '\n' << kBenchmarkHeader << '\n';
  for (const SweepRow& r : rows) {
    out << solver_name(r.solver) << ',' << format_double(r.sigma) << ','
        << format_double(r.mean_rot_deg) << ',' << format_double(r.std_rot_deg)
        << ',' << format_double(r.mean_tr_deg) << ','
        << format_double(r.std_tr_deg) << ','
        << format_optional(r.mean_focal_rel) << ','
        << format_optional(r.std_focal_rel) << ','
        << format_double(r.fail_rate) << ',' << format_double(r.mean_ms)
        << '\n';
  }
}

}  // namespace planarac::io
