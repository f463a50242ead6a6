#ifndef TREECOVER_IO_HPP
#define TREECOVER_IO_HPP

// RFC 4180 CSV, JSON persistence for networks and estimates, and a stable
// 64-bit content hash used in manifests.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "treecover/error.hpp"
#include "treecover/gaussian.hpp"
#include "treecover/network.hpp"
#include "treecover/walk_sim.hpp"

namespace treecover {

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw SchemaError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_int(std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw SchemaError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

/// FNV-1a over bytes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& os, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

/// Records of an RFC 4180 document; accepts LF or CRLF line ends.
inline std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && is.peek() == '\n') is.get(c);
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {
inline void expect_header(const std::vector<std::vector<std::string>>& rows,
                          const std::vector<std::string>& header) {
  if (rows.empty()) throw SchemaError("empty CSV");
  if (rows.front() != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw SchemaError("CSV header mismatch; expected " + want);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw SchemaError("CSV row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " fields, expected " + std::to_string(header.size()));
    }
  }
}
}  // namespace detail

/// One cover-time sample as stored in sample CSVs.
struct SampleRow {
  Family family = Family::raw;
  double lambda = 0.0;
  int n = 0;
  int level = 0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  double rescaled = 0.0;
};

inline const std::vector<std::string>& sample_header() {
  static const std::vector<std::string> h{"family", "lambda", "n", "level", "seed", "tau", "rescaled"};
  return h;
}

inline void write_samples_csv(std::ostream& os, std::span<const SampleRow> rows) {
  write_csv_row(os, sample_header());
  for (const auto& r : rows) {
    const std::vector<std::string> f{to_string(r.family), format_double(r.lambda), std::to_string(r.n),
                                     std::to_string(r.level), std::to_string(r.seed),
                                     format_double(r.tau), format_double(r.rescaled)};
    write_csv_row(os, f);
  }
}

inline std::vector<SampleRow> read_samples_csv(std::istream& is) {
  const auto rows = read_csv(is);
  detail::expect_header(rows, sample_header());
  std::vector<SampleRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    out.push_back({parse_family(f[0]), parse_double(f[1]), parse_int<int>(f[2]), parse_int<int>(f[3]),
                   parse_int<std::uint64_t>(f[4]), parse_double(f[5]), parse_double(f[6])});
  }
  return out;
}

inline const std::vector<std::string>& run_record_header() {
  static const std::vector<std::string> h{"family", "lambda", "n", "seed", "tau", "jumps"};
  return h;
}

inline void write_run_records_csv(std::ostream& os, std::span<const RunRecord> runs) {
  write_csv_row(os, run_record_header());
  for (const auto& r : runs) {
    const std::vector<std::string> f{to_string(r.family), format_double(r.lambda), std::to_string(r.n),
                                     std::to_string(r.seed), format_double(r.tau), std::to_string(r.jumps)};
    write_csv_row(os, f);
  }
}

inline std::vector<RunRecord> read_run_records_csv(std::istream& is) {
  const auto rows = read_csv(is);
  detail::expect_header(rows, run_record_header());
  std::vector<RunRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    out.push_back({parse_family(f[0]), parse_double(f[1]), parse_int<int>(f[2]),
                   parse_int<std::uint64_t>(f[3]), parse_double(f[4]), parse_int<std::uint64_t>(f[5]), {}});
  }
  return out;
}

inline void write_tail_csv(std::ostream& os, const TailFit& fit) {
  write_csv_row(os, std::vector<std::string>{"u", "exceedance", "fitted"});
  for (std::size_t i = 0; i < fit.u.size(); ++i) {
    write_csv_row(os, std::vector<std::string>{format_double(fit.u[i]), format_double(fit.exceedance[i]),
                                               format_double(fit.fitted[i])});
  }
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json network_to_json(const Network& net) {
  nlohmann::json j;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : net.vertices()) vs.push_back(to_string(v));
  auto& cs = j["conductance"] = nlohmann::json::array();
  for (const auto& t : net.triplets()) cs.push_back(nlohmann::json::array({t.i, t.j, t.value}));
  j["measure"] = net.measure();
  return j;
}

inline Network network_from_json(const nlohmann::json& j) {
  try {
    std::vector<Vertex> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(parse_vertex(v.get<std::string>()));
    std::vector<Triplet> edges;
    for (const auto& t : j.at("conductance")) {
      if (t.size() != 3) throw SchemaError("conductance entries are [i, j, value]");
      edges.push_back({t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>(), t[2].get<double>()});
    }
    auto measure = j.at("measure").get<std::vector<double>>();
    for (const auto& e : edges) {
      if (e.i >= vertices.size() || e.j >= vertices.size()) throw SchemaError("conductance index out of range");
    }
    return Network(std::move(vertices), edges, std::move(measure));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("network JSON: ") + e.what());
  }
}

inline nlohmann::json estimate_to_json(const Estimate& e) {
  return {{"lambda", e.lambda}, {"n", e.n},           {"estimate", e.estimate},
          {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

inline Estimate estimate_from_json(const nlohmann::json& j) {
  try {
    return {j.at("lambda").get<double>(),   j.at("n").get<int>(),
            j.at("estimate").get<double>(), j.at("stderr").get<double>(),
            j.at("samples").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("estimate JSON: ") + e.what());
  }
}

}  // namespace treecover

#endif  // TREECOVER_IO_HPP
