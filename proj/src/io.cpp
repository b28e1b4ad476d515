#include "fracmax/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fracmax/error.hpp"

namespace fracmax {
namespace {

struct LineReader {
  explicit LineReader(std::istream& s) : in(s) {}

  std::istream& in;
  std::size_t line_no = 0;
  std::string note;

  // Next non-blank, non-comment line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') {
        const std::string tag = "# truncation:";
        if (line.compare(first, tag.size(), tag) == 0) {
          note = line.substr(first + tag.size());
          const auto b = note.find_first_not_of(' ');
          note = b == std::string::npos ? "" : note.substr(b);
          while (!note.empty() && (note.back() == '\r' || note.back() == ' ')) note.pop_back();
        }
        continue;
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("line " + std::to_string(line_no) + ": " + what);
  }
};

double parse_number(const std::string& tok, const LineReader& r) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    r.fail("not a number: '" + tok + "'");
  }
  if (used != tok.size()) r.fail("not a number: '" + tok + "'");
  return v;
}

std::vector<double> numbers_on(const std::string& line, const LineReader& r) {
  std::istringstream ss(line);
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) v.push_back(parse_number(tok, r));
  return v;
}

std::size_t parse_index(double v, std::size_t expected, const LineReader& r) {
  if (v != static_cast<double>(expected))
    r.fail("expected id " + std::to_string(expected));
  return expected;
}

std::vector<PointId> parse_ids(const std::string& text, const LineReader& r) {
  std::vector<PointId> ids;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const double v = parse_number(tok, r);
    if (v < 0 || v != std::floor(v)) r.fail("bad boundary id '" + tok + "'");
    ids.push_back(static_cast<PointId>(v));
  }
  return ids;
}

void check_stream(std::ostream& out, const std::string& path) {
  if (!out) throw Error("cannot write '" + path + "'");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MetricMeasureSpace read_space(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw Error("space file is empty");
  std::map<std::string, std::string> header;
  {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) r.fail("header token without '=': '" + tok + "'");
      header[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  auto require = [&](const std::string& key) {
    auto it = header.find(key);
    if (it == header.end()) r.fail("header lacks '" + key + "='");
    return it->second;
  };
  SpaceInput sin;
  sin.cap_radius = parse_number(require("cap"), r);
  if (header.count("boundary")) sin.boundary = parse_ids(header["boundary"], r);
  const std::string mode = require("mode");

  if (mode == "coords") {
    const std::string metric = require("metric");
    if (metric == "euclidean")
      sin.metric.kind = MetricKind::euclidean;
    else if (metric == "chebyshev")
      sin.metric.kind = MetricKind::chebyshev;
    else
      r.fail("unknown metric '" + metric + "'");
    const double dim = parse_number(require("dim"), r);
    if (!(dim >= 1) || dim != std::floor(dim)) r.fail("dim must be a positive integer");
    sin.metric.dimension = static_cast<std::size_t>(dim);
    while (r.next(line)) {
      const auto v = numbers_on(line, r);
      if (v.size() != sin.metric.dimension + 2)
        r.fail("expected id, " + std::to_string(sin.metric.dimension) + " coordinates and weight");
      parse_index(v[0], sin.weights.size(), r);
      sin.coords.emplace_back(v.begin() + 1, v.end() - 1);
      sin.weights.push_back(v.back());
    }
  } else if (mode == "matrix") {
    sin.metric.kind = MetricKind::matrix;
    std::vector<std::vector<double>> rows;
    while (r.next(line)) rows.push_back(numbers_on(line, r));
    if (rows.size() < 2) throw Error("matrix space needs n distance rows and a weight line");
    sin.weights = rows.back();
    rows.pop_back();
    sin.matrix = std::move(rows);
  } else {
    r.fail("unknown mode '" + mode + "'");
  }
  sin.truncation_note = r.note;
  return MetricMeasureSpace::build(std::move(sin));
}

MetricMeasureSpace read_space_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open space file '" + path + "'");
  return read_space(f);
}

void write_space(std::ostream& out, const MetricMeasureSpace& space) {
  if (!space.truncation_note().empty()) out << "# truncation: " << space.truncation_note() << '\n';
  const auto bnd = space.boundary();
  std::string boundary;
  for (std::size_t i = 0; i < bnd.size(); ++i)
    boundary += (i ? "," : " boundary=") + std::to_string(bnd[i]);
  const std::size_t n = space.size();
  if (space.has_coordinates()) {
    out << "mode=coords metric="
        << (space.metric().kind == MetricKind::euclidean ? "euclidean" : "chebyshev")
        << " dim=" << space.dimension() << " cap=" << format_double(space.cap_radius()) << boundary
        << '\n';
    for (PointId i = 0; i < n; ++i) {
      out << i;
      for (std::size_t k = 0; k < space.dimension(); ++k)
        out << ' ' << format_double(space.coordinate(i, k));
      out << ' ' << format_double(space.weight(i)) << '\n';
    }
  } else {
    out << "mode=matrix cap=" << format_double(space.cap_radius()) << boundary << '\n';
    for (PointId i = 0; i < n; ++i) {
      for (PointId j = 0; j < n; ++j) out << (j ? " " : "") << format_double(space.distance(i, j));
      out << '\n';
    }
    for (PointId i = 0; i < n; ++i) out << (i ? " " : "") << format_double(space.weight(i));
    out << '\n';
  }
}

void write_space_file(const std::string& path, const MetricMeasureSpace& space) {
  std::ofstream f(path);
  check_stream(f, path);
  write_space(f, space);
  check_stream(f, path);
}

ScalarField read_field(std::istream& in, std::size_t expected_size) {
  LineReader r(in);
  std::string line;
  ScalarField u;
  while (r.next(line)) {
    const auto v = numbers_on(line, r);
    if (v.size() != 2) r.fail("expected '<id> <value>'");
    parse_index(v[0], u.size(), r);
    u.push_back(v[1]);
  }
  if (u.size() != expected_size)
    throw Error("field has " + std::to_string(u.size()) + " values, space has " +
                std::to_string(expected_size) + " points");
  return u;
}

ScalarField read_field_file(const std::string& path, std::size_t expected_size) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open field file '" + path + "'");
  return read_field(f, expected_size);
}

void write_field(std::ostream& out, std::span<const double> u) {
  for (std::size_t i = 0; i < u.size(); ++i) out << i << ' ' << format_double(u[i]) << '\n';
}

void write_field_file(const std::string& path, std::span<const double> u) {
  std::ofstream f(path);
  check_stream(f, path);
  write_field(f, u);
  check_stream(f, path);
}

}  // namespace fracmax
