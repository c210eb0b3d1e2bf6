#include "fhyper/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fhyper/error.hpp"

namespace fhyper {

namespace {

std::string format_double(double v, FloatFormat f) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f == FloatFormat::hex ? "%a" : "%.17g", v);
  return buf;
}

double parse_double(const std::string &s, int line) {
  const char *begin = s.c_str();
  char *end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("line " + std::to_string(line) + ": invalid number '" + s + "'", line);
  return v;
}

long long parse_int(const std::string &s, int line) {
  const char *begin = s.c_str();
  char *end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ParseError("line " + std::to_string(line) + ": invalid integer '" + s + "'", line);
  return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(sep, start);
    std::string item = s.substr(start, p == std::string::npos ? std::string::npos : p - start);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t'))
      item.erase(item.begin());
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t' || item.back() == '\r'))
      item.pop_back();
    out.push_back(item);
    if (p == std::string::npos)
      break;
    start = p + 1;
  }
  return out;
}

// Parses "# <magic>, a=1, b=2" into {a: 1, b: 2}.
std::map<std::string, std::string> read_header(std::istream &in, const std::string &magic) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty input, expected '" + magic + "' header", 1);
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  const std::string prefix = "# " + magic;
  if (line.rfind(prefix, 0) != 0)
    throw ParseError("line 1: expected header starting with '" + prefix + "'", 1);
  std::map<std::string, std::string> fields;
  auto parts = split(line.substr(prefix.size()), ',');
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos)
      throw ParseError("line 1: malformed header field '" + parts[i] + "'", 1);
    fields[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  return fields;
}

const std::string &require(const std::map<std::string, std::string> &f, const std::string &key) {
  auto it = f.find(key);
  if (it == f.end())
    throw ParseError("line 1: header lacks '" + key + "'", 1);
  return it->second;
}

template <class Row>
void read_rows(std::istream &in, std::size_t width, Row row) {
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    auto cells = split(line, ',');
    if (cells.size() != width)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                           " fields, found " + std::to_string(cells.size()),
                       line_no);
    row(cells, line_no);
  }
}

// "key=value;key=value" inside provenance parentheses.
std::map<std::string, std::string> provenance_fields(const std::string &p) {
  std::map<std::string, std::string> out;
  const auto open = p.find('(');
  const auto close = p.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError("line 1: malformed provenance '" + p + "'", 1);
  const auto body = p.substr(open + 1, close - open - 1);
  std::string pending_key;
  for (const auto &part : split(body, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      // second coordinate of "shift=a;b"
      if (pending_key.empty())
        throw ParseError("line 1: malformed provenance '" + p + "'", 1);
      out[pending_key + "2"] = part;
      continue;
    }
    pending_key = part.substr(0, eq);
    out[pending_key] = part.substr(eq + 1);
  }
  return out;
}

} // namespace

void write_rule(std::ostream &out, const QuadratureRule &rule, FloatFormat format) {
  out << "# torus-quadrature v1, N=" << rule.size()
      << ", degree=" << (rule.exactness_degree ? *rule.exactness_degree : -1)
      << ", provenance=" << describe(rule.provenance) << '\n';
  for (std::size_t i = 0; i < rule.size(); ++i)
    out << format_double(rule.nodes[i].x1(), format) << ',' << format_double(rule.nodes[i].x2(), format)
        << ',' << format_double(rule.weights[i], format) << '\n';
}

QuadratureRule read_rule(std::istream &in) {
  const auto header = read_header(in, "torus-quadrature v1");
  const auto count = parse_int(require(header, "N"), 1);
  const auto degree = parse_int(require(header, "degree"), 1);
  const auto &prov = require(header, "provenance");
  const auto pf = provenance_fields(prov);

  QuadratureRule rule;
  if (prov.rfind("grid", 0) == 0) {
    rule.measure = MeasureConvention::lebesgue_2pi;
    GridProvenance g{int(parse_int(pf.at("n0"), 1))};
    if (pf.contains("shift")) {
      g.shift1 = parse_double(pf.at("shift"), 1);
      g.shift2 = pf.contains("shift2") ? parse_double(pf.at("shift2"), 1) : 0.0;
    }
    rule.provenance = g;
  } else if (prov.rfind("solved_random", 0) == 0) {
    rule.measure = MeasureConvention::normalized;
    SolvedProvenance s{std::nullopt, int(parse_int(pf.at("n"), 1)), int(parse_int(pf.at("m"), 1))};
    if (pf.at("seed") != "none")
      s.seed = std::uint64_t(std::stoull(pf.at("seed")));
    rule.provenance = s;
  } else {
    throw ParseError("line 1: unknown provenance '" + prov + "'", 1);
  }
  if (degree >= 0)
    rule.exactness_degree = int(degree);
  else
    rule.degenerate = true;

  read_rows(in, 3, [&](const std::vector<std::string> &c, int line) {
    rule.nodes.emplace_back(parse_double(c[0], line), parse_double(c[1], line));
    rule.weights.push_back(parse_double(c[2], line));
  });
  if (rule.size() != std::size_t(count))
    throw ParseError("header N=" + std::to_string(count) + " but found " + std::to_string(rule.size()) + " rows");
  return rule;
}

void write_dataset(std::ostream &out, const Dataset &data, FloatFormat format) {
  out << "# torus-dataset v1, N=" << data.size() << ", noise=" << data.noise.descriptor()
      << ", seed=" << data.noise.seed << '\n';
  for (std::size_t i = 0; i < data.size(); ++i)
    out << format_double(data.points[i].x1(), format) << ',' << format_double(data.points[i].x2(), format)
        << ',' << format_double(data.values[i], format) << '\n';
}

Dataset read_dataset(std::istream &in) {
  const auto header = read_header(in, "torus-dataset v1");
  const auto count = parse_int(require(header, "N"), 1);
  const auto seed = std::uint64_t(std::stoull(require(header, "seed")));
  Dataset d;
  d.noise = NoiseModel::parse(require(header, "noise"), seed);
  read_rows(in, 3, [&](const std::vector<std::string> &c, int line) {
    d.points.emplace_back(parse_double(c[0], line), parse_double(c[1], line));
    d.values.push_back(parse_double(c[2], line));
  });
  if (d.size() != std::size_t(count))
    throw ParseError("header N=" + std::to_string(count) + " but found " + std::to_string(d.size()) + " rows");
  d.sampling = RandomSampling{d.size(), seed};
  return d;
}

void write_estimator(std::ostream &out, const EstimatorFile &est) {
  out << "# torus-estimator v1, n=" << est.degree << ", m=" << est.servers << '\n';
  const auto modes = est.expansion.modes();
  const auto coeffs = est.expansion.coefficients();
  for (std::size_t i = 0; i < modes.size(); ++i)
    out << modes[i].k1 << ',' << modes[i].k2 << ',' << format_double(coeffs[i].real(), FloatFormat::decimal17)
        << ',' << format_double(coeffs[i].imag(), FloatFormat::decimal17) << '\n';
}

EstimatorFile read_estimator(std::istream &in) {
  const auto header = read_header(in, "torus-estimator v1");
  EstimatorFile est;
  est.degree = int(parse_int(require(header, "n"), 1));
  est.servers = int(parse_int(require(header, "m"), 1));
  std::vector<MultiIndex> modes;
  std::vector<std::complex<double>> coeffs;
  read_rows(in, 4, [&](const std::vector<std::string> &c, int line) {
    modes.push_back({int(parse_int(c[0], line)), int(parse_int(c[1], line))});
    coeffs.emplace_back(parse_double(c[2], line), parse_double(c[3], line));
  });
  est.expansion = SpectralExpansion(std::move(modes), std::move(coeffs));
  return est;
}

} // namespace fhyper
