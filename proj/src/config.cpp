#include "fhyper/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fhyper/error.hpp"

namespace fhyper {

namespace {

std::string_view trim(std::string_view s, std::size_t *lead = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r'))
    ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  if (lead)
    *lead = b;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string &msg, int line, int column) {
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg,
                   line, column);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::size_t lead = 0;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos)
      line = line.substr(0, c);
    line = trim(line, &lead);
    if (line.empty())
      continue;
    const int col0 = int(lead) + 1;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail("unterminated section header", line_no, col0 + int(line.size()));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        fail("empty section name", line_no, col0 + 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail("expected 'key = value'", line_no, col0);
    const auto key = trim(line.substr(0, eq));
    if (key.empty())
      fail("missing key", line_no, col0);
    std::size_t vlead = 0;
    const auto value = trim(line.substr(eq + 1), &vlead);
    const int vcol = col0 + int(eq) + 1 + int(vlead);
    if (section.empty())
      fail("key outside of any section", line_no, col0);
    auto [it, inserted] = cfg.entries_.try_emplace({section, std::string(key)},
                                                   Entry{std::string(value), line_no, vcol});
    if (!inserted)
      fail("duplicate key '" + std::string(key) + "'", line_no, col0);
  }
  return cfg;
}

const KeyValueConfig::Entry *KeyValueConfig::find(const std::string &section, const std::string &key) const {
  auto it = entries_.find({section, key});
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

template <class T>
T parse_number(const KeyValueConfig::Entry &e, std::string_view item, int offset) {
  T v{};
  const auto *first = item.data();
  const auto *last = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || item.empty())
    fail("invalid number '" + std::string(item) + "'", e.line, e.column + offset);
  return v;
}

template <class T>
std::vector<T> parse_list(const KeyValueConfig::Entry &e) {
  std::vector<T> out;
  std::string_view s = e.value;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos)
      comma = s.size();
    std::size_t lead = 0;
    const auto item = trim(s.substr(start, comma - start), &lead);
    out.push_back(parse_number<T>(e, item, int(start + lead)));
    start = comma + 1;
  }
  return out;
}

} // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  const auto kv = KeyValueConfig::parse(text);
  static const std::set<std::pair<std::string, std::string>> known = {
      {"target", "kind"},      {"target", "center"},     {"target", "k"},
      {"sweep", "degrees"},    {"sweep", "noise"},       {"sweep", "noise_kind"},
      {"sweep", "servers"},    {"sweep", "sampling"},    {"sweep", "samples_per_server"},
      {"sweep", "eval_grid"},  {"sweep", "trials"},      {"sweep", "seed"},
      {"output", "path"}};
  for (const auto &[key, entry] : kv.entries())
    if (!known.contains(key))
      fail("unknown key '" + key.first + "." + key.second + "'", entry.line, 1);

  ExperimentConfig cfg;
  const std::string kind = kv.find("target", "kind") ? kv.find("target", "kind")->value : "wendland";
  if (kind == "wendland") {
    TorusPoint center;
    if (const auto *c = kv.find("target", "center")) {
      const auto xy = parse_list<double>(*c);
      if (xy.size() != 2)
        fail("center needs two coordinates", c->line, c->column);
      center = {xy[0], xy[1]};
    }
    cfg.target = TargetFunction::wendland_wu(center);
  } else if (kind == "mode") {
    const auto *k = kv.find("target", "k");
    if (!k)
      throw ParseError("target kind 'mode' requires key k");
    const auto kk = parse_list<int>(*k);
    if (kk.size() != 2)
      fail("k needs two integers", k->line, k->column);
    cfg.target = TargetFunction::mode({kk[0], kk[1]});
  } else {
    const auto *e = kv.find("target", "kind");
    fail("unknown target kind '" + kind + "'", e->line, e->column);
  }

  if (const auto *e = kv.find("sweep", "degrees"))
    cfg.degrees = parse_list<int>(*e);
  else
    throw ParseError("missing required key sweep.degrees");
  if (const auto *e = kv.find("sweep", "noise"))
    cfg.noise_levels = parse_list<double>(*e);
  if (const auto *e = kv.find("sweep", "noise_kind")) {
    if (e->value == "gaussian")
      cfg.noise_kind = NoiseModel::Kind::gaussian;
    else if (e->value == "uniform")
      cfg.noise_kind = NoiseModel::Kind::bounded_uniform;
    else
      fail("noise_kind must be gaussian or uniform", e->line, e->column);
  }
  if (const auto *e = kv.find("sweep", "servers"))
    cfg.servers = parse_number<int>(*e, e->value, 0);
  if (const auto *e = kv.find("sweep", "sampling")) {
    if (e->value == "grid")
      cfg.sampling = SamplingKind::grid;
    else if (e->value == "random")
      cfg.sampling = SamplingKind::random;
    else
      fail("sampling must be grid or random", e->line, e->column);
  }
  if (const auto *e = kv.find("sweep", "samples_per_server"))
    cfg.samples_per_server = parse_number<std::size_t>(*e, e->value, 0);
  if (const auto *e = kv.find("sweep", "eval_grid"))
    cfg.eval_resolution = parse_number<int>(*e, e->value, 0);
  if (const auto *e = kv.find("sweep", "trials"))
    cfg.trials = parse_number<int>(*e, e->value, 0);
  if (const auto *e = kv.find("sweep", "seed"))
    cfg.seed = parse_number<std::uint64_t>(*e, e->value, 0);
  if (const auto *e = kv.find("output", "path"))
    cfg.output_path = e->value;
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

} // namespace fhyper
