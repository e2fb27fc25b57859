#include "rostop/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "rostop/error.hpp"

namespace rostop {

std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) { return {}; }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) { out.push_back(trim(cell)); }
  if (!line.empty() && line.back() == sep) { out.emplace_back(); }
  return out;
}

// Reads the header and the data rows of a CSV with the expected columns.
std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& columns)
{
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {}
  require(!trim(line).empty(), ErrorKind::io, "CSV input is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) { line.erase(0, 3); }
  const auto header = split(trim(line), ',');
  require(header == columns, ErrorKind::io, "unexpected CSV header '" + trim(line) + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) { continue; }
    auto cells = split(trim(line), ',');
    require(cells.size() == columns.size(), ErrorKind::io,
            "CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) + " fields");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

double parse_real(const std::string& text, const std::string& what)
{
  const std::string s = trim(text);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') { ++first; }
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), ErrorKind::io,
          "cannot parse " + what + " '" + s + "' as a number");
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& what)
{
  const std::string s = trim(text);
  // Accept "1000" as well as "1e3".
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) { return static_cast<std::size_t>(v); }
  const double d = parse_real(s, what);
  require(d >= 0.0 && d == std::floor(d) && d < 1e18, ErrorKind::io, what + " must be a nonnegative integer");
  return static_cast<std::size_t>(d);
}

void write_paths_csv(std::ostream& out, const PathTensor& paths)
{
  out << "path_id,t,dim,value\n";
  for (std::size_t i = 0; i < paths.n_paths(); ++i) {
    for (std::size_t t = 0; t < paths.horizon(); ++t) {
      for (std::size_t k = 0; k < paths.dim(); ++k) {
        out << i + 1 << ',' << t + 1 << ',' << k + 1 << ',' << format_real(paths.at(i, t, k)) << '\n';
      }
    }
  }
}

PathTensor read_paths_csv(std::istream& in)
{
  const auto rows = read_csv(in, {"path_id", "t", "dim", "value"});
  require(!rows.empty(), ErrorKind::io, "path CSV has no rows");
  std::size_t n = 0, horizon = 0, dim = 0;
  std::vector<std::array<std::size_t, 3>> idx(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      idx[r][c] = parse_count(rows[r][c], "index");
      require(idx[r][c] >= 1, ErrorKind::io, "CSV indices are 1-based");
    }
    n = std::max(n, idx[r][0]);
    horizon = std::max(horizon, idx[r][1]);
    dim = std::max(dim, idx[r][2]);
  }
  require(rows.size() == n * horizon * dim, ErrorKind::shape, "path CSV does not cover a full N x T x d grid");
  PathTensor out(n, horizon, dim);
  std::vector<bool> seen(n * horizon * dim, false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = idx[r][0] - 1, t = idx[r][1] - 1, k = idx[r][2] - 1;
    const std::size_t flat = (i * horizon + t) * dim + k;
    require(!seen[flat], ErrorKind::io, "duplicate entry in path CSV");
    seen[flat] = true;
    out.at(i, t, k) = parse_real(rows[r][3], "state");
  }
  return out;
}

void write_rewards_csv(std::ostream& out, const RewardMatrix& rewards)
{
  out << "path_id,t,reward\n";
  for (std::size_t i = 0; i < rewards.n_paths(); ++i) {
    for (std::size_t t = 0; t < rewards.horizon(); ++t) {
      out << i + 1 << ',' << t + 1 << ',' << format_real(rewards.at(i, t)) << '\n';
    }
  }
}

RewardMatrix read_rewards_csv(std::istream& in)
{
  const auto rows = read_csv(in, {"path_id", "t", "reward"});
  require(!rows.empty(), ErrorKind::io, "reward CSV has no rows");
  std::size_t n = 0, horizon = 0;
  for (const auto& row : rows) {
    n = std::max(n, parse_count(row[0], "path_id"));
    horizon = std::max(horizon, parse_count(row[1], "t"));
  }
  require(rows.size() == n * horizon, ErrorKind::shape, "reward CSV does not cover a full N x T grid");
  RewardMatrix out(n, horizon);
  std::vector<bool> seen(n * horizon, false);
  for (const auto& row : rows) {
    const std::size_t i = parse_count(row[0], "path_id"), t = parse_count(row[1], "t");
    require(i >= 1 && t >= 1, ErrorKind::io, "CSV indices are 1-based");
    require(!seen[(i - 1) * horizon + t - 1], ErrorKind::io, "duplicate entry in reward CSV");
    seen[(i - 1) * horizon + t - 1] = true;
    out.at(i - 1, t - 1) = parse_real(row[2], "reward");
  }
  return out;
}

void write_sigma_csv(std::ostream& out, const SigmaPolicy& policy)
{
  out << "path_id,sigma\n";
  for (std::size_t i = 0; i < policy.size(); ++i) { out << i + 1 << ',' << policy.sigma[i] + 1 << '\n'; }
}

SigmaPolicy read_sigma_csv(std::istream& in)
{
  const auto rows = read_csv(in, {"path_id", "sigma"});
  SigmaPolicy p;
  p.sigma.assign(rows.size(), -1);
  for (const auto& row : rows) {
    const std::size_t i = parse_count(row[0], "path_id");
    const std::size_t s = parse_count(row[1], "sigma");
    require(i >= 1 && i <= rows.size(), ErrorKind::io, "sigma CSV path ids must be 1..N");
    require(s >= 1, ErrorKind::io, "sigma values are 1-based");
    require(p.sigma[i - 1] < 0, ErrorKind::io, "duplicate path id in sigma CSV");
    p.sigma[i - 1] = static_cast<int>(s - 1);
  }
  return p;
}

namespace {

constexpr char magic[7] = {'R', 'O', 'S', 'T', 'O', 'P', 'I'};
constexpr std::uint8_t instance_version = 1;

void put_u64(std::ostream& out, std::uint64_t v)
{
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) { b[k] = static_cast<unsigned char>(v >> (8 * k)); }
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in)
{
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  require(in.gcount() == 8, ErrorKind::io, "instance file is truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) { v |= static_cast<std::uint64_t>(b[k]) << (8 * k); }
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_instance(std::ostream& out, const RobustInstance& instance)
{
  out.write(magic, sizeof magic);
  out.put(static_cast<char>(instance_version));
  put_u64(out, instance.n_paths());
  put_u64(out, instance.horizon());
  put_u64(out, instance.state_dim());
  put_f64(out, instance.epsilon());
  for (double v : instance.states().values()) { put_f64(out, v); }
  for (double v : instance.rewards().values()) { put_f64(out, v); }
  require(static_cast<bool>(out), ErrorKind::io, "failed to write instance");
}

RobustInstance read_instance(std::istream& in)
{
  char head[sizeof magic];
  in.read(head, sizeof head);
  require(in.gcount() == sizeof head && std::memcmp(head, magic, sizeof magic) == 0, ErrorKind::io,
          "not an instance file");
  const int version = in.get();
  require(version == instance_version, ErrorKind::io, "unsupported instance file version " + std::to_string(version));
  const std::uint64_t n = get_u64(in), horizon = get_u64(in), dim = get_u64(in);
  require(n >= 1 && horizon >= 1 && dim >= 1 && n * horizon * dim < (1ULL << 32), ErrorKind::io,
          "instance file has implausible dimensions");
  const double eps = get_f64(in);
  PathTensor states(n, horizon, dim);
  for (auto& v : states.values()) { v = get_f64(in); }
  std::vector<double> g(n * horizon);
  for (auto& v : g) { v = get_f64(in); }
  return build_instance(std::move(states), RewardMatrix(n, horizon, std::move(g)), eps);
}

std::map<std::string, std::string> parse_key_values(std::istream& in)
{
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::configuration,
            "config line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorKind::configuration, "config line " + std::to_string(lineno) + " has an empty key");
    require(out.emplace(key, value).second, ErrorKind::configuration, "config key '" + key + "' given twice");
  }
  return out;
}

std::ifstream open_input(const std::string& path, bool binary)
{
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  require(in.is_open(), ErrorKind::io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path, bool binary)
{
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  require(out.is_open(), ErrorKind::io, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace rostop
