#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "igeo/manifold.hpp"

namespace igeo {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, int line) {
  s = trim(s);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("line " + std::to_string(line) + ": malformed number '" + std::string(s) + "'", line);
  return v;
}

int parse_index(std::string_view s, int line) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("line " + std::to_string(line) + ": malformed index '" + std::string(s) + "'", line);
  return v;
}

Domain parse_domain(std::string_view s, int line) {
  Domain d;
  std::size_t i = 0;
  for (;;) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    if (s[i] != '[') throw FormatError("line " + std::to_string(line) + ": expected '[' in domain", line);
    auto close = s.find(']', i);
    if (close == std::string_view::npos) throw FormatError("line " + std::to_string(line) + ": missing ']' in domain", line);
    std::string_view body = s.substr(i + 1, close - i - 1);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) throw FormatError("line " + std::to_string(line) + ": expected 'a, b' in domain", line);
    d.axes.push_back({parse_double(body.substr(0, comma), line), parse_double(body.substr(comma + 1), line)});
    i = close + 1;
  }
  return d;
}

struct Entry {
  std::string expr;
  int line;
};

}  // namespace

ManifoldSpec parse_manifold(std::string_view text) {
  std::map<std::string, int> seen;
  std::optional<int> dim;
  int dim_line = 0;
  std::string name = "unnamed";
  std::optional<std::pair<std::string, int>> domain_text;
  std::vector<std::pair<std::vector<int>, Entry>> metric_entries;
  std::vector<std::pair<std::vector<int>, Entry>> cubic_entries;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto hash = raw.find('#');
    std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError("line " + std::to_string(line_no) + ": expected '<key> = <value>'", line_no);
    auto key_tokens = split_ws(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key_tokens.empty()) throw FormatError("line " + std::to_string(line_no) + ": missing key", line_no);

    std::string key;
    for (auto t : key_tokens) key += std::string(t) + " ";
    if (!seen.emplace(key, line_no).second)
      throw FormatError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(trim(key)) + "'", line_no);

    std::string_view head = key_tokens[0];
    if (head == "dim" && key_tokens.size() == 1) {
      dim = parse_index(value, line_no);
      dim_line = line_no;
    } else if (head == "name" && key_tokens.size() == 1) {
      name = std::string(value);
    } else if (head == "domain" && key_tokens.size() == 1) {
      domain_text = std::pair{std::string(value), line_no};
    } else if (head == "g" && key_tokens.size() == 3) {
      std::vector<int> idx{parse_index(key_tokens[1], line_no), parse_index(key_tokens[2], line_no)};
      if (idx[0] > idx[1])
        throw FormatError("line " + std::to_string(line_no) + ": index order: metric entries need i <= j", line_no);
      metric_entries.push_back({idx, {std::string(value), line_no}});
    } else if (head == "Q" && key_tokens.size() == 4) {
      std::vector<int> idx{parse_index(key_tokens[1], line_no), parse_index(key_tokens[2], line_no),
                           parse_index(key_tokens[3], line_no)};
      if (idx[0] > idx[1] || idx[1] > idx[2])
        throw FormatError("line " + std::to_string(line_no) + ": index order: cubic entries need i <= j <= k", line_no);
      cubic_entries.push_back({idx, {std::string(value), line_no}});
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown key '" + std::string(trim(key)) + "'", line_no);
    }
  }

  if (!dim) throw FormatError("missing 'dim' line", line_no);
  if (*dim < 1 || *dim > kMaxDim)
    throw FormatError("line " + std::to_string(dim_line) + ": dim must be in [1, " + std::to_string(kMaxDim) + "]", dim_line);
  if (!domain_text) throw FormatError("missing 'domain' line", line_no);
  Domain domain = parse_domain(domain_text->first, domain_text->second);
  if (domain.dim() != *dim)
    throw FormatError("line " + std::to_string(domain_text->second) + ": domain has " + std::to_string(domain.dim()) +
                          " intervals, expected " + std::to_string(*dim),
                      domain_text->second);
  if (!domain.nondegenerate())
    throw FormatError("line " + std::to_string(domain_text->second) + ": every domain interval needs lo < hi",
                      domain_text->second);

  ManifoldSpec spec(name, domain);
  auto field = [&](const Entry& e) {
    try {
      return parse(e.expr, *dim);
    } catch (const ParseError& err) {
      throw FormatError("line " + std::to_string(e.line) + ": " + err.what(), e.line);
    }
  };
  auto check_range = [&](const std::vector<int>& idx, int line) {
    for (int i : idx)
      if (i < 1 || i > *dim)
        throw FormatError("line " + std::to_string(line) + ": index " + std::to_string(i) + " out of range [1, " +
                              std::to_string(*dim) + "]",
                          line);
  };
  for (const auto& [idx, e] : metric_entries) {
    check_range(idx, e.line);
    spec.set_metric(idx[0] - 1, idx[1] - 1, field(e));
  }
  for (const auto& [idx, e] : cubic_entries) {
    check_range(idx, e.line);
    spec.set_cubic(idx[0] - 1, idx[1] - 1, idx[2] - 1, field(e));
  }
  return spec;
}

ManifoldSpec read_manifold(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifold(ss.str());
}

ManifoldSpec read_manifold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_manifold(in);
}

void write_manifold(const ManifoldSpec& spec, std::ostream& out) {
  if (spec.name().find_first_of("#\n\r") != std::string::npos)
    throw std::invalid_argument("manifold name may not contain '#' or line breaks");
  const int n = spec.dim();
  out << "name = " << spec.name() << '\n';
  out << "dim = " << n << '\n';
  out << "domain =";
  for (const auto& a : spec.domain().axes) out << " [" << fmt17(a.lo) << ", " << fmt17(a.hi) << ']';
  out << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (const auto& f = spec.metric(i, j); f && !f->is_zero())
        out << "g " << i + 1 << ' ' << j + 1 << " = " << print(*f) << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        if (const auto& f = spec.cubic(i, j, k); f && !f->is_zero())
          out << "Q " << i + 1 << ' ' << j + 1 << ' ' << k + 1 << " = " << print(*f) << '\n';
}

std::string to_manifold_text(const ManifoldSpec& spec) {
  std::ostringstream ss;
  write_manifold(spec, ss);
  return ss.str();
}

}  // namespace igeo
