#include "io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sigkit::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error(ErrorKind::Parse, "truncated binary header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::vector<Letter> parse_letters(const std::string& text, std::uint32_t d) {
  if (text == "e") return {};
  std::vector<Letter> out;
  for (const auto& part : split(text, '.')) {
    unsigned long v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error(ErrorKind::Parse, "bad word \"" + text + "\"");
    }
    if (v < 1 || v > d) {
      throw Error(ErrorKind::InvalidLetter,
                  "word \"" + text + "\" has letter " + std::to_string(v) + " outside 1.." + std::to_string(d));
    }
    out.push_back(static_cast<Letter>(v - 1));
  }
  return out;
}

}  // namespace

PathBatch read_csv_paths(std::istream& in, bool path_id_column) {
  std::vector<std::vector<double>> paths;  // flattened samples per path
  std::vector<std::size_t> counts;
  std::size_t channels = 0;
  std::string line;
  std::size_t line_no = 0;
  bool new_path = true;
  std::string current_id;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) {
      new_path = true;
      continue;
    }
    if (t[0] == '#') continue;
    auto cells = split(t, ',');
    if (first_content) {
      first_content = false;
      double probe = 0;
      if (!parse_double(cells.back(), probe)) continue;  // header
    }
    std::string id;
    if (path_id_column) {
      if (cells.size() < 2) throw parse_error(line_no, "expected a path id and at least one channel");
      id = cells.front();
      cells.erase(cells.begin());
      if (paths.empty() || id != current_id) new_path = true;
      current_id = id;
    }
    if (channels == 0) channels = cells.size();
    if (cells.size() != channels) {
      throw Error(ErrorKind::Shape, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(channels) + " channels, found " +
                                        std::to_string(cells.size()));
    }
    if (new_path) {
      paths.emplace_back();
      counts.push_back(0);
      new_path = false;
    }
    for (const auto& c : cells) {
      double v = 0;
      if (!parse_double(c, v)) throw parse_error(line_no, "could not parse \"" + c + "\" as a number");
      paths.back().push_back(v);
    }
    ++counts.back();
  }
  if (paths.empty()) throw Error(ErrorKind::Parse, "input contains no samples");
  for (std::size_t b = 1; b < paths.size(); ++b) {
    if (counts[b] != counts[0]) {
      throw Error(ErrorKind::Shape, "path " + std::to_string(b + 1) + " has " + std::to_string(counts[b]) +
                                        " samples, path 1 has " + std::to_string(counts[0]));
    }
  }
  std::vector<double> flat;
  flat.reserve(paths.size() * counts[0] * channels);
  for (const auto& p : paths) flat.insert(flat.end(), p.begin(), p.end());
  return PathBatch(paths.size(), counts[0], channels, std::move(flat));
}

PathBatch read_binary_paths(std::istream& in) {
  const std::uint32_t magic = read_u32(in);
  if (magic != kBinaryMagic) throw Error(ErrorKind::Parse, "binary input has wrong magic number");
  const std::uint32_t batch = read_u32(in);
  const std::uint32_t points = read_u32(in);
  const std::uint32_t channels = read_u32(in);
  const std::size_t n = static_cast<std::size_t>(batch) * points * channels;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) {
      throw Error(ErrorKind::Parse, "binary input ends after " + std::to_string(i) + " of " +
                                        std::to_string(n) + " values");
    }
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) bits = (bits << 8) | b[k];
    std::memcpy(&values[i], &bits, 8);
  }
  return PathBatch(batch, points, channels, std::move(values));
}

void write_binary_paths(std::ostream& out, const PathBatch& paths) {
  write_u32(out, kBinaryMagic);
  write_u32(out, static_cast<std::uint32_t>(paths.batch()));
  write_u32(out, static_cast<std::uint32_t>(paths.points()));
  write_u32(out, static_cast<std::uint32_t>(paths.channels()));
  for (double v : paths.values()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

PathBatch read_paths_file(const std::string& path, bool path_id_column) {
  const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::Parse, "cannot open input file " + path);
  return binary ? read_binary_paths(in) : read_csv_paths(in, path_id_column);
}

WordSetDescriptor parse_descriptor(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("word-set descriptor: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("type")) throw Error(ErrorKind::Parse, "word-set descriptor needs a \"type\"");
    static const std::map<std::string, WordSetDescriptor::Type> types{
        {"truncated", WordSetDescriptor::Type::Truncated},
        {"anisotropic", WordSetDescriptor::Type::Anisotropic},
        {"graph", WordSetDescriptor::Type::Graph},
        {"lyndon", WordSetDescriptor::Type::Lyndon},
        {"leadlag_sparse", WordSetDescriptor::Type::LeadLagSparse},
        {"custom", WordSetDescriptor::Type::Custom}};
    const auto it = types.find(j.at("type").get<std::string>());
    if (it == types.end()) throw Error(ErrorKind::Parse, "unknown word-set type " + j.at("type").dump());
    WordSetDescriptor desc;
    desc.type = it->second;
    if (j.contains("d")) desc.d = j.at("d").get<std::uint32_t>();
    if (j.contains("depth")) desc.depth = j.at("depth").get<std::uint32_t>();
    if (j.contains("gamma")) desc.gamma = j.at("gamma").get<std::vector<double>>();
    if (j.contains("r")) desc.cutoff = j.at("r").get<double>();
    if (j.contains("include_empty")) desc.include_empty = j.at("include_empty").get<bool>();
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        const auto pair = e.get<std::vector<std::uint32_t>>();
        if (pair.size() != 2 || pair[0] < 1 || pair[1] < 1) {
          throw Error(ErrorKind::Parse, "edge " + e.dump() + " must be a pair of 1-based letters");
        }
        desc.edges.emplace_back(pair[0] - 1, pair[1] - 1);
      }
    }
    if (j.contains("words")) {
      for (const auto& w : j.at("words")) desc.words.push_back(parse_letters(w.get<std::string>(), desc.d));
    }
    if (desc.type == WordSetDescriptor::Type::Anisotropic && desc.d == 0) {
      desc.d = static_cast<std::uint32_t>(desc.gamma.size());
    }
    return desc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("word-set descriptor: ") + e.what());
  }
}

WordSetDescriptor read_descriptor(const std::string& text_or_path) {
  if (!text_or_path.empty() && text_or_path.front() == '{') return parse_descriptor(text_or_path);
  std::ifstream in(text_or_path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open word-set file " + text_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_descriptor(ss.str());
}

std::vector<std::pair<std::size_t, std::size_t>> read_windows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open windows file " + path);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t, ',');
    long long l = 0, r = 0;
    auto parse_int = [&](const std::string& s, long long& v) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
    };
    if (cells.size() != 2 || !parse_int(cells[0], l) || !parse_int(cells[1], r)) {
      if (out.empty() && line_no == 1) continue;  // header
      throw parse_error(line_no, "expected a window \"l,r\"");
    }
    if (l < 0 || r < 0) {
      throw Error(ErrorKind::Window, "line " + std::to_string(line_no) + ": negative window index");
    }
    out.emplace_back(static_cast<std::size_t>(l), static_cast<std::size_t>(r));
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& out, const std::vector<std::string>& prefix,
                  const std::vector<std::string>& columns) {
  bool first = true;
  for (const auto& p : prefix) {
    out << (first ? "" : ",") << p;
    first = false;
  }
  for (const auto& c : columns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
}

void write_row(std::ostream& out, const std::vector<std::string>& prefix, std::span<const double> values) {
  bool first = true;
  for (const auto& p : prefix) {
    out << (first ? "" : ",") << p;
    first = false;
  }
  for (double v : values) {
    out << (first ? "" : ",") << format_number(v);
    first = false;
  }
  out << '\n';
}

}  // namespace sigkit::cli
