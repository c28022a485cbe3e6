#include "smr/attrio.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "smr/error.hpp"
#include "smr/matrix.hpp"

namespace smr {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'M', 'R', 'A'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T take(std::istream& in, const char* what) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw FormatError(std::string("attribute stream truncated in ") + what);
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse(std::string_view s, std::size_t line_no) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError("bad attribute field '" + std::string(s) + "' on line " + std::to_string(line_no));
  }
  return v;
}

int checked_label(int label, std::size_t where) {
  if (label < 0 || label > 3) throw FormatError("label out of range 0..3 at record " + std::to_string(where));
  return label;
}

}  // namespace

void write_attributes_csv(const std::vector<AttributeRecord>& records, std::ostream& out) {
  const bool labelled = !records.empty() && records.front().label.has_value();
  out << "query,rank,a1,a2,a3,a4" << (labelled ? ",label" : "") << '\n';
  for (const auto& r : records) {
    if (r.label.has_value() != labelled) throw DataError("attribute records mix labelled and unlabelled rows");
    out << r.attrs.query << ',' << r.attrs.rank;
    for (double v : r.attrs.values()) out << ',' << format_double(v);
    if (labelled) out << ',' << *r.label;
    out << '\n';
  }
}

std::vector<AttributeRecord> read_attributes_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty attribute file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool labelled = false;
  if (line == "query,rank,a1,a2,a3,a4,label") {
    labelled = true;
  } else if (line != "query,rank,a1,a2,a3,a4") {
    throw FormatError("unexpected attribute header '" + line + "'");
  }
  std::vector<AttributeRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != (labelled ? 7u : 6u)) throw FormatError("wrong field count on line " + std::to_string(line_no));
    AttributeRecord r;
    r.attrs.query = parse<std::size_t>(f[0], line_no);
    r.attrs.rank = parse<std::size_t>(f[1], line_no);
    r.attrs.a1 = parse<double>(f[2], line_no);
    r.attrs.a2 = parse<double>(f[3], line_no);
    r.attrs.a3 = parse<double>(f[4], line_no);
    r.attrs.a4 = parse<double>(f[5], line_no);
    if (labelled) r.label = checked_label(parse<int>(f[6], line_no), line_no);
    out.push_back(r);
  }
  return out;
}

void write_attributes_binary(const std::vector<AttributeRecord>& records, std::ostream& out) {
  const bool labelled = !records.empty() && records.front().label.has_value();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(records.size()));
  put<std::uint8_t>(out, labelled ? 1 : 0);
  for (const auto& r : records) {
    if (r.label.has_value() != labelled) throw DataError("attribute records mix labelled and unlabelled rows");
    put<std::uint32_t>(out, static_cast<std::uint32_t>(r.attrs.query));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(r.attrs.rank));
    for (double v : r.attrs.values()) put<double>(out, v);
    if (labelled) put<std::int8_t>(out, static_cast<std::int8_t>(*r.label));
  }
}

std::vector<AttributeRecord> read_attributes_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("bad attribute magic");
  const auto version = take<std::uint16_t>(in, "header");
  if (version != kVersion) throw FormatError("unsupported attribute version " + std::to_string(version));
  const auto count = take<std::uint32_t>(in, "header");
  const auto labelled = take<std::uint8_t>(in, "header");
  if (labelled > 1) throw FormatError("bad label flag");
  std::vector<AttributeRecord> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    AttributeRecord r;
    r.attrs.query = take<std::uint32_t>(in, "record");
    r.attrs.rank = take<std::uint32_t>(in, "record");
    r.attrs.a1 = take<double>(in, "record");
    r.attrs.a2 = take<double>(in, "record");
    r.attrs.a3 = take<double>(in, "record");
    r.attrs.a4 = take<double>(in, "record");
    if (labelled) r.label = checked_label(take<std::int8_t>(in, "record"), k);
    out.push_back(r);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after attribute records");
  return out;
}

void save_attributes(const std::vector<AttributeRecord>& records, const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ofstream out(path, csv ? std::ios::out : std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (csv) {
    write_attributes_csv(records, out);
  } else {
    write_attributes_binary(records, out);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<AttributeRecord> load_attributes(const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ifstream in(path, csv ? std::ios::in : std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return csv ? read_attributes_csv(in) : read_attributes_binary(in);
}

}  // namespace smr
