#include "cropclust/ply.hpp"

#include <fmt/format.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cropclust/errors.hpp"
#include "cropclust/palette.hpp"

namespace cropclust {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

enum class ScalarType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<ScalarType> parse_scalar_type(std::string_view name) {
  static const std::map<std::string_view, ScalarType> kTypes = {
      {"char", ScalarType::kInt8},     {"int8", ScalarType::kInt8},
      {"uchar", ScalarType::kUint8},   {"uint8", ScalarType::kUint8},
      {"short", ScalarType::kInt16},   {"int16", ScalarType::kInt16},
      {"ushort", ScalarType::kUint16}, {"uint16", ScalarType::kUint16},
      {"int", ScalarType::kInt32},     {"int32", ScalarType::kInt32},
      {"uint", ScalarType::kUint32},   {"uint32", ScalarType::kUint32},
      {"float", ScalarType::kFloat32}, {"float32", ScalarType::kFloat32},
      {"double", ScalarType::kFloat64}, {"float64", ScalarType::kFloat64},
  };
  auto it = kTypes.find(name);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUint8:
      return 1;
    case ScalarType::kInt16:
    case ScalarType::kUint16:
      return 2;
    case ScalarType::kInt32:
    case ScalarType::kUint32:
    case ScalarType::kFloat32:
      return 4;
    case ScalarType::kFloat64:
      return 8;
  }
  return 0;
}

bool is_integral(ScalarType t) {
  return t != ScalarType::kFloat32 && t != ScalarType::kFloat64;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::kFloat32;
  bool is_list = false;
  ScalarType count_type = ScalarType::kUint8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyFormat format = PlyFormat::kAscii;
  std::vector<Element> elements;
};

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

[[noreturn]] void header_error(std::size_t line_no, const std::string& what) {
  throw ParseError(fmt::format("PLY header line {}: {}", line_no, what));
}

Header parse_header(std::istream& in) {
  Header header;
  std::string line;
  std::size_t line_no = 0;
  bool have_format = false;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != "ply") header_error(1, "missing 'ply' magic");

  while (true) {
    if (!next_line()) header_error(line_no + 1, "missing 'end_header'");
    auto words = split_words(line);
    if (words.empty()) continue;
    const std::string_view keyword = words[0];

    if (keyword == "end_header") break;
    if (keyword == "comment" || keyword == "obj_info") continue;

    if (keyword == "format") {
      if (words.size() != 3) header_error(line_no, "malformed format line '" + line + "'");
      if (words[1] == "ascii") {
        header.format = PlyFormat::kAscii;
      } else if (words[1] == "binary_little_endian") {
        header.format = PlyFormat::kBinaryLittleEndian;
      } else {
        header_error(line_no, "unsupported format '" + std::string(words[1]) + "'");
      }
      have_format = true;
    } else if (keyword == "element") {
      if (words.size() != 3) header_error(line_no, "malformed element line '" + line + "'");
      Element element;
      element.name = std::string(words[1]);
      auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(),
                                       element.count);
      if (ec != std::errc() || ptr != words[2].data() + words[2].size()) {
        header_error(line_no, "invalid element count '" + std::string(words[2]) + "'");
      }
      header.elements.push_back(std::move(element));
    } else if (keyword == "property") {
      if (header.elements.empty()) header_error(line_no, "property before any element");
      Property prop;
      if (words.size() == 5 && words[1] == "list") {
        auto count_type = parse_scalar_type(words[2]);
        auto item_type = parse_scalar_type(words[3]);
        if (!count_type || !item_type || !is_integral(*count_type)) {
          header_error(line_no, "invalid list property '" + line + "'");
        }
        prop.is_list = true;
        prop.count_type = *count_type;
        prop.type = *item_type;
        prop.name = std::string(words[4]);
      } else if (words.size() == 3) {
        auto type = parse_scalar_type(words[1]);
        if (!type) header_error(line_no, "unknown property type '" + std::string(words[1]) + "'");
        prop.type = *type;
        prop.name = std::string(words[2]);
      } else {
        header_error(line_no, "malformed property line '" + line + "'");
      }
      header.elements.back().properties.push_back(std::move(prop));
    } else {
      header_error(line_no, "unrecognized keyword '" + std::string(keyword) + "'");
    }
  }
  if (!have_format) header_error(line_no, "missing format line");
  return header;
}

// Sequential reader over the body bytes; one implementation per encoding.
class AsciiBody {
 public:
  explicit AsciiBody(std::string text) : text_(std::move(text)) {}

  bool exhausted() {
    skip_space();
    return pos_ >= text_.size();
  }

  double read(ScalarType, const char* element, std::size_t index) {
    skip_space();
    if (pos_ >= text_.size()) {
      throw TruncationError(fmt::format("PLY body ends inside {} {}", element, index));
    }
    std::size_t end = pos_;
    while (end < text_.size() && !is_space(text_[end])) ++end;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      value = std::strtod(std::string(first, last).c_str(), nullptr);
    } else if (ec != std::errc() || ptr != last) {
      // from_chars rejects "inf"/"nan" spellings some writers emit; strtod
      // accepts them so the finiteness check reports them properly.
      std::string token(first, last);
      char* stop = nullptr;
      value = std::strtod(token.c_str(), &stop);
      if (stop != token.c_str() + token.size()) {
        throw ParseError(fmt::format("invalid value '{}' in {} {}", token, element, index));
      }
    }
    pos_ = end;
    return value;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

class BinaryBody {
 public:
  explicit BinaryBody(std::string bytes) : bytes_(std::move(bytes)) {}

  bool exhausted() const { return pos_ >= bytes_.size(); }

  double read(ScalarType type, const char* element, std::size_t index) {
    const std::size_t size = scalar_size(type);
    if (pos_ + size > bytes_.size()) {
      throw TruncationError(fmt::format("PLY body ends inside {} {}", element, index));
    }
    const char* p = bytes_.data() + pos_;
    pos_ += size;
    switch (type) {
      case ScalarType::kInt8: return load<std::int8_t>(p);
      case ScalarType::kUint8: return load<std::uint8_t>(p);
      case ScalarType::kInt16: return load<std::int16_t>(p);
      case ScalarType::kUint16: return load<std::uint16_t>(p);
      case ScalarType::kInt32: return load<std::int32_t>(p);
      case ScalarType::kUint32: return load<std::uint32_t>(p);
      case ScalarType::kFloat32: return load<float>(p);
      case ScalarType::kFloat64: return load<double>(p);
    }
    return 0.0;
  }

 private:
  template <typename T>
  static double load(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return static_cast<double>(v);
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t to_label(double v, std::size_t index) {
  if (!(v >= 0.0) || v >= 4294967296.0 || v != std::floor(v)) {
    throw DataError(fmt::format("invalid label {} at point {}", v, index));
  }
  return static_cast<std::uint32_t>(v);
}

std::uint8_t to_channel(double v, std::size_t index) {
  if (!(v >= 0.0) || v > 255.0 || v != std::floor(v)) {
    throw DataError(fmt::format("invalid color channel {} at point {}", v, index));
  }
  return static_cast<std::uint8_t>(v);
}

template <typename Body>
PointCloud read_body(const Header& header, Body& body, const PlyReadOptions& options) {
  PointCloud cloud;
  bool seen_vertex = false;

  for (const Element& element : header.elements) {
    const bool is_vertex = element.name == "vertex" && !seen_vertex;
    if (!is_vertex) {
      for (std::size_t i = 0; i < element.count; ++i) {
        for (const Property& prop : element.properties) {
          if (prop.is_list) {
            const double n = body.read(prop.count_type, element.name.c_str(), i);
            if (!(n >= 0.0)) throw ParseError(fmt::format("negative list length in {} {}", element.name, i));
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
              body.read(prop.type, element.name.c_str(), i);
            }
          } else {
            body.read(prop.type, element.name.c_str(), i);
          }
        }
      }
      continue;
    }
    seen_vertex = true;

    // Role of each vertex property by position.
    enum Role { kSkip, kX, kY, kZ, kRed, kGreen, kBlue, kLabel };
    std::vector<Role> roles;
    bool has[8] = {};
    for (const Property& prop : element.properties) {
      Role role = kSkip;
      if (!prop.is_list) {
        if (prop.name == "x") role = kX;
        else if (prop.name == "y") role = kY;
        else if (prop.name == "z") role = kZ;
        else if (prop.name == "red") role = kRed;
        else if (prop.name == "green") role = kGreen;
        else if (prop.name == "blue") role = kBlue;
        else if (prop.name == "label") role = kLabel;
      }
      if (role != kSkip && has[role]) role = kSkip;
      has[role] = true;
      roles.push_back(role);
    }
    if (!has[kX] || !has[kY] || !has[kZ]) {
      throw ParseError("PLY vertex element lacks x, y and z properties");
    }
    const bool use_label = has[kLabel];
    const bool use_color = !use_label && has[kRed] && has[kGreen] && has[kBlue];

    cloud.points.resize(element.count);
    Labeling labels;
    if (use_label || use_color) labels.resize(element.count);
    std::map<std::uint32_t, std::uint32_t> distinct;

    for (std::size_t i = 0; i < element.count; ++i) {
      double xyz[3] = {0.0, 0.0, 0.0};
      Rgb rgb = {0, 0, 0};
      std::uint32_t label = 0;
      for (std::size_t p = 0; p < element.properties.size(); ++p) {
        const Property& prop = element.properties[p];
        if (prop.is_list) {
          const double n = body.read(prop.count_type, "vertex", i);
          if (!(n >= 0.0)) throw ParseError(fmt::format("negative list length in vertex {}", i));
          for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) body.read(prop.type, "vertex", i);
          continue;
        }
        const double v = body.read(prop.type, "vertex", i);
        switch (roles[p]) {
          case kX: xyz[0] = v; break;
          case kY: xyz[1] = v; break;
          case kZ: xyz[2] = v; break;
          case kRed: if (use_color) rgb[0] = to_channel(v, i); break;
          case kGreen: if (use_color) rgb[1] = to_channel(v, i); break;
          case kBlue: if (use_color) rgb[2] = to_channel(v, i); break;
          case kLabel: label = to_label(v, i); break;
          case kSkip: break;
        }
      }
      Point3 pt{static_cast<float>(xyz[0]), static_cast<float>(xyz[1]),
                static_cast<float>(xyz[2])};
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !std::isfinite(pt.z)) {
        throw DataError(fmt::format("non-finite coordinate at point {}", i));
      }
      cloud.points[i] = pt;
      if (use_label) {
        labels[i] = label;
      } else if (use_color) {
        if (options.color_labels == ColorLabels::kPalette) {
          labels[i] = color_to_label(rgb);
        } else {
          const std::uint32_t key = (std::uint32_t{rgb[0]} << 16) |
                                    (std::uint32_t{rgb[1]} << 8) | rgb[2];
          if (key == 0) {
            labels[i] = 0;
          } else {
            auto [it, inserted] = distinct.try_emplace(
                key, static_cast<std::uint32_t>(distinct.size() + 1));
            labels[i] = it->second;
          }
        }
      }
    }
    if (use_label || use_color) cloud.labels = std::move(labels);
  }

  if (!seen_vertex) throw ParseError("PLY file has no vertex element");
  return cloud;
}

}  // namespace

PointCloud read_ply(std::istream& in, const PlyReadOptions& options) {
  const Header header = parse_header(in);
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (header.format == PlyFormat::kAscii) {
    AsciiBody body(std::move(rest));
    return read_body(header, body, options);
  }
  BinaryBody body(std::move(rest));
  return read_body(header, body, options);
}

PointCloud load_ply(const std::filesystem::path& path, const PlyReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_ply(in, options);
}

void write_ply(std::ostream& out, const PointCloud& cloud, const Labeling& labeling,
               PlyFormat format) {
  if (labeling.size() != cloud.size()) {
    throw ContractError(fmt::format("labeling has {} entries for {} points",
                                    labeling.size(), cloud.size()));
  }
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "ply\nformat {} 1.0\nelement vertex {}\n"
                 "property float x\nproperty float y\nproperty float z\n"
                 "property uchar red\nproperty uchar green\nproperty uchar blue\n"
                 "end_header\n",
                 format == PlyFormat::kAscii ? "ascii" : "binary_little_endian",
                 cloud.size());

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.points[i];
    const Rgb rgb = label_to_color(labeling[i]);
    if (format == PlyFormat::kAscii) {
      fmt::format_to(std::back_inserter(buf), "{:.9g} {:.9g} {:.9g} {} {} {}\n",
                     p.x, p.y, p.z, rgb[0], rgb[1], rgb[2]);
    } else {
      char record[15];
      std::memcpy(record, &p.x, 4);
      std::memcpy(record + 4, &p.y, 4);
      std::memcpy(record + 8, &p.z, 4);
      std::memcpy(record + 12, rgb.data(), 3);
      buf.append(record, record + sizeof(record));
    }
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing PLY data");
}

void save_ply(const PointCloud& cloud, const Labeling& labeling,
              const std::filesystem::path& path, PlyFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_ply(out, cloud, labeling, format);
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace cropclust
