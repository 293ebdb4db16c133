#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include "cropclust/errors.hpp"
#include "cropclust/synth.hpp"

namespace cropclust {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
  return value;
}

using Setter = std::function<void(FieldSpec&, std::string_view, std::string_view)>;

template <typename T>
Setter field(T FieldSpec::*member) {
  return [member](FieldSpec& spec, std::string_view key, std::string_view text) {
    spec.*member = parse_number<T>(key, text);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"rows", field(&FieldSpec::rows)},
      {"cols", field(&FieldSpec::cols)},
      {"row_spacing", field(&FieldSpec::row_spacing)},
      {"plant_spacing", field(&FieldSpec::plant_spacing)},
      {"position_jitter", field(&FieldSpec::position_jitter)},
      {"points_per_plant", field(&FieldSpec::points_per_plant)},
      {"stem_height", field(&FieldSpec::stem_height)},
      {"leaf_count", field(&FieldSpec::leaf_count)},
      {"leaf_length", field(&FieldSpec::leaf_length)},
      {"leaf_width", field(&FieldSpec::leaf_width)},
      {"stem_fraction", field(&FieldSpec::stem_fraction)},
      {"double_plant_prob", field(&FieldSpec::double_plant_prob)},
      {"ground_point_density", field(&FieldSpec::ground_point_density)},
      {"noise_sigma", field(&FieldSpec::noise_sigma)},
      {"seed", field(&FieldSpec::seed)},
  };
  return table;
}

}  // namespace

void set_field_value(FieldSpec& spec, std::string_view key, std::string_view value) {
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) throw ParseError("unknown field spec key '" + std::string(key) + "'");
  it->second(spec, key, trim(value));
}

FieldSpec parse_field_config(std::istream& in) {
  FieldSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto sep = view.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set_field_value(spec, trim(view.substr(0, sep)), view.substr(sep + 1));
    } catch (const ParseError& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return spec;
}

FieldSpec load_field_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_field_config(in);
}

}  // namespace cropclust
