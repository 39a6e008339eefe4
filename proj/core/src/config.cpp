#include "harmwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "harmwave/errors.hpp"

namespace harmwave {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw ConfigError("bad number for " + key + ": '" + value + "'");
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  return out.str();
}

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

MediumKind parse_medium(const std::string& text) {
  if (text == "trig") return MediumKind::trigonometric;
  if (text == "channel") return MediumKind::channel;
  if (text == "percolation") return MediumKind::percolation;
  if (text == "constant") return MediumKind::constant;
  if (text == "layered") return MediumKind::layered;
  throw ConfigError("unknown medium '" + text + "'");
}

SourceKind parse_source(const std::string& text) {
  if (text == "one") return SourceKind::constant_one;
  if (text == "sine") return SourceKind::traveling_sine;
  if (text == "gauss") return SourceKind::gaussian;
  if (text == "modulated") return SourceKind::modulated_gaussian;
  if (text == "zero") return SourceKind::zero;
  throw ConfigError("unknown source '" + text + "'");
}

BasisKind parse_basis(const std::string& text) {
  if (text == "lfem") return BasisKind::lfem;
  if (text == "lin") return BasisKind::p1_composed;
  if (text == "spline") return BasisKind::spline_composed;
  throw ConfigError("unknown basis '" + text + "'");
}

Boundary parse_boundary(const std::string& text) {
  if (text == "dirichlet") return Boundary::dirichlet;
  if (text == "neumann") return Boundary::neumann;
  throw ConfigError("unknown boundary condition '" + text + "'");
}

void ExperimentConfig::validate() const {
  if (coarse_level < 1) throw ConfigError("coarse_level must be >= 1");
  if (fine_level <= coarse_level) throw ConfigError("fine_level must exceed coarse_level");
  if (fine_level > kMaxMeshLevel) throw CapacityError("fine_level exceeds mesh capacity");
  if (steps < 1 || ref_steps < 1) throw ConfigError("steps and ref_steps must be >= 1");
  if (!(final_time > 0.0)) throw ConfigError("T must be positive");
  if (!(solver_tol > 0.0) || !(harmonic_tol > 0.0)) throw ConfigError("tolerances must be positive");
  // The constructors check the medium parameters.
  (void)make_medium();
}

Medium ExperimentConfig::make_medium() const {
  switch (medium) {
    case MediumKind::constant: return Medium::constant(constant_a);
    case MediumKind::trigonometric: return Medium::trigonometric();
    case MediumKind::channel: return Medium::channel(channel_a);
    case MediumKind::percolation: return Medium::percolation(perc_seed, perc_gamma);
    case MediumKind::layered: return Medium::layered(layer_breaks, layer_values);
  }
  throw ConfigError("unknown medium");
}

SourceTerm ExperimentConfig::make_source() const {
  switch (source) {
    case SourceKind::zero: return SourceTerm::zero();
    case SourceKind::constant_one: return SourceTerm::constant_one();
    case SourceKind::traveling_sine: return SourceTerm::traveling_sine();
    case SourceKind::gaussian: return SourceTerm::gaussian();
    case SourceKind::modulated_gaussian: return SourceTerm::modulated_gaussian();
  }
  throw ConfigError("unknown source");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "medium") medium = parse_medium(value);
  else if (key == "const_a") constant_a = to_double(key, value);
  else if (key == "channel_A") channel_a = to_double(key, value);
  else if (key == "perc_seed" || key == "seed") perc_seed = to_int<std::uint64_t>(key, value);
  else if (key == "perc_gamma") perc_gamma = to_double(key, value);
  else if (key == "layer_breaks") layer_breaks = to_list(key, value);
  else if (key == "layer_values") layer_values = to_list(key, value);
  else if (key == "source") source = parse_source(value);
  else if (key == "basis") basis = parse_basis(value);
  else if (key == "coarse_level") coarse_level = to_int<int>(key, value);
  else if (key == "fine_level") fine_level = to_int<int>(key, value);
  else if (key == "bc") bc = parse_boundary(value);
  else if (key == "T") final_time = to_double(key, value);
  else if (key == "steps") steps = to_int<int>(key, value);
  else if (key == "ref_steps") ref_steps = to_int<int>(key, value);
  else if (key == "tol") solver_tol = to_double(key, value);
  else if (key == "harmonic_tol") harmonic_tol = to_double(key, value);
  else if (key == "series") {
    if (value != "true" && value != "false") throw ConfigError("series must be true or false");
    error_series = value == "true";
  } else if (key == "out_dir") out_dir = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_key_values() const {
  const auto medium_name = [&] {
    return medium == MediumKind::trigonometric ? std::string("trig") : to_string(medium);
  };
  return {
      {"medium", medium_name()},
      {"const_a", number(constant_a)},
      {"channel_A", number(channel_a)},
      {"perc_seed", std::to_string(perc_seed)},
      {"perc_gamma", number(perc_gamma)},
      {"layer_breaks", join(layer_breaks)},
      {"layer_values", join(layer_values)},
      {"source", to_string(source)},
      {"basis", to_string(basis)},
      {"coarse_level", std::to_string(coarse_level)},
      {"fine_level", std::to_string(fine_level)},
      {"bc", to_string(bc)},
      {"T", number(final_time)},
      {"steps", std::to_string(steps)},
      {"ref_steps", std::to_string(ref_steps)},
      {"tol", number(solver_tol)},
      {"harmonic_tol", number(harmonic_tol)},
      {"series", error_series ? "true" : "false"},
      {"out_dir", out_dir},
  };
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

void write_config(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& [key, value] : config.to_key_values()) out << key << " = " << value << '\n';
}

}  // namespace harmwave
