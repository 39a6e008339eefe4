#include "harmwave/media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "harmwave/errors.hpp"

namespace harmwave {

double eval_trig(Point p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double e1 = 1.0 / 5.0;
  constexpr double e2 = 1.0 / 13.0;
  constexpr double e3 = 1.0 / 17.0;
  constexpr double e4 = 1.0 / 31.0;
  constexpr double e5 = 1.0 / 65.0;
  const double x = p.x;
  const double y = p.y;
  const double sum =
      (1.1 + std::sin(two_pi * x / e1)) / (1.1 + std::sin(two_pi * y / e1)) +
      (1.1 + std::sin(two_pi * y / e2)) / (1.1 + std::cos(two_pi * x / e2)) +
      (1.1 + std::cos(two_pi * x / e3)) / (1.1 + std::sin(two_pi * y / e3)) +
      (1.1 + std::sin(two_pi * y / e4)) / (1.1 + std::cos(two_pi * x / e4)) +
      (1.1 + std::cos(two_pi * x / e5)) / (1.1 + std::sin(two_pi * y / e5)) +
      std::sin(4.0 * x * x * y * y) + 1.0;
  return sum / 6.0;
}

std::string to_string(MediumKind kind) {
  switch (kind) {
    case MediumKind::constant: return "constant";
    case MediumKind::trigonometric: return "trig";
    case MediumKind::channel: return "channel";
    case MediumKind::percolation: return "percolation";
    case MediumKind::layered: return "layered";
  }
  return "unknown";
}

Medium Medium::constant(double value) {
  if (!(value > 0.0)) throw ConfigError("constant medium needs a positive value");
  Medium m;
  m.kind_ = MediumKind::constant;
  m.value_ = value;
  return m;
}

Medium Medium::trigonometric() {
  Medium m;
  m.kind_ = MediumKind::trigonometric;
  return m;
}

Medium Medium::channel(double contrast, Strip strip) {
  if (!(contrast > 0.0)) throw ConfigError("channel contrast must be positive");
  if (contrast < 1.0) throw ConfigError("channel contrast must be >= 1");
  if (!(strip.x_min < strip.x_max && strip.y_min < strip.y_max)) {
    throw ConfigError("channel strip is empty");
  }
  Medium m;
  m.kind_ = MediumKind::channel;
  m.value_ = contrast;
  m.strip_ = strip;
  return m;
}

Medium Medium::percolation(std::uint64_t seed, double gamma, int sites) {
  if (!(gamma > 1.0)) throw ConfigError("percolation contrast gamma must be > 1");
  if (sites < 1) throw ConfigError("percolation needs at least one site per side");
  Medium m;
  m.kind_ = MediumKind::percolation;
  m.value_ = gamma;
  m.seed_ = seed;
  m.site_side_ = sites;
  std::mt19937_64 rng(seed);
  m.sites_.resize(static_cast<std::size_t>(sites) * sites);
  for (double& site : m.sites_) {
    site = (rng() >> 63) != 0 ? gamma : 1.0 / gamma;
  }
  return m;
}

Medium Medium::layered(std::vector<double> breaks, std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw ConfigError("layered medium needs one more value than break points");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end())) {
    throw ConfigError("layered break points must be sorted");
  }
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) {
    throw ConfigError("layered values must be positive");
  }
  Medium m;
  m.kind_ = MediumKind::layered;
  m.breaks_ = std::move(breaks);
  m.values_ = std::move(values);
  return m;
}

double Medium::operator()(Point p) const {
  switch (kind_) {
    case MediumKind::constant:
      return value_;
    case MediumKind::trigonometric:
      return eval_trig(p);
    case MediumKind::channel:
      return strip_.contains(p) ? value_ : 1.0;
    case MediumKind::percolation: {
      const auto site = [&](double s) {
        const int k = static_cast<int>(std::floor((s + 1.0) * 0.5 * site_side_));
        return std::clamp(k, 0, site_side_ - 1);
      };
      return sites_[static_cast<std::size_t>(site(p.y)) * site_side_ + site(p.x)];
    }
    case MediumKind::layered: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), p.x);
      return values_[static_cast<std::size_t>(it - breaks_.begin())];
    }
  }
  return value_;
}

std::string Medium::describe() const {
  std::ostringstream out;
  out << to_string(kind_);
  switch (kind_) {
    case MediumKind::constant: out << " value=" << value_; break;
    case MediumKind::channel:
      out << " A=" << value_ << " strip=[" << strip_.x_min << ',' << strip_.x_max << "]x["
          << strip_.y_min << ',' << strip_.y_max << ']';
      break;
    case MediumKind::percolation:
      out << " gamma=" << value_ << " seed=" << seed_ << " sites=" << site_side_
          << " rng=" << kPercolationRng;
      break;
    case MediumKind::layered: out << " layers=" << values_.size(); break;
    case MediumKind::trigonometric: break;
  }
  return out.str();
}

CoefficientField sample_to_elements(const TriMesh& mesh, const Medium& medium, double bulk) {
  if (!(bulk > 0.0)) throw ConfigError("bulk parameter K must be positive");
  CoefficientField field;
  field.bulk = bulk;
  field.values.resize(static_cast<std::size_t>(mesh.num_triangles()));
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    field.values[e] = medium(mesh.centroid(e));
  }
  return field;
}

void write_field(std::ostream& out, const CoefficientField& field) {
  out.precision(17);
  for (std::size_t e = 0; e < field.values.size(); ++e) {
    out << e << ' ' << field.values[e] << '\n';
  }
}

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::zero: return "zero";
    case SourceKind::constant_one: return "one";
    case SourceKind::traveling_sine: return "sine";
    case SourceKind::gaussian: return "gauss";
    case SourceKind::modulated_gaussian: return "modulated";
  }
  return "unknown";
}

double modulation_t1(double t) {
  double sum = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += 2.0 * (1.0 - sign) / (k * std::numbers::pi) * std::sin(2.0 * k * std::numbers::pi * t);
  }
  return sum;
}

double modulation_t2(double t) { return std::erfc(8.0 * (t - 0.5)); }

double gaussian_bump(Point p, Point center, double sigma) {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) /
         std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
}

SourceTerm SourceTerm::zero() { return {}; }

SourceTerm SourceTerm::constant_one() {
  SourceTerm s;
  s.kind_ = SourceKind::constant_one;
  s.terms_.push_back({[](double) { return 1.0; }, [](Point) { return 1.0; }});
  return s;
}

SourceTerm SourceTerm::traveling_sine() {
  // sin(phase + 2 pi t) = sin(phase) cos(2 pi t) + cos(phase) sin(2 pi t)
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SourceTerm s;
  s.kind_ = SourceKind::traveling_sine;
  s.terms_.push_back({[](double t) { return std::cos(two_pi * t); },
                      [](Point p) { return std::sin(2.4 * p.x - 1.8 * p.y); }});
  s.terms_.push_back({[](double t) { return std::sin(two_pi * t); },
                      [](Point p) { return std::cos(2.4 * p.x - 1.8 * p.y); }});
  return s;
}

SourceTerm SourceTerm::gaussian(double sigma, Point center) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian width must be positive");
  SourceTerm s;
  s.kind_ = SourceKind::gaussian;
  s.terms_.push_back({[](double) { return 1.0; },
                      [=](Point p) { return gaussian_bump(p, center, sigma); }});
  return s;
}

SourceTerm SourceTerm::modulated_gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian width must be positive");
  SourceTerm s;
  s.kind_ = SourceKind::modulated_gaussian;
  s.terms_.push_back({[](double t) { return modulation_t1(t) * modulation_t2(t); },
                      [=](Point p) { return gaussian_bump(p, {0.0, 0.0}, sigma); }});
  return s;
}

double SourceTerm::operator()(Point p, double t) const {
  double value = 0.0;
  for (const SeparableTerm& term : terms_) value += term.time(t) * term.space(p);
  return value;
}

}  // namespace harmwave
