#include "gabp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gabp/error.hpp"

namespace gabp::dataset {

namespace {

std::vector<Indicator> default_indicators() {
  return {
      {"X11", "Security inspections", Orientation::Benefit},
      {"X12", "Training status", Orientation::Benefit},
      {"X13", "Technical staff capacity", Orientation::Benefit},
      {"X14", "Years of experience", Orientation::Benefit},
      {"X15", "Educational attainment", Orientation::Benefit},
      {"X21", "Equipment mechanization level", Orientation::Benefit},
      {"X22", "Equipment in good condition", Orientation::Benefit},
      {"X23", "Firefighting equipment integrity rate", Orientation::Benefit},
      {"X24", "Automation level of safety monitoring equipment", Orientation::Benefit},
      {"X31", "Coal dust prevention and control", Orientation::Benefit},
      {"X32", "Roof prevention and control", Orientation::Benefit},
      {"X33", "Gas prevention and control", Orientation::Benefit},
      {"X34", "Fire prevention and control", Orientation::Benefit},
      {"X35", "Flood prevention and control", Orientation::Benefit},
      {"X41", "Hidden danger inspection pass rate", Orientation::Benefit},
      {"X42", "Implementation of security management", Orientation::Benefit},
      {"X43", "Security inspections (management)", Orientation::Benefit},
      {"X44", "Degree of commitment to security", Orientation::Benefit},
      {"X45", "Monthly safety training", Orientation::Benefit},
  };
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_real(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto* end = field.data() + field.size();
  const auto result = std::from_chars(field.data(), end, out);
  return result.ec == std::errc{} && result.ptr == end && std::isfinite(out);
}

bool looks_like_header(const std::vector<std::string_view>& fields) {
  double ignored = 0.0;
  return std::none_of(fields.begin(), fields.end(),
                      [&](std::string_view f) { return parse_real(f, ignored); });
}

}  // namespace

IndicatorSchema::IndicatorSchema() : indicators_(default_indicators()) {}

IndicatorSchema::IndicatorSchema(std::vector<Indicator> indicators)
    : indicators_(std::move(indicators)) {
  if (indicators_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "indicator schema must not be empty");
  }
  std::set<std::string> seen;
  for (const auto& ind : indicators_) {
    if (!seen.insert(ind.code).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate indicator code " + ind.code);
    }
  }
}

void IndicatorSchema::set_orientation(std::string_view code, Orientation orientation) {
  for (auto& ind : indicators_) {
    if (ind.code == code) {
      ind.orientation = orientation;
      return;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown indicator code " + std::string(code));
}

std::vector<std::string> IndicatorSchema::codes() const {
  std::vector<std::string> out;
  out.reserve(indicators_.size());
  for (const auto& ind : indicators_) out.push_back(ind.code);
  return out;
}

Samples parse_samples(std::string_view text, std::size_t n_features, TargetMode mode,
                      std::string_view source) {
  if (n_features == 0) {
    throw Error(ErrorKind::InvalidArgument, "feature count must be positive");
  }
  Samples samples;
  bool first_content_line = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (first_content_line) {
      first_content_line = false;
      if (looks_like_header(fields)) {
        if (mode == TargetMode::Auto) {
          const bool with_y = fields.size() == n_features + 1 && fields.back() == "y";
          if (!with_y && fields.size() != n_features) {
            throw Error(ErrorKind::Parse,
                        std::string(source) + ": header has " + std::to_string(fields.size()) +
                            " columns, expected " + std::to_string(n_features) + " or " +
                            std::to_string(n_features + 1));
          }
          mode = with_y ? TargetMode::Required : TargetMode::None;
        }
        continue;
      }
      if (mode == TargetMode::Auto) {
        mode = fields.size() == n_features + 1 ? TargetMode::Required : TargetMode::None;
      }
    }

    const std::size_t expected = n_features + (mode == TargetMode::Required ? 1 : 0);
    if (fields.size() != expected) {
      throw Error(ErrorKind::Parse, std::string(source) + ": row " + std::to_string(line_no) +
                                        " has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(expected));
    }
    Sample s;
    s.features.resize(n_features);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      if (!parse_real(fields[c], value)) {
        throw Error(ErrorKind::Parse, std::string(source) + ": row " + std::to_string(line_no) +
                                          " column " + std::to_string(c + 1) +
                                          ": not a finite number '" + std::string(fields[c]) +
                                          "'");
      }
      if (c < n_features) {
        s.features[c] = value;
      } else {
        s.targets.push_back(value);
      }
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

Samples load_samples(const std::filesystem::path& path, std::size_t n_features,
                     TargetMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open data file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_samples(buf.str(), n_features, mode, path.string());
}

Samples load_samples(const std::filesystem::path& path, const IndicatorSchema& schema,
                     bool has_target) {
  return load_samples(path, schema.size(), has_target ? TargetMode::Required : TargetMode::None);
}

std::string format_real(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string format_samples(const Samples& samples, std::span<const std::string> codes) {
  const bool with_target = !samples.empty() && samples.front().has_target();
  std::string out;
  for (std::size_t c = 0; c < codes.size(); ++c) {
    if (c) out += ',';
    out += codes[c];
  }
  if (with_target) out += ",y";
  out += '\n';
  for (const auto& s : samples) {
    if (s.features.size() != codes.size() || s.has_target() != with_target) {
      throw Error(ErrorKind::Dimension, "samples do not share one column layout");
    }
    for (std::size_t c = 0; c < s.features.size(); ++c) {
      if (c) out += ',';
      out += format_real(s.features[c]);
    }
    if (with_target) {
      out += ',';
      out += format_real(s.targets.front());
    }
    out += '\n';
  }
  return out;
}

NormStats fit_normalization(const Samples& raw, std::span<const Orientation> orientations) {
  if (raw.empty()) {
    throw Error(ErrorKind::InvalidArgument, "cannot fit normalization on an empty sample list");
  }
  const std::size_t n = orientations.size();
  NormStats stats;
  stats.columns.resize(n);
  for (std::size_t c = 0; c < n; ++c) stats.columns[c].orientation = orientations[c];
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& f = raw[i].features;
    if (f.size() != n) {
      throw Error(ErrorKind::Dimension, "sample " + std::to_string(i) + " has " +
                                            std::to_string(f.size()) + " features, expected " +
                                            std::to_string(n));
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (i == 0) {
        stats.columns[c].min = stats.columns[c].max = f[c];
      } else {
        stats.columns[c].min = std::min(stats.columns[c].min, f[c]);
        stats.columns[c].max = std::max(stats.columns[c].max, f[c]);
      }
    }
  }
  return stats;
}

NormStats fit_normalization(const Samples& raw, const IndicatorSchema& schema) {
  std::vector<Orientation> orientations;
  for (const auto& ind : schema.indicators()) orientations.push_back(ind.orientation);
  return fit_normalization(raw, orientations);
}

Sample apply_normalization(const NormStats& stats, const Sample& raw) {
  if (raw.features.size() != stats.columns.size()) {
    throw Error(ErrorKind::Dimension, "sample has " + std::to_string(raw.features.size()) +
                                          " features, normalization expects " +
                                          std::to_string(stats.columns.size()));
  }
  Sample out = raw;
  for (std::size_t c = 0; c < stats.columns.size(); ++c) {
    const auto& col = stats.columns[c];
    const double range = col.max - col.min;
    double v = 0.5;
    if (range > 0.0) {
      v = col.orientation == Orientation::Benefit ? (raw.features[c] - col.min) / range
                                                  : (col.max - raw.features[c]) / range;
    }
    out.features[c] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

Samples apply_normalization(const NormStats& stats, const Samples& raw) {
  Samples out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back(apply_normalization(stats, s));
  return out;
}

WarningLevel classify_warning(double score) noexcept {
  if (!(score >= 0.2)) return WarningLevel::High;  // includes NaN
  if (score < 0.4) return WarningLevel::Higher;
  if (score < 0.6) return WarningLevel::Medium;
  if (score < 0.8) return WarningLevel::Lower;
  return WarningLevel::Low;
}

std::string_view level_name(WarningLevel level) noexcept {
  switch (level) {
    case WarningLevel::High: return "high";
    case WarningLevel::Higher: return "higher";
    case WarningLevel::Medium: return "medium";
    case WarningLevel::Lower: return "lower";
    case WarningLevel::Low: return "low";
  }
  return "unknown";
}

}  // namespace gabp::dataset
