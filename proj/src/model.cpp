#include "gabp/model.hpp"

#include <fstream>
#include <sstream>

#include "gabp/error.hpp"
#include "json.hpp"

namespace gabp::model {

namespace {

using json = nlohmann::ordered_json;

json matrix_rows(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    out.push_back(std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                      data.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)));
  }
  return out;
}

std::vector<double> read_matrix(const json& rows, std::size_t n_rows, std::size_t n_cols,
                                const char* name) {
  if (!rows.is_array() || rows.size() != n_rows) {
    throw Error(ErrorKind::Parse, std::string("model block ") + name + " has the wrong row count");
  }
  std::vector<double> out;
  out.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    auto values = row.get<std::vector<double>>();
    if (values.size() != n_cols) {
      throw Error(ErrorKind::Parse, std::string("model block ") + name + " has a ragged row");
    }
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

std::vector<double> read_vector(const json& v, std::size_t n, const char* name) {
  auto values = v.get<std::vector<double>>();
  if (values.size() != n) {
    throw Error(ErrorKind::Parse, std::string("model block ") + name + " has the wrong length");
  }
  return values;
}

const char* orientation_name(dataset::Orientation o) {
  return o == dataset::Orientation::Benefit ? "benefit" : "cost";
}

dataset::Orientation parse_orientation(const std::string& s) {
  if (s == "benefit") return dataset::Orientation::Benefit;
  if (s == "cost") return dataset::Orientation::Cost;
  throw Error(ErrorKind::Parse, "unknown orientation '" + s + "'");
}

}  // namespace

std::vector<std::string> default_codes(std::size_t inputs) {
  const dataset::IndicatorSchema schema;
  if (inputs == schema.size()) return schema.codes();
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < inputs; ++i) codes.push_back("x" + std::to_string(i + 1));
  return codes;
}

Model make_model(network::NetworkParams params, std::optional<dataset::NormStats> norm) {
  Model m;
  m.feature_codes = default_codes(params.shape.inputs);
  m.orientations.assign(params.shape.inputs, dataset::Orientation::Benefit);
  if (norm) {
    if (norm->columns.size() != params.shape.inputs) {
      throw Error(ErrorKind::Dimension, "normalization width does not match network inputs");
    }
    for (std::size_t i = 0; i < norm->columns.size(); ++i) {
      m.orientations[i] = norm->columns[i].orientation;
    }
  }
  m.params = std::move(params);
  m.norm = std::move(norm);
  return m;
}

std::vector<double> predict(const Model& m, std::span<const double> raw_features) {
  if (!m.norm) return network::forward(m.params, raw_features).output;
  dataset::Sample s;
  s.features.assign(raw_features.begin(), raw_features.end());
  return network::forward(m.params, dataset::apply_normalization(*m.norm, s).features).output;
}

std::string to_json(const Model& m) {
  network::validate(m.params);
  const auto& s = m.params.shape;
  json doc;
  doc["format"] = "gabp-model";
  doc["version"] = kFormatVersion;
  doc["shape"] = {{"inputs", s.inputs}, {"hidden", s.hidden}, {"outputs", s.outputs}};
  json features = json::array();
  for (std::size_t i = 0; i < m.feature_codes.size(); ++i) {
    features.push_back({{"code", m.feature_codes[i]},
                        {"orientation", orientation_name(m.orientations[i])}});
  }
  doc["features"] = std::move(features);
  // Blocks in chromosome order.
  json params = json::object();
  params["W"] = matrix_rows(m.params.w, s.hidden, s.inputs);
  params["gamma"] = m.params.gamma;
  params["V"] = matrix_rows(m.params.v, s.outputs, s.hidden);
  params["h"] = m.params.h;
  doc["params"] = std::move(params);
  if (m.norm) {
    json cols = json::array();
    for (const auto& c : m.norm->columns) cols.push_back({{"min", c.min}, {"max", c.max}});
    doc["normalization"] = std::move(cols);
  } else {
    doc["normalization"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

Model from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "gabp-model") {
      throw Error(ErrorKind::Parse, "not a gabp model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kFormatVersion) {
      throw Error(ErrorKind::Parse, "unsupported model version " + std::to_string(version));
    }
    network::NetworkShape shape;
    shape.inputs = doc.at("shape").at("inputs").get<std::size_t>();
    shape.hidden = doc.at("shape").at("hidden").get<std::size_t>();
    shape.outputs = doc.at("shape").at("outputs").get<std::size_t>();
    network::validate(shape);

    Model m;
    m.params = network::NetworkParams(shape);
    const auto& p = doc.at("params");
    m.params.w = read_matrix(p.at("W"), shape.hidden, shape.inputs, "W");
    m.params.gamma = read_vector(p.at("gamma"), shape.hidden, "gamma");
    m.params.v = read_matrix(p.at("V"), shape.outputs, shape.hidden, "V");
    m.params.h = read_vector(p.at("h"), shape.outputs, "h");
    network::validate(m.params);

    const auto& features = doc.at("features");
    if (features.size() != shape.inputs) {
      throw Error(ErrorKind::Parse, "feature list does not match the input count");
    }
    for (const auto& f : features) {
      m.feature_codes.push_back(f.at("code").get<std::string>());
      m.orientations.push_back(parse_orientation(f.at("orientation").get<std::string>()));
    }
    const auto& norm = doc.at("normalization");
    if (!norm.is_null()) {
      if (norm.size() != shape.inputs) {
        throw Error(ErrorKind::Parse, "normalization does not match the input count");
      }
      dataset::NormStats stats;
      for (std::size_t i = 0; i < norm.size(); ++i) {
        dataset::ColumnStats c;
        c.min = norm[i].at("min").get<double>();
        c.max = norm[i].at("max").get<double>();
        c.orientation = m.orientations[i];
        if (!(c.min <= c.max)) throw Error(ErrorKind::Parse, "normalization column has min > max");
        stats.columns.push_back(c);
      }
      m.norm = std::move(stats);
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed model document: ") + e.what());
  }
}

void save(const Model& m, const std::filesystem::path& path) {
  const auto text = to_json(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(ErrorKind::Io, "cannot write model file " + path.string());
  }
}

Model load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace gabp::model
