#include "priorshift/dataset_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace priorshift {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::runtime_error("parse error: bad numeric field '" + s + "' " + where);
  return v;
}

long parse_int(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw std::runtime_error("parse error: bad integer field '" + s + "' " + where);
  return v;
}

}  // namespace

std::string meta_path_for(const std::string& csv_path) {
  std::string base = csv_path;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
    base = base.substr(0, base.size() - 4);
  return base + ".meta.json";
}

void save_dataset(const Dataset& data, const std::string& path) {
  data.validate();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_dataset: cannot open " + path);
  for (int j = 0; j < data.dim; ++j) f << "x" << j << ",";
  f << "y,z\n";
  for (const LabeledSample& s : data.samples) {
    for (double v : s.features) f << fmt_double(v) << ",";
    f << s.label << "," << s.attribute << "\n";
  }
  if (!f) throw std::runtime_error("save_dataset: write failure on " + path);
  f.close();

  nlohmann::json meta;
  meta["m"] = data.dim;
  meta["num_classes"] = data.num_classes;
  meta["num_attributes"] = data.num_attributes;
  if (data.domain_tag.has_value())
    meta["domain_tag"] = domain_name(*data.domain_tag);
  else
    meta["domain_tag"] = nullptr;
  std::ofstream mf(meta_path_for(path));
  if (!mf) throw std::runtime_error("save_dataset: cannot open " + meta_path_for(path));
  mf << meta.dump(2) << "\n";
  if (!mf) throw std::runtime_error("save_dataset: write failure on " + meta_path_for(path));
}

Dataset load_dataset(const std::string& path) {
  std::ifstream mf(meta_path_for(path));
  if (!mf)
    throw std::runtime_error("load_dataset: missing sidecar " + meta_path_for(path));
  nlohmann::json meta;
  try {
    mf >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_dataset: malformed sidecar " + meta_path_for(path) +
                             ": " + e.what());
  }

  Dataset data;
  data.dim = meta.at("m").get<int>();
  data.num_classes = meta.at("num_classes").get<int>();
  data.num_attributes = meta.at("num_attributes").get<int>();
  if (meta.contains("domain_tag") && !meta["domain_tag"].is_null()) {
    std::string tag = meta["domain_tag"].get<std::string>();
    if (tag == "Source")
      data.domain_tag = Domain::Source;
    else if (tag == "Target")
      data.domain_tag = Domain::Target;
    else
      throw std::runtime_error("load_dataset: unknown domain_tag '" + tag + "'");
  }

  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_dataset: missing file " + path);
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error("load_dataset: empty file " + path);
  std::vector<std::string> header = split_csv(line);
  if (static_cast<int>(header.size()) != data.dim + 2)
    throw std::runtime_error("load_dataset: header has " + std::to_string(header.size()) +
                             " columns, expected " + std::to_string(data.dim + 2));
  for (int j = 0; j < data.dim; ++j)
    if (header[j] != "x" + std::to_string(j))
      throw std::runtime_error("load_dataset: header column " + std::to_string(j) +
                               " is '" + header[j] + "', expected x" + std::to_string(j));
  if (header[data.dim] != "y" || header[data.dim + 1] != "z")
    throw std::runtime_error("load_dataset: header must end with y,z");

  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    ++row;
    std::string where = "at row " + std::to_string(row) + " of " + path;
    std::vector<std::string> cells = split_csv(line);
    if (static_cast<int>(cells.size()) != data.dim + 2)
      throw std::runtime_error("parse error: " + std::to_string(cells.size()) +
                               " fields " + where);
    LabeledSample s;
    s.features.resize(data.dim);
    for (int j = 0; j < data.dim; ++j) {
      s.features[j] = parse_double(cells[j], where);
      if (!std::isfinite(s.features[j]))
        throw std::runtime_error("parse error: non-finite feature " + where);
    }
    long y = parse_int(cells[data.dim], where);
    long z = parse_int(cells[data.dim + 1], where);
    bool target = data.domain_tag.has_value() && *data.domain_tag == Domain::Target;
    if (y < (target ? -1 : 0) || y >= data.num_classes)
      throw std::runtime_error("parse error: label " + std::to_string(y) +
                               " out of range [0," + std::to_string(data.num_classes) +
                               ") " + where);
    if (z < 0 || z >= data.num_attributes)
      throw std::runtime_error("parse error: attribute " + std::to_string(z) +
                               " out of range [0," + std::to_string(data.num_attributes) +
                               ") " + where);
    s.label = static_cast<int>(y);
    s.attribute = static_cast<int>(z);
    data.samples.push_back(std::move(s));
  }
  data.validate();
  return data;
}

void save_weights(const WeightVector& w, const std::string& path) {
  w.validate();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_weights: cannot open " + path);
  f << "index,weight\n";
  for (int i = 0; i < w.size(); ++i) f << i << "," << fmt_double(w.weights[i]) << "\n";
  if (!f) throw std::runtime_error("save_weights: write failure on " + path);
}

WeightVector load_weights(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_weights: missing file " + path);
  std::string line;
  if (!std::getline(f, line) || split_csv(line) != std::vector<std::string>{"index", "weight"})
    throw std::runtime_error("load_weights: bad header in " + path);
  WeightVector w;
  int row = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::string where = "at row " + std::to_string(row) + " of " + path;
    std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 2) throw std::runtime_error("parse error: expected 2 fields " + where);
    long idx = parse_int(cells[0], where);
    if (idx != row)
      throw std::runtime_error("parse error: index " + std::to_string(idx) +
                               " out of order " + where);
    w.weights.push_back(parse_double(cells[1], where));
    ++row;
  }
  w.validate();
  return w;
}

}  // namespace priorshift
