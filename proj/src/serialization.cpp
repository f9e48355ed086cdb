#include "circval/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace circval {

using nlohmann::json;

json plfunction_to_json(const PLFunction& f) {
  json breakpoints = json::array();
  for (const Breakpoint& bp : f.nodes())
    breakpoints.push_back({{"s", rat_str(bp.s)}, {"v", rat_str(bp.v)}});
  return json{{"breakpoints", breakpoints}};
}

PLFunction plfunction_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j["breakpoints"].is_array())
    throw std::invalid_argument("expected an object with a breakpoints array");
  std::vector<Breakpoint> nodes;
  size_t index = 0;
  for (const json& item : j["breakpoints"]) {
    try {
      nodes.push_back({parse_rat(item.at("s").get<std::string>()),
                       parse_rat(item.at("v").get<std::string>())});
    } catch (const std::exception& e) {
      throw std::invalid_argument("node " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return PLFunction::from_breakpoints(std::move(nodes));
}

std::string serialize_plfunction(const PLFunction& f) {
  return plfunction_to_json(f).dump();
}

PLFunction parse_plfunction(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return plfunction_from_json(j);
}

namespace {

SlopeUnit slope_unit_from_string(const std::string& name) {
  if (name == "per_turn") return SlopeUnit::PerTurn;
  if (name == "per_radian") return SlopeUnit::PerRadian;
  throw std::invalid_argument("unknown slope_unit: " + name);
}

std::string slope_unit_to_string(SlopeUnit unit) {
  return unit == SlopeUnit::PerTurn ? "per_turn" : "per_radian";
}

}  // namespace

json kernel_to_json(const KernelSpec& spec) {
  json j;
  j["slope_unit"] = slope_unit_to_string(spec.slope_unit);
  if (const auto* poly = std::get_if<PolynomialKernel>(&spec.form)) {
    j["type"] = "polynomial";
    json coeffs = json::array();
    for (const PolyTerm& term : poly->terms)
      coeffs.push_back({term.lambda_pow, term.slope_pow, term.coeff});
    j["coeffs"] = coeffs;
  } else if (const auto* step = std::get_if<StepSlopeKernel>(&spec.form)) {
    j["type"] = "step_slope";
    j["threshold"] = step->threshold;
  } else {
    const auto& table = std::get<TabulatedKernel>(spec.form);
    j["type"] = "tabulated";
    j["lambda_grid"] = table.lambda_grid;
    j["gamma_grid"] = table.gamma_grid;
    j["values"] = table.values;
  }
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("kernel spec needs a type field");
  KernelSpec spec;
  spec.slope_unit = slope_unit_from_string(j.value("slope_unit", "per_turn"));
  const std::string type = j["type"].get<std::string>();
  if (type == "polynomial") {
    PolynomialKernel poly;
    for (const json& item : j.at("coeffs")) {
      if (!item.is_array() || item.size() != 3)
        throw std::invalid_argument("polynomial coeffs entries are [i, j, c]");
      PolyTerm term;
      term.lambda_pow = item[0].get<int>();
      term.slope_pow = item[1].get<int>();
      term.coeff = item[2].get<double>();
      if (term.lambda_pow < 0 || term.slope_pow < 0)
        throw std::invalid_argument("polynomial powers must be nonnegative");
      poly.terms.push_back(term);
    }
    spec.form = poly;
  } else if (type == "step_slope") {
    spec.form = StepSlopeKernel{j.at("threshold").get<double>()};
  } else if (type == "tabulated") {
    TabulatedKernel table;
    table.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    table.gamma_grid = j.at("gamma_grid").get<std::vector<double>>();
    table.values = j.at("values").get<std::vector<std::vector<double>>>();
    for (size_t i = 1; i < table.lambda_grid.size(); ++i)
      if (table.lambda_grid[i] <= table.lambda_grid[i - 1])
        throw std::invalid_argument("lambda_grid must increase");
    for (size_t i = 1; i < table.gamma_grid.size(); ++i)
      if (table.gamma_grid[i] <= table.gamma_grid[i - 1])
        throw std::invalid_argument("gamma_grid must increase");
    if (!table.gamma_grid.empty() && table.gamma_grid.front() < 0)
      throw std::invalid_argument("gamma_grid must be nonnegative");
    if (table.values.size() != table.lambda_grid.size())
      throw std::invalid_argument("values rows must match lambda_grid");
    for (const auto& row : table.values)
      if (row.size() != table.gamma_grid.size())
        throw std::invalid_argument("values columns must match gamma_grid");
    spec.form = table;
  } else {
    throw std::invalid_argument("unknown kernel type: " + type);
  }
  return spec;
}

PLFunction load_plfunction_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open function file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plfunction(buffer.str());
}

KernelSpec load_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open kernel file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed kernel JSON: ") + e.what());
  }
  return kernel_from_json(j);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

}  // namespace circval
