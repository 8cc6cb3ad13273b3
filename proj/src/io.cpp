#include "superpos/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "superpos/error.hpp"

namespace superpos {

using nlohmann::json;

namespace {

Complex read_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_complex(Complex z) { return json::array({z.real(), z.imag()}); }

Dims read_dims(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw InvalidInput("state file needs a non-empty \"dims\" array");
  }
  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1) throw InvalidInput("dims entries must be positive integers");
    dims.push_back(d.get<int>());
  }
  total_dim(dims);
  return dims;
}

void require_valid(const ValidationReport& report) {
  if (!report.ok()) throw InvalidInput("state violates invariants: " + report.to_string());
}

}  // namespace

AnyState parse_state_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed state JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("state JSON must be an object");
  const Dims dims = read_dims(j);
  const int n = total_dim(dims);
  if (j.contains("amps") == j.contains("rho")) throw InvalidInput("state file needs exactly one of \"amps\" or \"rho\"");
  if (j.contains("amps")) {
    const auto& a = j["amps"];
    if (!a.is_array() || static_cast<int>(a.size()) != n) {
      throw InvalidInput("\"amps\" length must equal the product of dims (" + std::to_string(n) + ")");
    }
    ComplexVector amps(n);
    for (int k = 0; k < n; ++k) amps(k) = read_complex(a[k]);
    PureState psi{dims, amps};
    require_valid(validate(psi));
    return make_pure(dims, amps);
  }
  const auto& r = j["rho"];
  if (!r.is_array() || static_cast<int>(r.size()) != n) throw InvalidInput("\"rho\" must have one row per basis state");
  ComplexMatrix m(n, n);
  for (int row = 0; row < n; ++row) {
    if (!r[row].is_array() || static_cast<int>(r[row].size()) != n) throw InvalidInput("\"rho\" must be square");
    for (int col = 0; col < n; ++col) m(row, col) = read_complex(r[row][col]);
  }
  DensityMatrix rho{dims, m};
  require_valid(validate(rho));
  return make_density(dims, m);
}

AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open state file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

std::string state_to_json(const AnyState& state) {
  json j;
  if (const auto* psi = std::get_if<PureState>(&state)) {
    j["dims"] = psi->dims;
    json amps = json::array();
    for (Eigen::Index k = 0; k < psi->amps.size(); ++k) amps.push_back(write_complex(psi->amps(k)));
    j["amps"] = std::move(amps);
  } else {
    const auto& rho = std::get<DensityMatrix>(state);
    j["dims"] = rho.dims;
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < rho.mat.cols(); ++c) row.push_back(write_complex(rho.mat(r, c)));
      rows.push_back(std::move(row));
    }
    j["rho"] = std::move(rows);
  }
  return j.dump() + "\n";
}

void save_state(const std::string& path, const AnyState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << state_to_json(state);
}

AnyState state_from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::stringstream ss{std::string(spec.substr(colon + 1))};
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InvalidInput("bad parameter '" + item + "' in state spec");
      }
    }
  }
  return make_state(name, params);
}

}  // namespace superpos
