#include "sio/scene.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace sio {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("scene: " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

// Complex values are written [re, im]; bare numbers mean a real value.
cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(path, "expected a number or [re, im]");
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<cplx> as_complex_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<cplx> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_complex(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

CurveModel parse_curve(const json& j) {
  const std::string path = "curve";
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(need(j, "kind", path), path + ".kind");
  const int res = j.contains("resolution")
                      ? as_int(j["resolution"], path + ".resolution")
                      : CurveModel::kDefaultResolution;
  if (kind == "unit_circle") return CurveModel::unit_circle(res);
  if (kind == "segment")
    return CurveModel::segment(as_complex(need(j, "from", path), path + ".from"),
                               as_complex(need(j, "to", path), path + ".to"),
                               res);
  if (kind == "log_spiral") {
    const double delta = as_number(need(j, "delta", path), path + ".delta");
    const double r0 =
        j.contains("r0") ? as_number(j["r0"], path + ".r0") : 0.5;
    return CurveModel::log_spiral_attached(delta, r0, res);
  }
  if (kind == "smooth_jordan") {
    const auto coeffs =
        as_complex_list(need(j, "coeffs", path), path + ".coeffs");
    const int offset = j.contains("offset")
                           ? as_int(j["offset"], path + ".offset")
                           : 0;
    return CurveModel::smooth_jordan(coeffs, offset, res);
  }
  if (kind == "polyline")
    return CurveModel::polyline(
        as_complex_list(need(j, "points", path), path + ".points"), res);
  fail(path + ".kind", "unknown curve kind '" + kind + "'");
}

ExponentField parse_exponent(const json& j) {
  const std::string path = "exponent";
  if (j.is_number()) return ExponentField::constant(j.get<double>());
  if (!j.is_object()) fail(path, "expected a number or an object");
  const std::string kind = as_string(need(j, "kind", path), path + ".kind");
  if (kind == "constant")
    return ExponentField::constant(
        as_number(need(j, "value", path), path + ".value"));
  if (kind == "table")
    return ExponentField::from_samples(
        as_number_list(need(j, "s", path), path + ".s"),
        as_number_list(need(j, "p", path), path + ".p"));
  fail(path + ".kind", "unknown exponent kind '" + kind + "'");
}

Weight parse_weight(const json& j) {
  if (!j.is_array()) fail("weight", "expected an array of factor records");
  std::vector<WeightFactor> factors;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string path = "weight[" + std::to_string(i) + "]";
    const json& f = j[i];
    if (!f.is_object()) fail(path, "expected an object");
    const std::string kind = as_string(need(f, "kind", path), path + ".kind");
    const cplx t0 = as_complex(need(f, "t", path), path + ".t");
    if (kind == "power")
      factors.push_back(WeightFactor::power(
          t0, as_number(need(f, "lambda", path), path + ".lambda")));
    else if (kind == "eta_power")
      factors.push_back(WeightFactor::eta_power(
          t0, as_number(need(f, "x", path), path + ".x")));
    else if (kind == "phi_gamma")
      factors.push_back(WeightFactor::phi_gamma(
          t0, as_complex(need(f, "gamma", path), path + ".gamma")));
    else if (kind == "radial_table")
      factors.push_back(WeightFactor::radial_oscillating(
          t0, as_number_list(need(f, "radii", path), path + ".radii"),
          as_number_list(need(f, "values", path), path + ".values")));
    else
      fail(path + ".kind", "unknown weight factor kind '" + kind + "'");
  }
  return Weight(std::move(factors));
}

PCSymbol parse_symbol(const json& j, const CurveModel& curve,
                      const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(need(j, "kind", path), path + ".kind");
  if (kind == "constant")
    return PCSymbol::constant(
        curve, as_complex(need(j, "value", path), path + ".value"));
  if (kind == "jump")
    return PCSymbol::single_jump(
        curve, as_complex(need(j, "t", path), path + ".t"),
        as_complex(need(j, "before", path), path + ".before"),
        as_complex(need(j, "after", path), path + ".after"));
  if (kind == "jumps") {
    const json& items = need(j, "items", path);
    if (!items.is_array() || items.empty())
      fail(path + ".items", "expected a non-empty array");
    PCSymbol prod =
        j.contains("scale")
            ? PCSymbol::constant(curve,
                                 as_complex(j["scale"], path + ".scale"))
            : PCSymbol::constant(curve, {1, 0});
    for (size_t i = 0; i < items.size(); ++i) {
      const std::string ip = path + ".items[" + std::to_string(i) + "]";
      const json& it = items[i];
      prod = prod * PCSymbol::single_jump(
                        curve, as_complex(need(it, "t", ip), ip + ".t"),
                        as_complex(need(it, "before", ip), ip + ".before"),
                        as_complex(need(it, "after", ip), ip + ".after"));
    }
    return prod;
  }
  if (kind == "continuous") {
    // Piecewise-linear table over arclength fractions u in [0, 1].
    const auto u = as_number_list(need(j, "s", path), path + ".s");
    const auto vals = as_complex_list(need(j, "values", path), path + ".values");
    if (u.size() != vals.size())
      fail(path, "'s' and 'values' need equal lengths");
    for (size_t i = 0; i < u.size(); ++i) {
      if (u[i] < 0 || u[i] > 1) fail(path + ".s", "fractions must lie in [0, 1]");
      if (i > 0 && u[i] <= u[i - 1])
        fail(path + ".s", "fractions must increase");
    }
    const double L = curve.length();
    return PCSymbol::continuous(curve, [&, u, vals, L](double s) -> cplx {
      const double x = std::clamp(s / L, 0.0, 1.0);
      if (x <= u.front()) return vals.front();
      if (x >= u.back()) return vals.back();
      size_t k = 1;
      while (u[k] < x) ++k;
      const double w = (x - u[k - 1]) / (u[k] - u[k - 1]);
      return vals[k - 1] * (1.0 - w) + vals[k] * w;
    });
  }
  fail(path + ".kind", "unknown symbol kind '" + kind + "'");
}

}  // namespace

SceneConfig parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scene: parse error: ") + e.what());
  }
  if (!j.is_object()) fail("(root)", "expected a JSON object");
  const json& schema = need(j, "schema", "(root)");
  if (!schema.is_number_integer() || schema.get<int>() != 1)
    fail("schema", "unsupported schema version (expected 1)");

  CurveModel curve = parse_curve(need(j, "curve", "(root)"));
  ExponentField exponent = j.contains("exponent")
                               ? parse_exponent(j["exponent"])
                               : ExponentField::constant(2.0);
  Weight weight =
      j.contains("weight") ? parse_weight(j["weight"]) : Weight::one();
  std::optional<PCSymbol> sym_a, sym_b;
  if (j.contains("symbol_a"))
    sym_a = parse_symbol(j["symbol_a"], curve, "symbol_a");
  if (j.contains("symbol_b"))
    sym_b = parse_symbol(j["symbol_b"], curve, "symbol_b");

  SceneConfig cfg{
      j.contains("name") ? as_string(j["name"], "name") : std::string{},
      SpaceSpec{std::move(curve), std::move(exponent), std::move(weight)},
      std::move(sym_a),
      std::move(sym_b),
      /*point=*/{},
      /*has_point=*/false,
      /*tol=*/1e-3};
  if (j.contains("point")) {
    cfg.point = as_complex(j["point"], "point");
    cfg.has_point = true;
  }
  if (j.contains("tol")) {
    cfg.tol = as_number(j["tol"], "tol");
    if (!(cfg.tol > 0)) fail("tol", "must be positive");
  }

  // Cross-references: the exponent certificate and every weight singularity
  // must be consistent with the curve.
  try {
    validate_space(cfg.space);
    if (cfg.has_point) cfg.space.curve.snap_to_sample(cfg.point);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("scene: ") + e.what());
  }
  return cfg;
}

SceneConfig load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scene: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace sio
