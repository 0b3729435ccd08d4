#include "plasmoheat/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace plasmoheat {

using nlohmann::json;

Complex MaterialConfig::epsilon_c() const {
  if (mode == Mode::kDrude) return drude_epsilon(omega, drude);
  // Invert lambda = (eps_c + eps_m)/(2(eps_c - eps_m)).
  const Complex two_l = 2.0 * lambda_eps;
  return eps_m * (two_l + 1.0) / (two_l - 1.0);
}

Complex MaterialConfig::lambda_value() const {
  if (mode == Mode::kDirectLambda) return lambda_eps;
  const Complex ec = drude_epsilon(omega, drude);
  return (ec + eps_m) / (2.0 * (ec - eps_m));
}

namespace {

// line:column of a byte offset, for parse diagnostics.
std::string offset_location(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << line << ":" << col;
  return os.str();
}

[[noreturn]] void fail(const std::string& pointer, const std::string& msg) {
  throw ConfigError("config: " + pointer + ": " + msg, pointer);
}

double require_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

double require_positive(const json& j, const std::string& ptr) {
  const double v = require_number(j, ptr);
  if (!(v > 0.0)) fail(ptr, "must be positive");
  return v;
}

int require_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) fail(ptr, "expected an integer");
  return j.get<int>();
}

Vec2 require_vec2(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ptr, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Complex require_complex(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ptr, "expected [re, im] or a real number");
  return {j[0].get<double>(), j[1].get<double>()};
}

void check_known_keys(const json& j, const std::string& ptr,
                      std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(ptr + "/" + it.key(), "unknown key");
  }
}

ParamCurve parse_curve(const json& j, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected a geometry object");
  check_known_keys(j, ptr, {"type", "a", "b", "center", "rotation"});
  if (!j.contains("type") || j["type"] != "ellipse")
    fail(ptr + "/type", "only \"ellipse\" is supported");
  if (!j.contains("a") || !j.contains("b"))
    fail(ptr, "ellipse needs semi-axes a and b");
  const double a = require_positive(j["a"], ptr + "/a");
  const double b = require_positive(j["b"], ptr + "/b");
  Vec2 center{0.0, 0.0};
  double rotation = 0.0;
  if (j.contains("center")) center = require_vec2(j["center"], ptr + "/center");
  if (j.contains("rotation"))
    rotation = require_number(j["rotation"], ptr + "/rotation");
  return build_ellipse(a, b, center, rotation);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::string loc = offset_location(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config " + origin + " at " + loc + ": " + e.what(),
                      loc);
  }
  if (!root.is_object()) fail("/", "top level must be an object");
  check_known_keys(root, "",
                   {"schema_version", "geometry", "discretization",
                    "illumination", "material", "thermal", "time_grid",
                    "field", "heat", "gap_scan", "seed", "output_dir"});

  RunConfig cfg;
  if (!root.contains("schema_version"))
    fail("/schema_version", "missing (expected 1)");
  cfg.schema_version = require_int(root["schema_version"], "/schema_version");
  if (cfg.schema_version != 1)
    fail("/schema_version", "unsupported version (expected 1)");

  if (!root.contains("geometry") || !root["geometry"].is_array() ||
      root["geometry"].empty())
    fail("/geometry", "expected a non-empty array of curves");
  for (size_t i = 0; i < root["geometry"].size(); ++i) {
    cfg.geometry.push_back(parse_curve(root["geometry"][i],
                                       "/geometry/" + std::to_string(i)));
  }

  if (root.contains("discretization")) {
    const json& d = root["discretization"];
    if (!d.is_object()) fail("/discretization", "expected an object");
    check_known_keys(d, "/discretization", {"n", "interior_h"});
    if (d.contains("n")) {
      cfg.n = require_int(d["n"], "/discretization/n");
      if (cfg.n < 8 || cfg.n % 2 != 0)
        fail("/discretization/n", "must be even and at least 8");
    }
    if (d.contains("interior_h"))
      cfg.interior_h =
          require_positive(d["interior_h"], "/discretization/interior_h");
  }

  if (root.contains("illumination")) {
    const json& il = root["illumination"];
    if (!il.is_object()) fail("/illumination", "expected an object");
    check_known_keys(il, "/illumination", {"direction", "k_m"});
    if (il.contains("direction")) {
      Vec2 d = require_vec2(il["direction"], "/illumination/direction");
      const double nn = d.norm();
      if (!(nn > 0.0)) fail("/illumination/direction", "must be nonzero");
      cfg.direction = d / nn;
    }
    if (il.contains("k_m"))
      cfg.k_m = require_positive(il["k_m"], "/illumination/k_m");
  }

  if (root.contains("material")) {
    const json& m = root["material"];
    if (!m.is_object()) fail("/material", "expected an object");
    check_known_keys(m, "/material",
                     {"mode", "lambda_eps", "eps_m", "eps_inf", "omega_p",
                      "gamma_drude", "omega"});
    const std::string mode = m.value("mode", "direct");
    if (mode == "direct") {
      cfg.material.mode = MaterialConfig::Mode::kDirectLambda;
      if (m.contains("lambda_eps")) {
        cfg.material.lambda_eps =
            require_complex(m["lambda_eps"], "/material/lambda_eps");
        cfg.material.lambda_explicit = true;
      }
    } else if (mode == "drude") {
      cfg.material.mode = MaterialConfig::Mode::kDrude;
      if (!m.contains("omega")) fail("/material/omega", "drude mode needs omega");
      cfg.material.omega = require_positive(m["omega"], "/material/omega");
      if (m.contains("eps_inf"))
        cfg.material.drude.eps_inf =
            require_positive(m["eps_inf"], "/material/eps_inf");
      if (m.contains("omega_p"))
        cfg.material.drude.omega_p =
            require_positive(m["omega_p"], "/material/omega_p");
      if (m.contains("gamma_drude"))
        cfg.material.drude.gamma =
            require_positive(m["gamma_drude"], "/material/gamma_drude");
    } else {
      fail("/material/mode", "expected \"direct\" or \"drude\"");
    }
    if (m.contains("eps_m"))
      cfg.material.eps_m = require_positive(m["eps_m"], "/material/eps_m");
  }

  if (root.contains("thermal")) {
    const json& th = root["thermal"];
    if (!th.is_object()) fail("/thermal", "expected an object");
    check_known_keys(th, "/thermal",
                     {"gamma_c", "gamma_m", "rho_c_c", "rho_c_m", "kernel_b"});
    if (th.contains("gamma_c"))
      cfg.thermal.gamma_c = require_positive(th["gamma_c"], "/thermal/gamma_c");
    if (th.contains("gamma_m"))
      cfg.thermal.gamma_m = require_positive(th["gamma_m"], "/thermal/gamma_m");
    if (th.contains("rho_c_c"))
      cfg.thermal.rho_c_c = require_positive(th["rho_c_c"], "/thermal/rho_c_c");
    if (th.contains("rho_c_m"))
      cfg.thermal.rho_c_m = require_positive(th["rho_c_m"], "/thermal/rho_c_m");
    if (th.contains("kernel_b"))
      cfg.kernel_b = require_positive(th["kernel_b"], "/thermal/kernel_b");
  }

  if (root.contains("time_grid")) {
    const json& tg = root["time_grid"];
    if (!tg.is_object()) fail("/time_grid", "expected an object");
    check_known_keys(tg, "/time_grid", {"t_end", "nt", "first_frac"});
    if (tg.contains("t_end"))
      cfg.t_end = require_positive(tg["t_end"], "/time_grid/t_end");
    if (tg.contains("nt")) {
      cfg.nt = require_int(tg["nt"], "/time_grid/nt");
      if (cfg.nt < 3) fail("/time_grid/nt", "need at least 3 nodes");
    }
    if (tg.contains("first_frac")) {
      cfg.first_frac =
          require_positive(tg["first_frac"], "/time_grid/first_frac");
      if (cfg.first_frac >= 1.0)
        fail("/time_grid/first_frac", "must be below 1");
    }
  }

  if (root.contains("field")) {
    const json& f = root["field"];
    if (!f.is_object()) fail("/field", "expected an object");
    check_known_keys(f, "/field", {"mode", "eta", "delta", "z"});
    if (f.contains("mode")) cfg.mode = require_int(f["mode"], "/field/mode");
    if (f.contains("eta")) cfg.eta = require_positive(f["eta"], "/field/eta");
    if (f.contains("delta"))
      cfg.delta = require_positive(f["delta"], "/field/delta");
    if (f.contains("z")) cfg.z = require_vec2(f["z"], "/field/z");
  }

  if (root.contains("heat")) {
    const json& h = root["heat"];
    if (!h.is_object()) fail("/heat", "expected an object");
    check_known_keys(h, "/heat", {"mode", "power"});
    if (h.contains("mode")) cfg.mode = require_int(h["mode"], "/heat/mode");
    if (h.contains("power"))
      cfg.heat_power = require_positive(h["power"], "/heat/power");
  }

  if (root.contains("gap_scan")) {
    const json& g = root["gap_scan"];
    if (!g.is_object()) fail("/gap_scan", "expected an object");
    check_known_keys(g, "/gap_scan", {"gaps"});
    if (g.contains("gaps")) {
      if (!g["gaps"].is_array() || g["gaps"].size() < 3)
        fail("/gap_scan/gaps", "need at least 3 gap values");
      cfg.gaps.clear();
      for (size_t i = 0; i < g["gaps"].size(); ++i)
        cfg.gaps.push_back(require_positive(
            g["gaps"][i], "/gap_scan/gaps/" + std::to_string(i)));
    }
  }

  if (root.contains("seed")) {
    const int s = require_int(root["seed"], "/seed");
    if (s < 0) fail("/seed", "must be nonnegative");
    cfg.seed = static_cast<unsigned>(s);
  }
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string()) fail("/output_dir", "expected a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string config_echo(const RunConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;
  json geo = json::array();
  for (const auto& c : cfg.geometry) {
    geo.push_back({{"type", "ellipse"},
                   {"a", c.a},
                   {"b", c.b},
                   {"center", {c.center.x, c.center.y}},
                   {"rotation", c.rotation}});
  }
  root["geometry"] = geo;
  root["discretization"] = {{"n", cfg.n}};
  if (cfg.interior_h > 0.0)
    root["discretization"]["interior_h"] = cfg.interior_h;
  root["illumination"] = {{"direction", {cfg.direction.x, cfg.direction.y}},
                          {"k_m", cfg.k_m}};
  if (cfg.material.mode == MaterialConfig::Mode::kDirectLambda) {
    root["material"] = {{"mode", "direct"},
                        {"lambda_eps",
                         {cfg.material.lambda_eps.real(),
                          cfg.material.lambda_eps.imag()}},
                        {"eps_m", cfg.material.eps_m}};
  } else {
    root["material"] = {{"mode", "drude"},
                        {"omega", cfg.material.omega},
                        {"eps_inf", cfg.material.drude.eps_inf},
                        {"omega_p", cfg.material.drude.omega_p},
                        {"gamma_drude", cfg.material.drude.gamma},
                        {"eps_m", cfg.material.eps_m}};
  }
  root["thermal"] = {{"gamma_c", cfg.thermal.gamma_c},
                     {"gamma_m", cfg.thermal.gamma_m},
                     {"rho_c_c", cfg.thermal.rho_c_c},
                     {"rho_c_m", cfg.thermal.rho_c_m},
                     {"kernel_b", cfg.kernel_b}};
  root["time_grid"] = {
      {"t_end", cfg.t_end}, {"nt", cfg.nt}, {"first_frac", cfg.first_frac}};
  root["field"] = {{"mode", cfg.mode},
                   {"eta", cfg.eta},
                   {"delta", cfg.delta},
                   {"z", {cfg.z.x, cfg.z.y}}};
  root["heat"] = {{"mode", cfg.mode}, {"power", cfg.heat_power}};
  root["gap_scan"] = {{"gaps", cfg.gaps}};
  root["seed"] = cfg.seed;
  root["output_dir"] = cfg.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace plasmoheat
