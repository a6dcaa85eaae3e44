#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "fermibag/cli.hpp"
#include "fermibag/errors.hpp"

namespace fermibag::cli {

namespace {

const std::map<std::string, std::set<std::string>>& state_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"vacuum", {"kind"}},
      {"fock", {"kind", "j"}},
      {"coherent", {"kind", "beta_abs", "theta"}},
      {"squeezed", {"kind", "r", "phi"}},
      {"squeezed_coherent", {"kind", "beta_abs", "theta", "r", "phi"}},
  };
  return keys;
}

[[noreturn]] void reject(const std::string& path, const std::string& why) {
  throw InvalidArgument("config: " + path + ": " + why);
}

void require_same_kind(const Json& value, const Json& like, const std::string& path) {
  if (like.is_boolean() && !value.is_boolean()) reject(path, "expected true or false");
  if (like.is_string() && !value.is_string()) reject(path, "expected a string");
  if (like.is_number_integer() && !value.is_number_integer()) reject(path, "expected an integer");
  if (like.is_number_float() && !value.is_number()) reject(path, "expected a number");
  if (like.is_array() && !value.is_array()) reject(path, "expected an array");
}

void validate_numbers(const Json& array, const std::string& path) {
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (!array[i].is_number()) reject(path + "[" + std::to_string(i) + "]", "expected a number");
  }
}

void validate_state(const Json& state, const std::string& path) {
  if (!state.is_object()) reject(path, "expected an object");
  if (!state.contains("kind") || !state["kind"].is_string()) reject(path + ".kind", "missing");
  const auto kind = state["kind"].get<std::string>();
  const auto found = state_keys().find(kind);
  if (found == state_keys().end()) reject(path + ".kind", "unknown state kind '" + kind + "'");
  for (const auto& [key, value] : state.items()) {
    if (!found->second.count(key)) reject(path + "." + key, "unknown key for kind " + kind);
    if (key == "j" && !value.is_number_integer()) reject(path + ".j", "expected an integer");
    if (key != "kind" && key != "j" && !value.is_number()) {
      reject(path + "." + key, "expected a number");
    }
  }
}

void validate_drive_values(const Json& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    const std::string path = "drive.values[" + std::to_string(i) + "]";
    if (v.is_number()) continue;
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) continue;
    reject(path, "expected a number or a [re, im] pair");
  }
}

void validate_multibag(const Json& multi) {
  if (!multi.is_object()) reject("multibag", "expected an object");
  for (const auto& [key, value] : multi.items()) {
    if (key == "n_spikes") {
      if (!value.is_number_integer()) reject("multibag.n_spikes", "expected an integer");
    } else if (key == "fluctuating") {
      if (!value.is_array()) reject("multibag.fluctuating", "expected an array");
      for (const auto& v : value) {
        if (!v.is_number_integer()) reject("multibag.fluctuating", "expected integers");
      }
    } else if (key == "omegas") {
      if (!value.is_array()) reject("multibag.omegas", "expected an array");
      validate_numbers(value, "multibag.omegas");
    } else {
      reject("multibag." + key, "unknown key");
    }
  }
  for (const char* key : {"n_spikes", "fluctuating", "omegas"}) {
    if (!multi.contains(key)) reject(std::string("multibag.") + key, "missing");
  }
}

void validate_against(const Json& doc, const Json& defaults, const std::string& path) {
  for (const auto& [key, value] : doc.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (path.empty() && key == "multibag") {
      validate_multibag(value);
      continue;
    }
    if (!defaults.contains(key)) reject(here, "unknown key");
    if (here == "transition.initial" || here == "transition.final") {
      validate_state(value, here);
      continue;
    }
    const Json& like = defaults[key];
    if (like.is_object()) {
      if (!value.is_object()) reject(here, "expected an object");
      validate_against(value, like, here);
      continue;
    }
    require_same_kind(value, like, here);
    if (here == "drive.values") {
      validate_drive_values(value);
    } else if (value.is_array()) {
      validate_numbers(value, here);
    }
  }
}

std::vector<std::string> split_path(const std::string& dotted) {
  std::vector<std::string> parts;
  std::stringstream stream(dotted);
  std::string part;
  while (std::getline(stream, part, '.')) {
    if (part.empty()) throw InvalidArgument("--set: empty path component in '" + dotted + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw InvalidArgument("--set: empty key");
  return parts;
}

double number_at(const Json& section, const char* key) { return section.at(key).get<double>(); }

}  // namespace

Json default_scenario() {
  return Json{
      {"cavity",
       {{"length", std::numbers::pi}, {"epsilon", 0.01}, {"omega_mech", 2.0}, {"n_fermion_modes", 2}}},
      {"drive",
       {{"kind", "off"}, {"g", 0.0}, {"nu", 1.0}, {"times", Json::array()}, {"values", Json::array()}}},
      {"transition",
       {{"k", 0},
        {"k_prime", 1},
        {"initial", {{"kind", "fock"}, {"j", 1}}},
        {"final", {{"kind", "vacuum"}}},
        {"formula", "general"}}},
      {"time", {{"t_start", 0.0}, {"t_end", 10.0}, {"n_points", 101}}},
      {"sweep", {{"g", {0.0, 0.5, 1.0}}, {"n_min", 0.0}, {"n_max", 6.0}, {"n_step", 0.05}}},
      {"oracle", {{"n_boson_levels", 4}, {"steps", 4000}, {"t_final", 10.0}, {"n_samples", 101}}},
      {"output", {{"plots", false}}},
  };
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("--set expects key=value, got '" + assignment + "'");
  }
  const auto parts = split_path(assignment.substr(0, eq));
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    Json& child = (*node)[parts[i]];
    if (child.is_null()) child = Json::object();
    if (!child.is_object()) {
      throw InvalidArgument("--set: '" + parts[i] + "' is not a section");
    }
    node = &child;
  }
  (*node)[parts.back()] = std::move(value);
}

void validate_scenario(const Json& doc) {
  if (!doc.is_object()) reject("<root>", "expected an object");
  validate_against(doc, default_scenario(), "");
}

Json load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path.string() + "'");
  Json file = Json::parse(in, nullptr, false);
  if (file.is_discarded()) throw InvalidArgument("config: '" + path.string() + "' is not valid JSON");
  validate_scenario(file);

  Json doc = default_scenario();
  // State objects are replaced as a whole: their keys depend on the kind.
  if (file.contains("transition")) {
    for (const char* which : {"initial", "final"}) {
      if (file["transition"].contains(which)) doc["transition"][which] = file["transition"][which];
    }
  }
  doc.merge_patch(file);
  for (const auto& assignment : overrides) apply_override(doc, assignment);
  validate_scenario(doc);
  return doc;
}

CavityConfig cavity_from(const Json& doc) {
  const Json& c = doc.at("cavity");
  CavityConfig cfg;
  cfg.length = number_at(c, "length");
  cfg.epsilon = number_at(c, "epsilon");
  cfg.omega_mech = number_at(c, "omega_mech");
  cfg.n_fermion_modes = c.at("n_fermion_modes").get<int>();
  cfg.validate();
  return cfg;
}

DriveSpec drive_from(const Json& doc) {
  const Json& d = doc.at("drive");
  const auto kind = d.at("kind").get<std::string>();
  if (kind == "off") return DriveSpec::off();
  if (kind == "impulsive") return DriveSpec::impulsive(number_at(d, "g"), number_at(d, "nu"));
  if (kind == "sampled") {
    std::vector<Complex> values;
    for (const auto& v : d.at("values")) {
      values.push_back(v.is_array() ? Complex(v[0].get<double>(), v[1].get<double>())
                                    : Complex(v.get<double>(), 0.0));
    }
    return DriveSpec::sampled(d.at("times").get<std::vector<double>>(), std::move(values));
  }
  throw InvalidArgument("config: drive.kind: unknown drive kind '" + kind + "'");
}

BosonState state_from(const Json& state) {
  const auto kind = state.at("kind").get<std::string>();
  auto num = [&](const char* key) { return state.value(key, 0.0); };
  if (kind == "vacuum") return BosonState::vacuum();
  if (kind == "fock") return BosonState::fock(state.value("j", 0));
  if (kind == "coherent") return BosonState::coherent(CoherentParams(num("beta_abs"), num("theta")));
  if (kind == "squeezed") return BosonState::squeezed(SqueezeParams(num("r"), num("phi")));
  if (kind == "squeezed_coherent") {
    return BosonState::squeezed_coherent(CoherentParams(num("beta_abs"), num("theta")),
                                         SqueezeParams(num("r"), num("phi")));
  }
  throw InvalidArgument("config: unknown state kind '" + kind + "'");
}

TransitionSpec transition_from(const Json& doc) {
  const Json& t = doc.at("transition");
  TransitionSpec spec{t.at("k").get<int>(),     t.at("k_prime").get<int>(),
                      state_from(t.at("initial")), state_from(t.at("final")),
                      cavity_from(doc),         drive_from(doc)};
  spec.validate();
  return spec;
}

MultiBagConfig multibag_from(const Json& doc) {
  const Json& m = doc.at("multibag");
  MultiBagConfig multi;
  multi.base = cavity_from(doc);
  multi.n_spikes = m.at("n_spikes").get<int>();
  multi.fluctuating = m.at("fluctuating").get<std::vector<int>>();
  multi.omegas = m.at("omegas").get<std::vector<double>>();
  multi.drives.assign(multi.fluctuating.size(), DriveSpec::off());
  multi.validate();
  return multi;
}

std::vector<double> phonon_grid_from(const Json& doc) {
  const Json& s = doc.at("sweep");
  const double lo = number_at(s, "n_min");
  const double hi = number_at(s, "n_max");
  const double step = number_at(s, "n_step");
  if (!(lo >= 0.0 && hi >= lo && step > 0.0)) {
    throw InvalidArgument("config: sweep: need 0 <= n_min <= n_max and n_step > 0");
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1000000) throw InvalidArgument("config: sweep: grid has more than 1e6 points");
  std::vector<double> grid;
  grid.reserve(count);
  // Snap to 1e-12 so that integer points land exactly on integers.
  for (long i = 0; i < count; ++i) grid.push_back(std::round((lo + i * step) * 1e12) / 1e12);
  return grid;
}

std::vector<double> time_grid_from(const Json& doc) {
  const Json& t = doc.at("time");
  const double start = number_at(t, "t_start");
  const double end = number_at(t, "t_end");
  const int n = t.at("n_points").get<int>();
  if (!(start >= 0.0 && end >= start) || n < 1) {
    throw InvalidArgument("config: time: need 0 <= t_start <= t_end and n_points >= 1");
  }
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(n == 1 ? start : start + (end - start) * i / (n - 1));
  return grid;
}

}  // namespace fermibag::cli
