#include "knobs.hpp"

#include <cmath>
#include <sstream>

namespace mopctl {

namespace {

double to_real(const std::string& knob, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("--" + knob + ": expected a number, got '" + text + "'");
}

long to_integer(const std::string& knob, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("--" + knob + ": expected an integer, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string json_to_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += json_to_text(key, v[i]);
    }
    return s;
  }
  throw ConfigError("config key '" + key + "' has an unsupported value type");
}

}  // namespace

void Knobs::add(CLI::App* app, const std::string& name, const std::string& def, const std::string& help) {
  index_[name] = entries_.size();
  auto* opt = app->add_option("--" + name, help);
  opt->default_str(def.empty() ? "(required)" : def);
  entries_.push_back({name, def, "", opt});
}

void Knobs::resolve(const nlohmann::json& config, std::set<std::string>& used) {
  for (auto& e : entries_) {
    if (!e.option->results().empty()) {
      e.value = e.option->results().back();
    } else if (config.contains(e.name)) {
      e.value = json_to_text(e.name, config.at(e.name));
      used.insert(e.name);
    } else if (!e.def.empty()) {
      e.value = e.def;
    } else {
      throw ConfigError("missing required option --" + e.name);
    }
    if (config.contains(e.name)) used.insert(e.name);
  }
}

const Knobs::Entry& Knobs::entry(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw std::logic_error("unknown knob " + name);
  return entries_[it->second];
}

const std::string& Knobs::str(const std::string& name) const { return entry(name).value; }

double Knobs::real(const std::string& name) const { return to_real(name, str(name)); }

long Knobs::integer(const std::string& name) const { return to_integer(name, str(name)); }

std::vector<double> Knobs::reals(const std::string& name) const {
  std::vector<double> out;
  for (const auto& s : split(str(name), ',')) out.push_back(to_real(name, s));
  if (out.empty()) throw ConfigError("--" + name + ": expected a comma-separated list");
  return out;
}

std::vector<int> Knobs::integers(const std::string& name) const {
  std::vector<int> out;
  for (const auto& s : split(str(name), ',')) out.push_back(static_cast<int>(to_integer(name, s)));
  if (out.empty()) throw ConfigError("--" + name + ": expected a comma-separated list");
  return out;
}

nlohmann::json Knobs::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& e : entries_) j[e.name] = e.value;
  return j;
}

std::vector<double> parse_range(const std::string& knob, const std::string& text, bool with_step) {
  const auto parts = split(text, ':');
  if (parts.size() != (with_step ? 3u : 2u))
    throw ConfigError("--" + knob + ": expected " + (with_step ? "lo:hi:step" : "lo:hi") + ", got '" + text + "'");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_real(knob, p));
  if (!(out[0] < out[1])) throw ConfigError("--" + knob + ": lo must be < hi");
  if (with_step && !(out[2] > 0.0)) throw ConfigError("--" + knob + ": step must be > 0");
  return out;
}

}  // namespace mopctl
