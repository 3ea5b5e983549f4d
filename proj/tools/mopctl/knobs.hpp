#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace mopctl {

// Bad or missing configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Named string-valued settings resolved as: command-line flag, then config
// file entry, then default. An empty default means "required".
class Knobs {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& def, const std::string& help);

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  // Fills unset knobs from the config object; keys are consumed into `used`.
  void resolve(const nlohmann::json& config, std::set<std::string>& used);

  const std::string& str(const std::string& name) const;
  double real(const std::string& name) const;
  long integer(const std::string& name) const;
  std::vector<double> reals(const std::string& name) const;
  std::vector<int> integers(const std::string& name) const;
  bool is_auto(const std::string& name) const { return str(name) == "auto"; }

  nlohmann::json to_json() const;

 private:
  struct Entry {
    std::string name;
    std::string def;
    std::string value;
    CLI::Option* option = nullptr;
  };
  const Entry& entry(const std::string& name) const;

  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

// "lo:hi" or "lo:hi:step".
std::vector<double> parse_range(const std::string& knob, const std::string& text, bool with_step);

}  // namespace mopctl
