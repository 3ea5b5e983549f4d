#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "knobs.hpp"

namespace mopctl {

struct Context {
  const Knobs& knobs;
  std::filesystem::path out_dir;
  int workers = 1;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> outputs;  // files written, relative to out_dir

  std::filesystem::path file(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
};

void add_equilibrium_knobs(CLI::App* app, Knobs& k);
void add_kernel_knobs(CLI::App* app, Knobs& k);
void add_sample_knobs(CLI::App* app, Knobs& k);
void add_mop_knobs(CLI::App* app, Knobs& k);

// Each returns the process exit code.
int cmd_equilibrium(Context& ctx);
int cmd_kernel(Context& ctx);
int cmd_sample(Context& ctx);
int cmd_mop(Context& ctx);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace mopctl
