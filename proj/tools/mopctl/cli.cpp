#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "commands.hpp"
#include "mop/error.hpp"

namespace mopctl {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Command {
  CLI::App* app = nullptr;
  Knobs knobs;
  CLI::Option* help = nullptr;
  std::function<int(Context&)> run;
};

std::string default_output_dir() {
  const char* env = std::getenv("MOP_OUTPUT_DIR");
  return env && *env ? env : "./out";
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ConfigError("config file must contain a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

int map_error(const mop::Error& e) {
  return mop::is_numerical_degeneracy(e.code()) ? exit_degenerate : exit_config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mopctl: multiple orthogonal polynomial ensembles, kernels and equilibrium problems", "mopctl"};
  app.set_help_flag();
  auto* help = app.add_flag("-h,--help", "Print this help (all subcommands and knobs) and exit");
  app.add_flag("--version", "Print the version and exit");
  app.fallthrough();
  app.require_subcommand(0, 1);

  Knobs global;
  global.add(&app, "config", "none", "JSON file with knob values (flags override it)");
  global.add(&app, "output-dir", "auto", "Output directory; auto = $MOP_OUTPUT_DIR, else ./out");
  global.add(&app, "workers", "1", "Worker threads; results do not depend on it");

  std::map<std::string, Command> commands;
  const auto define = [&](const std::string& name, const std::string& desc,
                          void (*add)(CLI::App*, Knobs&), int (*fn)(Context&)) {
    auto& c = commands[name];
    c.app = app.add_subcommand(name, desc);
    c.app->set_help_flag();
    c.help = c.app->add_flag("-h,--help", "Print this help and exit");
    add(c.app, c.knobs);
    c.run = fn;
  };
  define("equilibrium", "Minimize a discretized (vector) equilibrium problem", add_equilibrium_knobs,
         cmd_equilibrium);
  define("kernel", "Evaluate finite-n or limiting correlation kernels", add_kernel_knobs, cmd_kernel);
  define("sample", "Draw seeded random-matrix spectra", add_sample_knobs, cmd_sample);
  define("mop", "Compute a multiple orthogonal polynomial", add_mop_knobs, cmd_mop);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }

  if (help->count() > 0) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  }
  if (app.get_option("--version")->count() > 0) {
    out << "mopctl " << kVersion << "\n";
    return exit_ok;
  }
  for (auto& [name, c] : commands) {
    if (c.help->count() > 0) {
      out << c.app->help();
      return exit_ok;
    }
  }

  try {
    nlohmann::json config = nlohmann::json::object();
    const auto& cfg_opt = app.get_option("--config")->results();
    if (!cfg_opt.empty() && cfg_opt.back() != "none") config = load_config(cfg_opt.back());

    std::string name;
    for (auto& [n, c] : commands)
      if (c.app->parsed()) name = n;
    if (name.empty() && config.contains("command") && config["command"].is_string())
      name = config["command"].get<std::string>();
    if (name.empty()) throw ConfigError("missing subcommand (equilibrium, kernel, sample or mop)");
    auto it = commands.find(name);
    if (it == commands.end()) throw ConfigError("unknown command '" + name + "'");
    Command& cmd = it->second;

    std::set<std::string> used{"command", "config"};
    global.resolve(config, used);
    cmd.knobs.resolve(config, used);
    for (const auto& [key, value] : config.items())
      if (!used.count(key)) throw ConfigError("unknown config key '" + key + "' for command " + name);

    const long workers = global.integer("workers");
    if (workers < 1 || workers > 256) throw ConfigError("--workers must be in [1, 256]");
    const std::string dir = global.is_auto("output-dir") ? default_output_dir() : global.str("output-dir");

    Context ctx{cmd.knobs, dir, static_cast<int>(workers), out, err, {}};
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());

    int code;
    try {
      code = cmd.run(ctx);
    } catch (const mop::Error& e) {
      err << "error: " << e.what() << "\n";
      code = map_error(e);
    }

    nlohmann::json config_echo = cmd.knobs.to_json();
    config_echo["output-dir"] = dir;
    config_echo["workers"] = global.str("workers");
    nlohmann::json manifest{{"tool", "mopctl"},
                            {"version", kVersion},
                            {"command", name},
                            {"config", config_echo},
                            {"outputs", ctx.outputs},
                            {"exit_code", code}};
    write_json(ctx.out_dir / "manifest.json", manifest);
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const mop::Error& e) {
    err << "error: " << e.what() << "\n";
    return map_error(e);
  }
}

}  // namespace mopctl
