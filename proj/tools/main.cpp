#include <cstdlib>
#include <iostream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "cli.hpp"
#include "dimerlab/common.hpp"

using namespace dimerlab;
using namespace dimerlab::cli;

namespace {

void print_error(const std::string& code, const std::string& message) {
  Json e;
  e["error"]["code"] = code;
  e["error"]["message"] = message;
  std::cerr << e.dump() << "\n";
}

struct Bound {
  const Command* cmd = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> single;
  std::map<std::string, std::vector<std::string>> multi;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimerlab: exact, Monte Carlo and multiscale computations for the interacting dimer model"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path, dump_path;
  int threads = 0;
  app.add_option("--config", config_path, "flat key = value config file; flags override it");
  app.add_option("--dump-config", dump_path, "write the resolved config to this file and exit");
  app.add_option("--threads", threads, "worker threads (overrides DIMERLAB_THREADS)");

  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& cmd : commands()) {
    auto b = std::make_unique<Bound>();
    b->cmd = &cmd;
    b->app = app.add_subcommand(cmd.name, cmd.help);
    for (const auto& p : cmd.params) {
      const std::string help = p.help + (p.fallback.empty() ? "" : " [" + p.fallback + "]");
      CLI::Option* opt = nullptr;
      if (p.is_flag) {
        b->flags[p.key] = false;
        opt = b->app->add_flag("--" + p.key, b->flags[p.key], help);
      } else if (p.multi) {
        opt = b->app->add_option("--" + p.key, b->multi[p.key], help);
      } else if (p.positional) {
        opt = b->app->add_option(p.key, b->single[p.key], help);
      } else {
        opt = b->app->add_option("--" + p.key, b->single[p.key], help);
      }
      b->options[p.key] = opt;
    }
    bound.push_back(std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("InvalidConfig", e.what());
    return 2;
  }

  try {
    if (threads > 0) setenv("DIMERLAB_THREADS", std::to_string(threads).c_str(), 1);
    for (const auto& b : bound) {
      if (!b->app->parsed()) continue;
      Config cfg;
      cfg.command = b->cmd->name;
      std::set<std::string> known;
      for (const auto& p : b->cmd->params) {
        cfg.values[p.key] = p.fallback;
        known.insert(p.key);
      }
      if (!config_path.empty()) {
        for (const auto& [k, v] : read_config_file(config_path)) {
          if (k == "command") {
            if (v != cfg.command)
              throw Error("InvalidConfig", "config file is for '" + v + "', not '" + cfg.command + "'");
            continue;
          }
          if (!known.count(k)) throw Error("InvalidConfig", "unknown key '" + k + "' for " + cfg.command);
          cfg.values[k] = v;
        }
      }
      for (const auto& p : b->cmd->params) {
        if (b->options[p.key]->count() == 0) continue;
        if (p.is_flag) {
          cfg.values[p.key] = b->flags[p.key] ? "true" : "false";
        } else if (p.multi) {
          std::string joined;
          for (const auto& v : b->multi[p.key]) joined += (joined.empty() ? "" : ";") + v;
          cfg.values[p.key] = joined;
        } else {
          cfg.values[p.key] = b->single[p.key];
        }
      }
      if (!dump_path.empty()) {
        write_output(dump_path, cfg.dump());
        return 0;
      }
      return b->cmd->run(cfg);
    }
    throw Error("InvalidConfig", "no subcommand");
  } catch (const Error& e) {
    // what() carries a "code: " prefix.
    std::string msg = e.what();
    if (msg.rfind(e.code() + ": ", 0) == 0) msg = msg.substr(e.code().size() + 2);
    print_error(e.code(), msg);
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
}
