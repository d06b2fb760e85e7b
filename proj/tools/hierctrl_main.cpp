// hierctrl CLI: thin wrapper over the C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hierctrl/hierctrl.h"

int main(int argc, char** argv) {
  CLI::App app{"hierarchic control experiments for a 1-D degenerate parabolic equation"};
  app.set_version_flag("--version", std::string(hc_version()));

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const char* subs[] = {"solve", "follower", "leader", "sweep-eps", "sweep-gamma", "verify", "all"};
  for (const char* name : subs) {
    CLI::App* sc = app.add_subcommand(name);
    sc->add_option("--config", config_path, "path to the run config (JSON)")->required();
    sc->add_option("--out", out_dir, "output directory (defaults to the config's output_dir)");
    sc->add_option("--seed", seed, "override the config RNG seed")->each([&](const std::string&) {
      seed_set = true;
    });
  }
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);
  std::string sub = app.get_subcommands().front()->get_name();

  hc_session* s = hc_session_create();
  if (!s) {
    std::fprintf(stderr, "error: out of memory\n");
    return 1;
  }

  int rc = 0;
  hc_status st = hc_load_config_file(s, config_path.c_str());
  if (st == HC_OK && !out_dir.empty()) st = hc_set_output_dir(s, out_dir.c_str());
  if (st == HC_OK && seed_set) st = hc_set_seed(s, seed);
  if (st == HC_OK) st = hc_run(s, sub.c_str());

  if (st != HC_OK) {
    std::fprintf(stderr, "error: %s\n", hc_last_error(s));
    rc = static_cast<int>(st);
  }
  const char* summary = hc_summary_json(s);
  if (summary && summary[0] != '\0') std::printf("%s\n", summary);

  hc_session_destroy(s);
  return rc;
}
