#include "hierctrl/hierctrl.h"

#include <exception>
#include <string>

#include "hierctrl/config.hpp"
#include "hierctrl/errors.hpp"
#include "hierctrl/runner.hpp"

struct hc_session {
  hierctrl::RunConfig config;
  bool config_loaded = false;
  std::string output_dir;
  bool seed_override = false;
  std::uint64_t seed = 0;
  std::string last_error;
  std::string summary;
};

namespace {

hc_status fail(hc_session* s, hc_status code, const std::string& msg) {
  if (s) s->last_error = msg;
  return code;
}

template <typename Fn>
hc_status guarded(hc_session* s, Fn&& fn) {
  if (!s) return HC_ERR;
  try {
    s->last_error.clear();
    return fn();
  } catch (const hierctrl::RegionError& e) {
    return fail(s, HC_ERR_REGIONS, e.what());
  } catch (const hierctrl::ConfigError& e) {
    return fail(s, HC_ERR_CONFIG, e.what());
  } catch (const hierctrl::SolveError& e) {
    return fail(s, HC_ERR_SOLVER, e.what());
  } catch (const std::exception& e) {
    return fail(s, HC_ERR, e.what());
  }
}

}  // namespace

extern "C" {

hc_session* hc_session_create(void) { return new (std::nothrow) hc_session(); }

void hc_session_destroy(hc_session* s) { delete s; }

hc_status hc_load_config_file(hc_session* s, const char* path) {
  return guarded(s, [&]() -> hc_status {
    if (!path) return fail(s, HC_ERR_CONFIG, "null config path");
    s->config = hierctrl::load_config_file(path);
    s->config_loaded = true;
    return HC_OK;
  });
}

hc_status hc_load_config_json(hc_session* s, const char* json_text) {
  return guarded(s, [&]() -> hc_status {
    if (!json_text) return fail(s, HC_ERR_CONFIG, "null config text");
    s->config = hierctrl::parse_config(json_text);
    s->config_loaded = true;
    return HC_OK;
  });
}

hc_status hc_set_output_dir(hc_session* s, const char* dir) {
  if (!s) return HC_ERR;
  if (!dir) return fail(s, HC_ERR_CONFIG, "null output dir");
  s->output_dir = dir;
  return HC_OK;
}

hc_status hc_set_seed(hc_session* s, uint64_t seed) {
  if (!s) return HC_ERR;
  s->seed_override = true;
  s->seed = seed;
  return HC_OK;
}

hc_status hc_run(hc_session* s, const char* subcommand) {
  return guarded(s, [&]() -> hc_status {
    if (!subcommand) return fail(s, HC_ERR_CONFIG, "null subcommand");
    if (!s->config_loaded) return fail(s, HC_ERR_CONFIG, "no config loaded");
    hierctrl::RunConfig cfg = s->config;
    if (s->seed_override) cfg.seed = s->seed;
    hierctrl::RunResult r = hierctrl::run_subcommand(subcommand, cfg, s->output_dir);
    s->summary = r.summary_json;
    switch (r.exit_code) {
      case 0:
        return HC_OK;
      case 2:
        return fail(s, HC_ERR_CONFIG, "run failed: invalid configuration (see summary.json)");
      case 3:
        return fail(s, HC_ERR_REGIONS, "run failed: region invariants violated (see summary.json)");
      case 4:
        return fail(s, HC_ERR_SOLVER, "run failed: solver did not converge (see summary.json)");
      default:
        return fail(s, HC_ERR, "run failed: one or more checks did not pass (see summary.json)");
    }
  });
}

const char* hc_last_error(const hc_session* s) { return s ? s->last_error.c_str() : ""; }

const char* hc_summary_json(const hc_session* s) { return s ? s->summary.c_str() : ""; }

const char* hc_version(void) { return hierctrl::version_string(); }

}  // extern "C"
