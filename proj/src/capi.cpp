#include "unilin/unilin.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "unilin/dispatch.hpp"

struct ul_context {
  unilin::json constants = unilin::json::object();
  std::uint64_t seed = 0;
  int threads = 0;
  std::string last_error;
  std::string last_summary;
};

namespace {

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

static_assert(static_cast<int>(unilin::Errc::Internal) == UL_ERR_INTERNAL, "status codes mirror Errc");

ul_status to_status(unilin::Errc e) { return static_cast<ul_status>(static_cast<int>(e)); }

template <class F>
ul_status guarded(ul_context* ctx, F&& f) {
  if (!ctx) return UL_ERR_NULL_HANDLE;
  try {
    f();
    ctx->last_error.clear();
    return UL_OK;
  } catch (const unilin::Error& e) {
    ctx->last_error = unilin::error_json(e.code(), e.what()).dump();
    return to_status(e.code());
  } catch (const unilin::json::exception& e) {
    ctx->last_error = unilin::error_json(unilin::Errc::InvalidArgument, e.what()).dump();
    return UL_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    ctx->last_error = unilin::error_json(unilin::Errc::Internal, e.what()).dump();
    return UL_ERR_INTERNAL;
  }
}

void emit(ul_context* ctx, const unilin::RunResult& r, char** report_json, char** csv) {
  ctx->last_summary = r.summary;
  if (report_json) *report_json = dup(r.report.dump(2));
  if (csv) *csv = dup(r.csv);
}

unilin::json parse(const char* s) {
  if (!s || !*s) return unilin::json::object();
  return unilin::json::parse(s);
}

}  // namespace

extern "C" {

const char* ul_version(void) { return UNILIN_VERSION; }

ul_context* ul_context_new(void) { return new (std::nothrow) ul_context(); }

void ul_context_free(ul_context* ctx) { delete ctx; }

ul_status ul_set_constants(ul_context* ctx, const char* constants_json) {
  return guarded(ctx, [&] {
    auto j = parse(constants_json);
    unilin::constants_from(j);
    ctx->constants = j;
  });
}

ul_status ul_set_seed(ul_context* ctx, uint64_t seed) {
  return guarded(ctx, [&] { ctx->seed = seed; });
}

ul_status ul_set_threads(ul_context* ctx, int threads) {
  return guarded(ctx, [&] {
    unilin::require(threads >= 0, "thread count must be non-negative");
    ctx->threads = threads;
  });
}

ul_status ul_run(ul_context* ctx, const char* command, const char* params_json, char** report_json, char** csv) {
  return guarded(ctx, [&] {
    unilin::require(command != nullptr, "command is null");
    unilin::RunConfig cfg;
    cfg.command = command;
    cfg.params = parse(params_json);
    cfg.constants = ctx->constants;
    cfg.seed = ctx->seed;
    cfg.threads = ctx->threads;
    emit(ctx, unilin::dispatch(cfg), report_json, csv);
  });
}

ul_status ul_run_config(ul_context* ctx, const char* config_json, char** report_json, char** csv) {
  return guarded(ctx, [&] {
    auto cfg = unilin::config_from_json(parse(config_json));
    if (cfg.constants.empty()) cfg.constants = ctx->constants;
    emit(ctx, unilin::dispatch(cfg), report_json, csv);
  });
}

const char* ul_last_summary(const ul_context* ctx) { return ctx ? ctx->last_summary.c_str() : ""; }

const char* ul_last_error(const ul_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

const char* ul_status_name(ul_status status) {
  if (status == UL_OK) return "Ok";
  if (status == UL_ERR_NULL_HANDLE) return "NullHandle";
  return unilin::errc_name(static_cast<unilin::Errc>(status));
}

int ul_exit_code(ul_status status) {
  if (status == UL_OK) return 0;
  if (status == UL_ERR_INTERNAL) return 3;
  return 2;
}

const char* ul_commands(void) {
  static const std::string names = [] {
    std::string out;
    for (const auto& n : unilin::command_names()) out += n + "\n";
    return out;
  }();
  return names.c_str();
}

void ul_free_string(char* s) { std::free(s); }

}  // extern "C"
