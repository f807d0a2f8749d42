#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unilin/unilin.h"

using json = nlohmann::ordered_json;

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { ul_free_string(s); }
};

json read_json_arg(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot open " + arg);
  return json::parse(in);
}

json local_error(const std::string& message) {
  return {{"error", {{"code", "InvalidArgument"}, {"message", message}, {"exit", 2}}},
          {"tool", "unilin"},
          {"version", ul_version()}};
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tools for unipotent orbits, Diophantine conditions and certificates"};
  std::string command, config_arg, params_arg, constants_arg, out_path, csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, m, D0, p, prec;
  std::optional<std::string> poly, eta, k, grid;
  std::vector<long> w;
  bool list = false;

  app.add_option("command", command, "command to run (see --list)");
  app.add_flag("--list", list, "print the available commands");
  app.add_option("--config", config_arg, "config file or inline JSON: {command, params, constants, seed, threads}");
  app.add_option("--params", params_arg, "parameter file or inline JSON object");
  app.add_option("--constants", constants_arg, "constant overrides, file or inline JSON object");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "write the CSV rows here");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--threads", threads, "worker threads, 0 for all cores");
  app.add_option("--m", m, "nss-bounds: number of polynomials");
  app.add_option("--D0", D0, "nss-bounds, nss-verify: degree bound");
  app.add_option("--p", p, "hensel: prime");
  app.add_option("--poly", poly, "polynomial expression");
  app.add_option("--w", w, "hensel: starting point coordinates");
  app.add_option("--prec", prec, "hensel: target p-adic precision");
  app.add_option("--eta", eta, "orbit commands: threshold eta");
  app.add_option("--k", k, "orbit commands: time step index");
  app.add_option("--grid", grid, "orbit commands: sample count");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    std::cout << ul_commands();
    return 0;
  }

  json config;
  try {
    if (!config_arg.empty()) config = read_json_arg(config_arg);
    else config = json::object();
    if (!command.empty()) config["command"] = command;
    if (!config.contains("command")) throw std::runtime_error("no command given; try --list");
    json params = config.contains("params") ? config["params"] : json::object();
    if (!params_arg.empty()) {
      json extra = read_json_arg(params_arg);
      if (!extra.is_object()) throw std::runtime_error("--params must be a JSON object");
      for (const auto& [key, v] : extra.items()) params[key] = v;
    }
    if (m) params["m"] = *m;
    if (D0) params["D0"] = *D0;
    if (p) params["p"] = *p;
    if (poly) params["poly"] = *poly;
    if (!w.empty()) params["w"] = w;
    if (prec) params["prec"] = *prec;
    if (eta) params["eta"] = *eta;
    if (k) params["k"] = std::stol(*k);
    if (grid) params["grid"] = std::stol(*grid);
    config["params"] = params;
    if (!constants_arg.empty()) config["constants"] = read_json_arg(constants_arg);
    if (seed) config["seed"] = *seed;
    if (threads) config["threads"] = *threads;
  } catch (const std::exception& e) {
    std::cout << local_error(e.what()).dump(2) << "\n";
    return 2;
  }

  ul_context* ctx = ul_context_new();
  if (!ctx) return 3;
  Owned report, csv;
  ul_status s = ul_run_config(ctx, config.dump().c_str(), &report.s, &csv.s);
  if (s != UL_OK) {
    std::cout << json::parse(ul_last_error(ctx)).dump(2) << "\n";
    ul_context_free(ctx);
    return ul_exit_code(s);
  }
  int code = 0;
  if (out_path.empty()) {
    std::cout << report.s << "\n";
  } else {
    if (!write_file(out_path, std::string(report.s) + "\n")) code = 2;
    std::cout << ul_last_summary(ctx) << "\n";
  }
  if (!csv_path.empty() && !write_file(csv_path, csv.s)) code = 2;
  if (code) std::cout << local_error("cannot write output file").dump(2) << "\n";
  ul_context_free(ctx);
  return code;
}
