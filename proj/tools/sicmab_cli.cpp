// sicmab: run LoRa parameter-selection experiments and inspect the kernels.
//
//   sicmab run    --scenario scenarios/paper.scenario --method both --out results/
//   sicmab detect --input acks.txt --window 10 --shift 5 --theta 20
//   sicmab toa    --sf 7 --bw 125000 --payload 50 --preamble 8
//   sicmab show   --scenario my.scenario

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "sicmab/change_detect.hpp"
#include "sicmab/energy_model.hpp"
#include "sicmab/error.hpp"
#include "sicmab/kernels.hpp"
#include "sicmab/scenario.hpp"
#include "sicmab/simulation.hpp"

namespace {

using namespace sicmab;

std::vector<std::uint8_t> read_bits(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bits;
  std::size_t line = 1;
  for (auto it = std::istreambuf_iterator<char>(in); it != std::istreambuf_iterator<char>(); ++it) {
    const char c = *it;
    if (c == '0' || c == '1') {
      bits.push_back(c == '1');
    } else if (c == '\n') {
      ++line;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      throw std::runtime_error(path + ":" + std::to_string(line) + ": unexpected character '" +
                               std::string(1, c) + "'");
    }
  }
  return bits;
}

int cmd_run(const std::optional<std::string>& scenario_path, const std::string& method,
            std::optional<std::uint64_t> seed, std::optional<std::uint32_t> replications,
            const std::string& out_dir, unsigned threads) {
  Scenario scenario = scenario_path ? load_scenario(*scenario_path) : Scenario{};
  if (seed) scenario.base_seed = *seed;
  if (replications) scenario.replications = *replications;
  scenario.validate();

  std::vector<Method> methods;
  if (method == "proposed" || method == "both") methods.push_back(Method::proposed);
  if (method == "baseline" || method == "both") methods.push_back(Method::baseline);

  std::vector<MetricsReport> reports;
  for (const Method m : methods) reports.push_back(run(scenario, m, threads));
  emit_csv(reports, out_dir);

  std::printf("%-9s %14s %16s %18s\n", "method", "success_rate", "ee_bit_per_J", "detect_latency");
  for (const auto& r : reports) {
    std::size_t resets = 0;
    for (const auto& rep : r.replications) {
      for (const auto& dev : rep.reset_indices) resets += dev.size();
    }
    std::printf("%-9s %14.4f %16.2f %18s   (%zu resets)\n", std::string(to_string(r.method)).c_str(),
                r.overall_success_rate, r.overall_energy_efficiency,
                r.mean_detection_latency ? std::to_string(*r.mean_detection_latency).c_str() : "-",
                resets);
  }
  std::printf("wrote CSVs to %s (kernels: %s)\n", out_dir.c_str(),
              std::string(kernels::name(kernels::active().isa)).c_str());
  return 0;
}

int cmd_detect(const std::string& input, int window, int shift, double theta) {
  const auto bits = read_bits(input);
  const auto stats = windowize(bits, window, shift);
  std::printf("length %zu\n", bits.size());
  if (!stats) {
    std::printf("insufficient data: need at least %d observations\n", window);
    return 0;
  }
  const SicResult r = detect(*stats, theta);
  std::printf("windows %zu\n", stats->window_count());
  std::printf("sic_h0 %.10g\n", r.sic_h0);
  std::printf("sic_h1_min %.10g\n", r.sic_h1_min);
  std::printf("best_split %zu\n", r.best_split);
  std::printf("statistic %.10g\n", r.statistic);
  std::printf("detected %s\n", r.detected ? "true" : "false");
  return 0;
}

int cmd_toa(const RadioParams& radio, std::optional<int> tx_dbm) {
  const Scenario defaults;
  const EnergyProfile profile = defaults.energy_profile();
  const int dbm = tx_dbm.value_or(defaults.tx_powers_dbm.front());
  const TransmissionCost c = transmission_cost(radio, profile, dbm);
  std::printf("payload_symbols %d\n", payload_symbol_count(radio));
  std::printf("t_symbol_s %.10g\n", c.t_symbol_s);
  std::printf("t_preamble_s %.10g\n", c.t_preamble_s);
  std::printf("t_payload_s %.10g\n", c.t_payload_s);
  std::printf("t_toa_s %.10g\n", c.t_toa_s);
  std::printf("tx_dbm %d\n", dbm);
  std::printf("e_toa_j %.10g\n", c.e_toa_j);
  std::printf("e_active_j %.10g\n", c.e_active_j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIC-aided UCB1-tuned parameter selection for LoRa networks"};
  app.require_subcommand(1);

  std::optional<std::string> scenario_path;
  std::string method = "both";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> replications;
  std::string out_dir = "results";
  unsigned threads = 0;
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write CSV metrics");
  run_cmd->add_option("--scenario", scenario_path, "scenario YAML (default: built-in reference setup)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--method", method, "proposed | baseline | both")
      ->check(CLI::IsMember({"proposed", "baseline", "both"}));
  run_cmd->add_option("--seed", seed, "base seed (overrides the scenario)");
  run_cmd->add_option("--replications", replications, "replication count (overrides the scenario)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");

  std::string input;
  int window = 10;
  int shift = 5;
  double theta = 20.0;
  auto* detect_cmd = app.add_subcommand("detect", "run the SIC change test on a 0/1 file");
  detect_cmd->add_option("--input", input, "file of 0/1 characters")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--window", window, "window length W")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--shift", shift, "window shift F")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--theta", theta, "detection threshold");

  RadioParams radio;
  std::optional<int> tx_dbm;
  bool no_crc = false;
  bool implicit_header = false;
  auto* toa_cmd = app.add_subcommand("toa", "print airtime and energy for one transmission");
  toa_cmd->add_option("--sf", radio.spreading_factor, "spreading factor");
  toa_cmd->add_option("--bw", radio.bandwidth_hz, "bandwidth in Hz");
  toa_cmd->add_option("--payload", radio.payload_bytes, "payload bytes");
  toa_cmd->add_option("--preamble", radio.preamble_symbols, "preamble symbols");
  toa_cmd->add_option("--cr", radio.coding_rate, "coding rate index 1..4");
  toa_cmd->add_flag("--no-crc", no_crc, "disable payload CRC");
  toa_cmd->add_flag("--implicit-header", implicit_header, "implicit header mode");
  toa_cmd->add_flag("--ldro", radio.low_data_rate_optimize, "low data rate optimisation");
  toa_cmd->add_option("--tx-dbm", tx_dbm, "transmit power level for the energy figures");

  std::string show_path;
  auto* show_cmd = app.add_subcommand("show", "print a scenario with all defaults filled in");
  show_cmd->add_option("--scenario", show_path, "scenario YAML")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(scenario_path, method, seed, replications, out_dir, threads);
    if (*detect_cmd) return cmd_detect(input, window, shift, theta);
    if (*toa_cmd) {
      radio.crc_enabled = !no_crc;
      radio.explicit_header = !implicit_header;
      return cmd_toa(radio, tx_dbm);
    }
    if (*show_cmd) {
      std::cout << dump_scenario(show_path.empty() ? Scenario{} : load_scenario(show_path));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
