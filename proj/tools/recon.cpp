// recon: run reconstruction experiments from JSON configurations.
//
//   recon reconstruct <cfg>          one solver run
//   recon isotropy <cfg>             upright vs rotated acquisition
//   recon benchmark <cfg>            MP variants against GADMM
//   recon mask <spec> -o <file>      write a sampling mask as PGM
//   recon metrics <img> <ref>        SNR, SSIM and HFEN of an image
//
// Exit codes: 0 success, 1 output or internal failure, 2 invalid
// configuration or input, 3 solver abort.

#include <CLI11.hpp>

#include <iostream>

#include "ritv/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rotation-invariant TV + BM3D MRI reconstruction experiments"};
  app.require_subcommand(1);

  ritv::Overrides overrides;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t iters = 0;
  std::string out;

  auto add_config_command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "JSON configuration file")->required();
    sub->add_option("--seed", seed, "override the configuration seed");
    sub->add_option("--iters", iters, "override the iteration count of every solver")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "override the output directory");
    return sub;
  };
  CLI::App* reconstruct = add_config_command("reconstruct", "reconstruct once and write image, log and summary");
  CLI::App* isotropy = add_config_command("isotropy", "compare upright and rotated acquisitions");
  CLI::App* benchmark = add_config_command("benchmark", "compare solver variants on the same data");

  std::string mask_spec, mask_out;
  CLI::App* mask = app.add_subcommand("mask", "write a sampling mask, e.g. radial:n=128,spokes=12");
  mask->add_option("spec", mask_spec, "kind[:n=..,rate=..,spokes=..,seed=..,sym=0|1]")->required();
  mask->add_option("-o,--out", mask_out, "output PGM")->required();

  std::string image, reference;
  CLI::App* metrics = app.add_subcommand("metrics", "SNR, SSIM and HFEN of an image against a reference");
  metrics->add_option("image", image, "PGM or grid file")->required();
  metrics->add_option("reference", reference, "PGM or grid file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ritv::kExitOk : ritv::kExitInvalidConfig;
  }

  for (CLI::App* sub : {reconstruct, isotropy, benchmark}) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) overrides.seed = seed;
    if (sub->count("--iters")) overrides.iters = iters;
    if (sub->count("--out")) overrides.out = out;
    return ritv::run_config_command(sub->get_name(), config, overrides, std::cout, std::cerr);
  }
  try {
    if (mask->parsed()) return ritv::cmd_mask(mask_spec, mask_out, std::cout);
    return ritv::cmd_metrics(image, reference, std::cout);
  } catch (const ritv::ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return ritv::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ritv::kExitFailure;
  }
}
