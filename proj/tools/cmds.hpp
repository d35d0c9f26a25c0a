#pragma once

// Subcommand registration for the wavepack CLI. Each register_* call wires
// one subcommand onto the CLI11 app; the callbacks throw
// std::invalid_argument / invariant_error / io_error and main maps those to
// exit codes 2 / 1 / 3.

#include <CLI11.hpp>

namespace wavepack::cli {

void register_verify(CLI::App& app);
void register_transform(CLI::App& app);
void register_packets(CLI::App& app);
void register_stats(CLI::App& app);
void register_train(CLI::App& app);
void register_evaluate(CLI::App& app);
void register_labels(CLI::App& app);

}  // namespace wavepack::cli
