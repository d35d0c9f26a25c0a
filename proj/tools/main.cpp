#include <exception>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cmds.hpp"
#include "wavepack/errors.hpp"

// Exit codes: 0 ok, 1 invariant failure, 2 usage error, 3 I/O error.
int main(int argc, char** argv) {
  CLI::App app{"wavepack: boundary-wavelet packet transforms, statistics, and a linear "
               "classifier over packet features"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file (flags win)");
  app.fallthrough();

  wavepack::cli::register_verify(app);
  wavepack::cli::register_transform(app);
  wavepack::cli::register_packets(app);
  wavepack::cli::register_stats(app);
  wavepack::cli::register_train(app);
  wavepack::cli::register_evaluate(app);
  wavepack::cli::register_labels(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const wavepack::invariant_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 1;
  } catch (const wavepack::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
