#include <csignal>

#include "socialist/cli.hpp"

namespace {

void on_interrupt(int) { socialist::cli::interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
  return socialist::cli::run(argc, argv);
}
