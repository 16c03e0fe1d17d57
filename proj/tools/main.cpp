#include "ccgame/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  ccgame::cli::RunManifest manifest;
  if (auto code = ccgame::cli::parse_args(argc, argv, manifest, std::cout, std::cerr)) return *code;
  return ccgame::cli::run(manifest, std::cout, std::cerr);
}
