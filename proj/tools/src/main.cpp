#include "jumpmc_cli/commands.hpp"

int main(int argc, char** argv) { return jumpmc::cli::run_cli(argc, argv); }
