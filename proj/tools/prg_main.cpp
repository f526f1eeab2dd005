#include "prg/cli.hpp"

int main(int argc, char** argv) { return prg::cli::run_cli(argc, argv); }
