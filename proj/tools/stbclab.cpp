#include "stbclab/cli.hpp"

int main(int argc, char** argv) { return stbclab::cli::run_cli(argc, argv); }
