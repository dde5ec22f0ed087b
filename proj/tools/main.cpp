#include "roadwork/cli.hpp"

int main(int argc, char** argv) { return roadwork::cli::run_cli(argc, argv); }
