#include "cli.hpp"

int main(int argc, char** argv) { return cliqueloop::cli::run(argc, argv); }
