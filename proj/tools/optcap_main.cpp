#include "optcap/cli.hpp"

int main(int argc, char** argv) { return optcap::cli::run(argc, argv); }
