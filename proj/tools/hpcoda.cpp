#include "hpcoda/cli/cli.hpp"

int main(int argc, char** argv) { return hpcoda::cli::run(argc, argv); }
