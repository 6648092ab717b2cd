#include "pisum/cli.hpp"

int main(int argc, char** argv) { return pisum::cli::main(argc, argv); }
