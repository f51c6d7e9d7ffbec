#include "hopf/cli.hpp"

int main(int argc, char** argv) { return hopf::cli_main(argc, argv); }
