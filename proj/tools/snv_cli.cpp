#include "snv/cli.hpp"

int main(int argc, char** argv) { return snv::cli_main(argc, argv); }
