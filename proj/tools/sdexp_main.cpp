#include "sdexp/cli.hpp"

int main(int argc, char** argv) { return sdexp::run_cli(argc, argv); }
