#include "stcf/cli.hpp"

int main(int argc, char** argv) { return stcf::run_cli(argc, argv); }
