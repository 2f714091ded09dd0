#include "hkmc/cli.hpp"

int main(int argc, char** argv) { return hkmc::run_cli(argc, argv); }
