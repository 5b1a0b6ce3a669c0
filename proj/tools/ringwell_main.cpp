#include "ringwell/cli.hpp"

int main(int argc, char** argv) { return ringwell::run_cli(argc, argv); }
