#include "weylscope/cli.hpp"

int main(int argc, char** argv) { return weylscope::run_cli(argc, argv); }
