#include "tcflow/cli.hpp"

int main(int argc, char** argv) { return tcflow::run_cli(argc, argv); }
