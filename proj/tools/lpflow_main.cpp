#include "lpflow/cli.hpp"

int main(int argc, char** argv) { return lpflow::cli_main(argc, argv); }
