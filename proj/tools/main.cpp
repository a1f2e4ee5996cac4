#include "corrgeo/cli.hpp"

int main(int argc, char** argv) { return corrgeo::cli_main(argc, argv); }
