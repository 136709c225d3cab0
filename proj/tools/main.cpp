#include "gasket/cli.hpp"

int main(int argc, char** argv) { return gasket::cli_main(argc, argv); }
