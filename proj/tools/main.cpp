#include "skycast/cli.hpp"

int main(int argc, char** argv) { return skycast::cli_main(argc, argv); }
