#include "fluxherm/cli.hpp"

int main(int argc, char** argv) { return fluxherm::cliMain(argc, argv); }
