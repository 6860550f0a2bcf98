#include "vlcstat/cli.hpp"

int main(int argc, char** argv) { return vlcstat::run_cli(argc, argv); }
