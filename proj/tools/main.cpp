#include "ionpulse/cli.hpp"

int main(int argc, char** argv) { return ionpulse::run_cli(argc, argv); }
