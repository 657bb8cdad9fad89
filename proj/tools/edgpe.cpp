#include "edgpe/commands.hpp"

int main(int argc, char** argv) { return edgpe::run_cli(argc, argv); }
