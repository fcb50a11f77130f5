#include "commands.hpp"

int main(int argc, char** argv) { return qkin::cli::run_cli(argc, argv); }
