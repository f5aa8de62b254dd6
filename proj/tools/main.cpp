#include "gyroball/cli.hpp"

int main(int argc, char** argv) { return gyroball::cli_main(argc, argv); }
