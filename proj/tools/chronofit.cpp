#include "chronofit/cli.hpp"

int main(int argc, char** argv) { return chronofit::cli::run(argc, argv); }
