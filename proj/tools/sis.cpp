#include "sis/cli.hpp"

int main(int argc, char** argv) { return sis::cli::run(argc, argv); }
