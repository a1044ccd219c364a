#include "cli.hpp"

int main(int argc, char** argv) { return homodyne::cli::run(argc, argv); }
