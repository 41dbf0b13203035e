#include "tendonstat/cli.hpp"

int main(int argc, char** argv) { return tendonstat::cli::main(argc, argv); }
